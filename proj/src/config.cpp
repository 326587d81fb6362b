#include "spw/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "spw/error.hpp"

namespace spw {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

Config Config::defaults() {
    Config c;
    auto& v = c.values_;
    v["task"] = "grid-nav";
    v["method"] = "spw";
    v["tau"] = "0.7";
    v["seeds"] = "0,1,2,3,4";
    v["outdir"] = "runs";
    v["n_expert"] = "1";
    v["n_behavior"] = "80";
    v["n_preferences"] = "200";
    v["n_heldout"] = "100";
    v["H"] = "25";
    v["noise"] = "0.5";
    v["tie_epsilon"] = "0";
    v["standardize"] = "false";

    v["task.gamma"] = "0.99";
    v["task.horizon"] = "60";
    v["task.grid_size"] = "15";
    v["task.bound"] = "5";
    v["task.step"] = "0.25";
    v["task.goal_x"] = "4.3";
    v["task.goal_y"] = "4.3";
    v["task.goal_radius"] = "0.45";
    v["task.plan_cells"] = "50";

    v["train.hidden"] = "32,32";
    v["train.activation"] = "relu";
    v["train.squash"] = "tanh";
    v["train.optimizer"] = "adam";
    v["train.lr"] = "0.001";
    v["train.batch_size"] = "16";
    v["train.epochs"] = "80";
    v["train.adam_beta1"] = "0.9";
    v["train.adam_beta2"] = "0.999";
    v["train.adam_epsilon"] = "1e-8";
    v["train.legacy_sum_scale"] = "false";

    v["rd.lambda"] = "1.0";
    v["seabo.beta"] = "1.0";
    v["seabo.amplitude"] = "1.0";
    v["drex.k"] = "100";

    v["eval.bins"] = "20";
    v["eval.segments"] = "100";
    v["eval.episodes"] = "200";
    v["vi.tol"] = "1e-8";
    v["vi.max_iters"] = "100000";

    v["ablate.taus"] = "0.5,0.7,1,2,inf";
    v["compare.methods"] = "spw,mr,seabo,drex,rd";
    return c;
}

void Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open config '" + path + "'");
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::parse,
                 "config line " + std::to_string(line_no) + " is not 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            fail(ErrorCode::parse, "config line " + std::to_string(line_no) + " has no key");
        values_[key] = value;
    }
}

void Config::set(const std::string& key, const std::string& value) {
    if (key.empty()) fail(ErrorCode::invalid_argument, "config key must not be empty");
    values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) fail(ErrorCode::invalid_argument, "missing config key '" + key + "'");
    return it->second;
}

int Config::get_int(const std::string& key) const {
    const std::string v = get(key);
    try {
        size_t pos = 0;
        const int out = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        fail(ErrorCode::parse, "config key '" + key + "' is not an integer: '" + v + "'");
    }
}

double Config::get_double(const std::string& key) const {
    const std::string v = get(key);
    try {
        size_t pos = 0;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        fail(ErrorCode::parse, "config key '" + key + "' is not a number: '" + v + "'");
    }
}

bool Config::get_bool(const std::string& key) const {
    std::string v = get(key);
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(ErrorCode::parse, "config key '" + key + "' is not a boolean: '" + v + "'");
}

std::uint64_t Config::get_uint64(const std::string& key) const {
    const std::string v = get(key);
    try {
        size_t pos = 0;
        const unsigned long long out = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return static_cast<std::uint64_t>(out);
    } catch (const std::exception&) {
        fail(ErrorCode::parse, "config key '" + key + "' is not an unsigned integer: '" + v + "'");
    }
}

Temperature Config::get_temperature(const std::string& key) const {
    return Temperature::parse(get(key));
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    const std::string v = get(key);
    std::vector<std::string> out;
    std::stringstream stream(v);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    if (out.empty()) fail(ErrorCode::parse, "config key '" + key + "' lists no items");
    return out;
}

std::vector<int> Config::get_int_list(const std::string& key) const {
    std::vector<int> out;
    for (const auto& item : get_list(key)) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            fail(ErrorCode::parse, "config key '" + key + "' has a non-integer item '" + item + "'");
        }
    }
    return out;
}

std::vector<std::uint64_t> Config::get_uint64_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const auto& item : get_list(key)) {
        try {
            out.push_back(static_cast<std::uint64_t>(std::stoull(item)));
        } catch (const std::exception&) {
            fail(ErrorCode::parse, "config key '" + key + "' has a bad seed '" + item + "'");
        }
    }
    return out;
}

}  // namespace spw
