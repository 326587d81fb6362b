#include "spw/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "spw/baselines.hpp"
#include "spw/dataset.hpp"
#include "spw/error.hpp"
#include "spw/evaluation.hpp"
#include "spw/io.hpp"
#include "spw/policy.hpp"
#include "spw/reward_model.hpp"
#include "spw/rng.hpp"
#include "spw/version.hpp"

namespace spw {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- helpers

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    return json(x).dump();
}

json config_json(const Config& config) {
    json j = json::object();
    for (const auto& [key, value] : config.entries()) j[key] = value;
    return j;
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}

/// Leading provenance comments shared by every CSV the pipeline emits.
void write_csv_header(std::ofstream& out, const Config& config, const std::string& columns) {
    out << "# version: " << kVersion << '\n';
    out << "# config:";
    for (const auto& [key, value] : config.entries()) out << ' ' << key << '=' << value;
    out << '\n';
    out << columns << '\n';
}

std::ofstream open_csv(const fs::path& path, const Config& config, const std::string& columns) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
    write_csv_header(out, config, columns);
    return out;
}

void write_manifest(const fs::path& dir, const Config& config) {
    write_json_file(dir / "manifest.json",
                    json{{"version", kVersion}, {"config", config_json(config)}});
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const Vec& values) {
    MeanStd out;
    if (values.empty()) return out;
    const double n = static_cast<double>(values.size());
    for (double v : values) out.mean += v;
    out.mean /= n;
    double acc = 0.0;
    for (double v : values) acc += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(acc / n);
    return out;
}

// ------------------------------------------------------------- run pieces

TaskParams task_params_from_config(const Config& config) {
    TaskParams p;
    p.gamma = config.get_double("task.gamma");
    p.horizon = config.get_int("task.horizon");
    p.grid_size = config.get_int("task.grid_size");
    p.bound = config.get_double("task.bound");
    p.step = config.get_double("task.step");
    p.goal_x = config.get_double("task.goal_x");
    p.goal_y = config.get_double("task.goal_y");
    p.goal_radius = config.get_double("task.goal_radius");
    p.plan_cells = config.get_int("task.plan_cells");
    return p;
}

TrainConfig train_config_from(const Config& config, std::uint64_t seed) {
    TrainConfig tc;
    tc.learning_rate = config.get_double("train.lr");
    tc.batch_size = config.get_int("train.batch_size");
    tc.epochs = config.get_int("train.epochs");
    tc.seed = seed;
    const std::string opt = config.get("train.optimizer");
    if (opt == "adam")
        tc.optimizer = Optimizer::adam;
    else if (opt == "sgd")
        tc.optimizer = Optimizer::sgd;
    else
        fail(ErrorCode::parse, "unknown optimizer '" + opt + "'");
    tc.adam_beta1 = config.get_double("train.adam_beta1");
    tc.adam_beta2 = config.get_double("train.adam_beta2");
    tc.adam_epsilon = config.get_double("train.adam_epsilon");
    tc.legacy_sum_scale = config.get_bool("train.legacy_sum_scale");
    return tc;
}

IndexOptions index_options_from(const Config& config) {
    IndexOptions opts;
    opts.standardize = config.get_bool("standardize");
    return opts;
}

/// Reward function restored from a seed directory's checkpoint, with the
/// objects it closes over kept alive.
struct RewardView {
    std::string kind;
    RewardFn fn;
    std::shared_ptr<RewardModel> model;
    std::shared_ptr<NearestNeighborIndex> index;
};

RewardView load_reward_view(const Config& config, const fs::path& seed_dir) {
    const fs::path checkpoint = seed_dir / "checkpoint.json";
    if (!fs::exists(checkpoint))
        fail(ErrorCode::io, "missing checkpoint '" + checkpoint.string() + "'; run train first");

    std::ifstream in(checkpoint);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded())
        fail(ErrorCode::parse, "checkpoint '" + checkpoint.string() + "' is not valid JSON");
    const std::string kind = j.value("kind", "");

    RewardView view;
    view.kind = kind;
    if (kind == "mlp") {
        view.model = std::make_shared<RewardModel>(load_model(checkpoint.string()));
        view.fn = [model = view.model](const Transition& t) {
            return predict_reward(*model, t);
        };
        return view;
    }
    if (kind == "seabo") {
        const auto experts = load_trajectories((seed_dir / "expert.jsonl").string());
        const auto expert_set = build_expert_transition_set(experts);
        view.index = std::make_shared<NearestNeighborIndex>(
            NearestNeighborIndex::build(expert_set, index_options_from(config)));
        SeaboConfig sc{j.at("beta").get<double>(), j.at("amplitude").get<double>()};
        view.fn = [index = view.index, sc](const Transition& t) {
            return seabo_reward(*index, t, sc);
        };
        return view;
    }
    fail(ErrorCode::parse, "checkpoint '" + checkpoint.string() + "' has unknown kind");
}

/// Heavier gt spread first, so the plotted segment actually shows an event.
size_t pick_credit_segment(const std::vector<Segment>& segments) {
    size_t best = 0;
    double best_var = -1.0;
    for (size_t i = 0; i < segments.size(); ++i) {
        if (!segments[i].has_rewards()) continue;
        const MeanStd ms = mean_std(*segments[i].gt_rewards);
        if (ms.std * ms.std > best_var) {
            best_var = ms.std * ms.std;
            best = i;
        }
    }
    return best;
}

std::vector<Segment> eval_segments(const Config& config, const fs::path& seed_dir,
                                   std::uint64_t seed) {
    const auto behaviors = load_trajectories((seed_dir / "behavior.jsonl").string());
    return sample_segments(behaviors, config.get_int("H"), config.get_int("eval.segments"),
                           derive_seed(seed, RngStream::evaluation));
}

/// Held-out accuracy and margin statistics for an arbitrary reward function
/// under a given per-segment weighting.
struct HeldoutScore {
    double accuracy = 0.0;
    double margin_mean_abs = 0.0;
};

HeldoutScore score_heldout(const RewardFn& fn, const std::vector<PreferencePair>& pairs,
                           const std::function<Vec(const Segment&)>& weigh) {
    if (pairs.empty()) fail(ErrorCode::empty_input, "no held-out pairs");
    double credit = 0.0;
    double margin_abs = 0.0;
    size_t counted = 0;
    for (const auto& pair : pairs) {
        if (pair.label == 0.5) continue;
        ++counted;
        auto weighted_return_of = [&](const Segment& seg) {
            const Vec w = weigh(seg);
            double r = 0.0;
            for (size_t t = 0; t < seg.length(); ++t) r += w[t] * fn(seg.transitions[t]);
            return r;
        };
        const double margin = weighted_return_of(pair.seg0) - weighted_return_of(pair.seg1);
        margin_abs += std::abs(margin);
        const double p = logistic(margin);
        if (p == 0.5)
            credit += 0.5;
        else if ((p > 0.5) == (pair.label == 0.0))
            credit += 1.0;
    }
    if (counted == 0)
        fail(ErrorCode::empty_input, "every held-out pair is a tie; accuracy undefined");
    return HeldoutScore{credit / static_cast<double>(counted),
                        margin_abs / static_cast<double>(counted)};
}

std::map<std::uint64_t, MetricMap> evaluate_all_seeds(const Config& config);

}  // namespace

// ------------------------------------------------------------- public API

RunLayout RunLayout::resolve(const Config& config) {
    RunLayout layout;
    const fs::path outdir = config.get("outdir");
    layout.task_dir = outdir / config.get("task");
    const std::string subdir =
        config.has("run.subdir") ? config.get("run.subdir") : config.get("method");
    layout.method_dir = layout.task_dir / subdir;
    return layout;
}

fs::path RunLayout::seed_dir(std::uint64_t seed) const {
    return method_dir / ("seed" + std::to_string(seed));
}

SyntheticTask task_from_config(const Config& config) {
    return SyntheticTask::make(config.get("task"), task_params_from_config(config));
}

void generate_seed(const Config& config, const SyntheticTask& task, std::uint64_t seed) {
    const RunLayout layout = RunLayout::resolve(config);
    const fs::path dir = layout.seed_dir(seed);
    fs::create_directories(dir);

    const auto [experts, behaviors] = generate_synthetic_mdp_data(
        task, config.get_int("n_expert"), config.get_int("n_behavior"),
        config.get_double("noise"), seed);
    save_trajectories((dir / "expert.jsonl").string(), experts);
    save_trajectories((dir / "behavior.jsonl").string(), behaviors);

    const int H = config.get_int("H");
    const double tie_epsilon = config.get_double("tie_epsilon");
    const int n_prefs = config.get_int("n_preferences");
    const int n_heldout = config.get_int("n_heldout");

    const auto train_segments =
        sample_segments(behaviors, H, 2 * n_prefs, derive_seed(seed, RngStream::segment_sampling));
    save_preferences((dir / "prefs.jsonl").string(), pair_and_label(train_segments, tie_epsilon));

    const auto heldout_segments = sample_segments(
        behaviors, H, 2 * n_heldout, derive_seed(seed, RngStream::heldout_sampling));
    save_preferences((dir / "prefs_heldout.jsonl").string(),
                     pair_and_label(heldout_segments, tie_epsilon));

    write_manifest(dir, config);
}

void train_seed(const Config& config, const SyntheticTask& task, std::uint64_t seed) {
    const RunLayout layout = RunLayout::resolve(config);
    const fs::path dir = layout.seed_dir(seed);
    const std::string method = config.get("method");
    const Temperature tau = config.get_temperature("tau");

    json log_json{{"version", kVersion},
                  {"config", config_json(config)},
                  {"task", task.name()},
                  {"method", method},
                  {"seed", seed}};

    if (method == "seabo") {
        // no reward-model training: the reward is a fixed function of the
        // nearest-expert distance
        write_json_file(dir / "checkpoint.json",
                        json{{"format_version", 1},
                             {"kind", "seabo"},
                             {"beta", config.get_double("seabo.beta")},
                             {"amplitude", config.get_double("seabo.amplitude")}});
        log_json["epochs"] = json::array();
        write_json_file(dir / "train_log.json", log_json);
        return;
    }

    const auto prefs = load_preferences((dir / "prefs.jsonl").string());
    TrainConfig tc = train_config_from(config, seed);

    RewardModel model = init_model(
        static_cast<int>(task.state_dim()), static_cast<int>(task.action_dim()),
        config.get_int_list("train.hidden"), seed,
        activation_from_string(config.get("train.activation")),
        squash_from_string(config.get("train.squash")));

    TrainLog log;
    if (method == "spw" || method == "rd") {
        const auto experts = load_trajectories((dir / "expert.jsonl").string());
        const auto expert_set = build_expert_transition_set(experts);
        tc.weight_mode = WeightMode::spw;
        if (method == "rd") {
            tc.redistribution_lambda = config.get_double("rd.lambda");
            log_json["rd_lambda"] = tc.redistribution_lambda;
        }
        log_json["tau"] = tau.str();
        log = train_reward(model, prefs, &expert_set, tau, tc, index_options_from(config));
    } else if (method == "mr") {
        log = mr_train(model, prefs, tc);
    } else if (method == "drex") {
        const auto experts = load_trajectories((dir / "expert.jsonl").string());
        const auto behaviors = load_trajectories((dir / "behavior.jsonl").string());
        const int H = config.get_int("H");
        const int k = config.get_int("drex.k");
        const auto expert_segments = sample_segments(
            experts, H, k, derive_seed(seed, RngStream::augmentation_expert_segments));
        const auto behavior_segments = sample_segments(
            behaviors, H, k, derive_seed(seed, RngStream::augmentation_behavior_segments));
        auto merged = prefs;
        const auto augmented = drex_augment(expert_segments, behavior_segments, k, seed);
        merged.insert(merged.end(), augmented.begin(), augmented.end());
        log_json["augmented_pairs"] = k;
        log = mr_train(model, merged, tc);
    } else {
        fail(ErrorCode::invalid_argument, "unknown method '" + method + "'");
    }

    save_model((dir / "checkpoint.json").string(), model);
    json epochs = json::array();
    for (const auto& record : log.epochs)
        epochs.push_back(json{{"epoch", record.epoch},
                              {"loss", record.loss},
                              {"accuracy", record.accuracy}});
    log_json["epochs"] = std::move(epochs);
    write_json_file(dir / "train_log.json", log_json);
}

MetricMap evaluate_seed(const Config& config, const SyntheticTask& task, std::uint64_t seed) {
    const RunLayout layout = RunLayout::resolve(config);
    const fs::path dir = layout.seed_dir(seed);
    const std::string method = config.get("method");
    const RewardView view = load_reward_view(config, dir);

    // downstream policy quality
    const Vec table = reward_fn_table(task, view.fn);
    const auto vi = value_iteration_table(task, table, config.get_double("vi.tol"),
                                          config.get_int("vi.max_iters"));
    const double success = success_rate(vi.policy, task, config.get_int("eval.episodes"),
                                        derive_seed(seed, RngStream::rollouts));

    // reward-distribution fidelity and per-step agreement, pooled over a
    // fixed evaluation set of segments
    const auto segments = eval_segments(config, dir, seed);
    Vec pooled_model, pooled_gt;
    Vec per_segment_std;
    for (const auto& seg : segments) {
        if (!seg.has_rewards())
            fail(ErrorCode::empty_input, "evaluation segments need ground-truth rewards");
        Vec rewards;
        rewards.reserve(seg.length());
        for (const auto& tr : seg.transitions) rewards.push_back(view.fn(tr));
        per_segment_std.push_back(mean_std(rewards).std);
        pooled_model.insert(pooled_model.end(), rewards.begin(), rewards.end());
        pooled_gt.insert(pooled_gt.end(), seg.gt_rewards->begin(), seg.gt_rewards->end());
    }

    const int bins = config.get_int("eval.bins");
    const RewardHistogram gt_hist = reward_histogram(pooled_gt, bins);
    const RewardHistogram model_hist = reward_histogram(pooled_model, bins);
    const double kl = kl_divergence(gt_hist, model_hist);

    double pearson_r = std::nan("");
    double spearman_rho = std::nan("");
    try {
        const Correlations c = pearson_spearman(pooled_model, pooled_gt);
        pearson_r = c.pearson;
        spearman_rho = c.spearman;
    } catch (const Error&) {
        // constant pooled rewards leave the correlations undefined
    }

    // held-out preference accuracy under the method's own weighting
    const auto heldout = load_preferences((dir / "prefs_heldout.jsonl").string());
    const Temperature tau = config.get_temperature("tau");
    std::function<Vec(const Segment&)> weigh = [](const Segment& seg) {
        return Vec(seg.length(), 1.0 / static_cast<double>(seg.length()));
    };
    std::shared_ptr<NearestNeighborIndex> heldout_index;
    if ((method == "spw" || method == "rd") && !tau.is_infinite()) {
        const auto experts = load_trajectories((dir / "expert.jsonl").string());
        const auto expert_set = build_expert_transition_set(experts);
        heldout_index = std::make_shared<NearestNeighborIndex>(
            NearestNeighborIndex::build(expert_set, index_options_from(config)));
        weigh = [heldout_index, tau](const Segment& seg) {
            return extract_weights(heldout_index->segment_distances(seg), tau);
        };
    }
    const HeldoutScore heldout_score = score_heldout(view.fn, heldout, weigh);

    MetricMap metrics;
    metrics["success_rate"] = success;
    metrics["kl_gt_model"] = kl;
    metrics["pearson_gt_model"] = pearson_r;
    metrics["spearman_gt_model"] = spearman_rho;
    metrics["pref_accuracy_heldout"] = heldout_score.accuracy;
    metrics["bt_margin_mean_abs"] = heldout_score.margin_mean_abs;
    metrics["segment_reward_std"] = mean_std(per_segment_std).mean;

    json metrics_json = json::object();
    for (const auto& [name, value] : metrics)
        metrics_json[name] = std::isnan(value) ? json() : json(value);
    write_json_file(dir / "metrics.json", json{{"version", kVersion},
                                               {"config", config_json(config)},
                                               {"task", task.name()},
                                               {"method", method},
                                               {"seed", seed},
                                               {"metrics", metrics_json}});

    // credit profile of the most eventful evaluation segment
    const Segment& credit_seg = segments[pick_credit_segment(segments)];
    const Vec gt_profile = min_max_normalize(*credit_seg.gt_rewards);
    const Vec model_profile = credit_profile_of(view.fn, credit_seg);
    std::ofstream csv = open_csv(dir / "credit_profile.csv", config, "step,gt,model");
    for (size_t t = 0; t < credit_seg.length(); ++t)
        csv << t << ',' << fmt_double(gt_profile[t]) << ',' << fmt_double(model_profile[t])
            << '\n';

    return metrics;
}

namespace {

std::map<std::uint64_t, MetricMap> evaluate_all_seeds(const Config& config) {
    const SyntheticTask task = task_from_config(config);
    const RunLayout layout = RunLayout::resolve(config);
    std::map<std::uint64_t, MetricMap> by_seed;
    for (std::uint64_t seed : config.get_uint64_list("seeds"))
        by_seed[seed] = evaluate_seed(config, task, seed);

    // long-form per-seed rows plus a mean/std aggregate
    const std::string task_name = config.get("task");
    const std::string method = config.get("method");
    std::ofstream rows =
        open_csv(layout.method_dir / "metrics_by_seed.csv", config, "task,method,seed,metric,value");
    for (const auto& [seed, metrics] : by_seed)
        for (const auto& [name, value] : metrics)
            rows << task_name << ',' << method << ',' << seed << ',' << name << ','
                 << fmt_double(value) << '\n';

    std::ofstream agg =
        open_csv(layout.method_dir / "aggregate.csv", config, "task,method,metric,mean,std");
    json agg_metrics = json::object();
    if (!by_seed.empty()) {
        for (const auto& [name, unused] : by_seed.begin()->second) {
            Vec values;
            for (const auto& [seed, metrics] : by_seed) values.push_back(metrics.at(name));
            const MeanStd ms = mean_std(values);
            agg << task_name << ',' << method << ',' << name << ',' << fmt_double(ms.mean) << ','
                << fmt_double(ms.std) << '\n';
            agg_metrics[name] = json{{"mean", std::isnan(ms.mean) ? json() : json(ms.mean)},
                                     {"std", std::isnan(ms.std) ? json() : json(ms.std)}};
        }
    }
    write_json_file(layout.method_dir / "aggregate.json",
                    json{{"version", kVersion},
                         {"config", config_json(config)},
                         {"task", task_name},
                         {"method", method},
                         {"metrics", agg_metrics}});
    return by_seed;
}

}  // namespace

void run_generate(const Config& config) {
    const SyntheticTask task = task_from_config(config);
    for (std::uint64_t seed : config.get_uint64_list("seeds")) generate_seed(config, task, seed);
}

void run_train(const Config& config) {
    const SyntheticTask task = task_from_config(config);
    for (std::uint64_t seed : config.get_uint64_list("seeds")) train_seed(config, task, seed);
}

void run_evaluate(const Config& config) { evaluate_all_seeds(config); }

void run_ablate_tau(const Config& config) {
    const RunLayout base_layout = RunLayout::resolve(config);
    fs::create_directories(base_layout.task_dir);

    struct Row {
        std::string tau;
        std::uint64_t seed;
        double success;
    };
    std::vector<Row> rows;
    std::vector<std::pair<std::string, MeanStd>> aggregates;

    for (const std::string& tau_text : config.get_list("ablate.taus")) {
        Temperature::parse(tau_text);  // validate before running anything
        Config derived = config;
        derived.set("method", "spw");
        derived.set("tau", tau_text);
        derived.set("run.subdir", "spw-tau-" + tau_text);
        run_generate(derived);
        run_train(derived);
        const auto by_seed = evaluate_all_seeds(derived);
        Vec successes;
        for (const auto& [seed, metrics] : by_seed) {
            rows.push_back(Row{tau_text, seed, metrics.at("success_rate")});
            successes.push_back(metrics.at("success_rate"));
        }
        aggregates.emplace_back(tau_text, mean_std(successes));
    }

    std::ofstream csv =
        open_csv(base_layout.task_dir / "ablate_tau.csv", config, "tau,seed,success_rate");
    for (const auto& row : rows)
        csv << row.tau << ',' << row.seed << ',' << fmt_double(row.success) << '\n';

    std::ofstream agg = open_csv(base_layout.task_dir / "ablate_tau_aggregate.csv", config,
                                 "tau,mean,std");
    for (const auto& [tau_text, ms] : aggregates)
        agg << tau_text << ',' << fmt_double(ms.mean) << ',' << fmt_double(ms.std) << '\n';
}

void run_compare(const Config& config) {
    const RunLayout base_layout = RunLayout::resolve(config);
    fs::create_directories(base_layout.task_dir);

    const auto methods = config.get_list("compare.methods");
    std::map<std::string, std::map<std::string, MeanStd>> by_method;
    for (const std::string& method : methods) {
        Config derived = config;
        derived.set("method", method);
        derived.set("run.subdir", method);
        run_generate(derived);
        run_train(derived);
        const auto by_seed = evaluate_all_seeds(derived);
        for (const auto& [name, unused] : by_seed.begin()->second) {
            Vec values;
            for (const auto& [seed, metrics] : by_seed) values.push_back(metrics.at(name));
            by_method[method][name] = mean_std(values);
        }
    }

    std::ofstream csv =
        open_csv(base_layout.task_dir / "compare.csv", config, "method,metric,mean,std");
    for (const std::string& method : methods)
        for (const auto& [name, ms] : by_method[method])
            csv << method << ',' << name << ',' << fmt_double(ms.mean) << ','
                << fmt_double(ms.std) << '\n';

    // side-by-side credit profiles on one shared evaluation segment
    const SyntheticTask task = task_from_config(config);
    const std::uint64_t first_seed = config.get_uint64_list("seeds").front();
    Config first_method_config = config;
    first_method_config.set("method", methods.front());
    first_method_config.set("run.subdir", methods.front());
    const fs::path first_dir = RunLayout::resolve(first_method_config).seed_dir(first_seed);
    const auto segments = eval_segments(first_method_config, first_dir, first_seed);
    const Segment& credit_seg = segments[pick_credit_segment(segments)];

    std::string columns = "step,gt";
    for (const auto& method : methods) columns += "," + method;
    std::ofstream profile_csv =
        open_csv(base_layout.task_dir / "credit_profiles.csv", config, columns);

    const Vec gt_profile = min_max_normalize(*credit_seg.gt_rewards);
    std::vector<Vec> profiles;
    for (const std::string& method : methods) {
        Config derived = config;
        derived.set("method", method);
        derived.set("run.subdir", method);
        const RewardView view =
            load_reward_view(derived, RunLayout::resolve(derived).seed_dir(first_seed));
        profiles.push_back(credit_profile_of(view.fn, credit_seg));
    }
    for (size_t t = 0; t < credit_seg.length(); ++t) {
        profile_csv << t << ',' << fmt_double(gt_profile[t]);
        for (const auto& profile : profiles) profile_csv << ',' << fmt_double(profile[t]);
        profile_csv << '\n';
    }
}

void run_command(const std::string& command, const Config& config) {
    if (command == "generate") return run_generate(config);
    if (command == "train") return run_train(config);
    if (command == "evaluate") return run_evaluate(config);
    if (command == "ablate-tau") return run_ablate_tau(config);
    if (command == "compare") return run_compare(config);
    fail(ErrorCode::invalid_argument, "unknown subcommand '" + command + "'");
}

}  // namespace spw
