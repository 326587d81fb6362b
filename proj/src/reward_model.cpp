#include "spw/reward_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "spw/error.hpp"
#include "spw/rng.hpp"

namespace spw {

using nlohmann::json;

namespace {

double apply_activation(double z, Activation a) {
    return a == Activation::tanh ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

/// Derivative expressed through the stored post-activation value.
double activation_grad(double post, double pre, Activation a) {
    return a == Activation::tanh ? 1.0 - post * post : (pre > 0.0 ? 1.0 : 0.0);
}

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// Per-step forward pass state kept for backpropagation.
struct MlpWork {
    std::vector<Vec> acts;  // acts[0] = input, acts[l+1] = activation(pre[l])
    std::vector<Vec> pre;
    double output = 0.0;  // squashed

    void resize(const RewardModel& model) {
        const size_t layers = model.num_layers();
        acts.resize(layers + 1);
        pre.resize(layers);
        for (size_t l = 0; l <= layers; ++l) acts[l].resize(model.layer_dims[l]);
        for (size_t l = 0; l < layers; ++l) pre[l].resize(model.layer_dims[l + 1]);
    }
};

double forward(const RewardModel& model, std::span<const double> input, MlpWork& work) {
    const size_t layers = model.num_layers();
    std::copy(input.begin(), input.end(), work.acts[0].begin());
    for (size_t l = 0; l < layers; ++l) {
        const int in_dim = model.layer_dims[l];
        const int out_dim = model.layer_dims[l + 1];
        const double* w = model.weights[l].data();
        const Vec& x = work.acts[l];
        Vec& z = work.pre[l];
        for (int o = 0; o < out_dim; ++o) {
            double acc = model.biases[l][o];
            const double* row = w + static_cast<size_t>(o) * in_dim;
            for (int i = 0; i < in_dim; ++i) acc += row[i] * x[i];
            z[o] = acc;
        }
        if (l + 1 < layers) {
            for (int o = 0; o < out_dim; ++o)
                work.acts[l + 1][o] = apply_activation(z[o], model.activation);
        }
    }
    const double raw = work.pre[layers - 1][0];
    work.output = model.squash == Squash::tanh ? std::tanh(raw) : raw;
    return work.output;
}

/// Accumulates parameter gradients for one step given dLoss/dOutput.
void backward(const RewardModel& model, const MlpWork& work, double output_grad,
              Gradients& grads) {
    const size_t layers = model.num_layers();
    double g = output_grad;
    if (model.squash == Squash::tanh) g *= 1.0 - work.output * work.output;

    Vec delta{g};
    Vec next_delta;
    for (size_t l = layers; l-- > 0;) {
        const int in_dim = model.layer_dims[l];
        const int out_dim = model.layer_dims[l + 1];
        const Vec& x = work.acts[l];
        double* gw = grads.weights[l].data();
        for (int o = 0; o < out_dim; ++o) {
            const double d = delta[o];
            grads.biases[l][o] += d;
            double* row = gw + static_cast<size_t>(o) * in_dim;
            for (int i = 0; i < in_dim; ++i) row[i] += d * x[i];
        }
        if (l == 0) break;
        next_delta.assign(in_dim, 0.0);
        const double* w = model.weights[l].data();
        for (int o = 0; o < out_dim; ++o) {
            const double d = delta[o];
            const double* row = w + static_cast<size_t>(o) * in_dim;
            for (int i = 0; i < in_dim; ++i) next_delta[i] += row[i] * d;
        }
        for (int i = 0; i < in_dim; ++i)
            next_delta[i] *= activation_grad(x[i], work.pre[l - 1][i], model.activation);
        delta.swap(next_delta);
    }
}

void check_pair(const RewardModel& model, const WeightedPair& pair) {
    if (!is_valid_label(pair.label))
        fail(ErrorCode::invalid_argument, "preference label must be 0, 0.5 or 1");
    for (const WeightedSegment* ws : {&pair.seg0, &pair.seg1}) {
        if (ws->weights.size() != ws->segment.length())
            fail(ErrorCode::dimension_mismatch, "weight vector length differs from segment");
        if (ws->segment.length() == 0) fail(ErrorCode::empty_input, "empty segment in pair");
        for (const auto& tr : ws->segment.transitions)
            if (static_cast<int>(tr.state_dim() + tr.action_dim()) != model.input_dim())
                fail(ErrorCode::dimension_mismatch,
                     "transition width does not match model input");
    }
}

struct PairEval {
    double z = 0.0;      // R0 - R1
    double loss = 0.0;   // cross-entropy part
};

/// One pass over a batch: loss value plus (optionally) gradients.
double batch_loss(const RewardModel& model, std::span<const WeightedPair> batch,
                  double rd_lambda, Gradients* grads) {
    if (batch.empty()) fail(ErrorCode::empty_input, "empty preference batch");
    const double inv_pairs = 1.0 / static_cast<double>(batch.size());
    const double inv_segments = 1.0 / (2.0 * static_cast<double>(batch.size()));

    std::vector<MlpWork> work0, work1;
    Vec y0, y1, input;
    double total = 0.0;

    for (const WeightedPair& pair : batch) {
        check_pair(model, pair);
        const size_t h0 = pair.seg0.segment.length();
        const size_t h1 = pair.seg1.segment.length();
        work0.resize(std::max(work0.size(), h0));
        work1.resize(std::max(work1.size(), h1));
        y0.resize(h0);
        y1.resize(h1);

        auto run_side = [&](const WeightedSegment& ws, std::vector<MlpWork>& work, Vec& y) {
            double r = 0.0;
            for (size_t t = 0; t < ws.segment.length(); ++t) {
                work[t].resize(model);
                input = ws.segment.transitions[t].concat();
                y[t] = forward(model, input, work[t]);
                r += ws.weights[t] * y[t];
            }
            return r;
        };
        const double r0 = run_side(pair.seg0, work0, y0);
        const double r1 = run_side(pair.seg1, work1, y1);
        const double z = r0 - r1;
        const double l = pair.label;
        total += ((1.0 - l) * softplus(-z) + l * softplus(z)) * inv_pairs;

        double rd0 = 0.0, rd1 = 0.0;
        auto rd_term = [&](const WeightedSegment& ws, const Vec& y) {
            const double sum = std::accumulate(y.begin(), y.end(), 0.0);
            double acc = 0.0;
            for (size_t t = 0; t < y.size(); ++t) {
                const double err = y[t] - ws.weights[t] * sum;
                acc += err * err;
            }
            return acc / static_cast<double>(y.size());
        };
        if (rd_lambda > 0.0) {
            rd0 = rd_term(pair.seg0, y0);
            rd1 = rd_term(pair.seg1, y1);
            total += rd_lambda * (rd0 + rd1) * inv_segments;
        }

        if (grads) {
            const double dz = logistic(z) - (1.0 - l);
            auto back_side = [&](const WeightedSegment& ws, const std::vector<MlpWork>& work,
                                 const Vec& y, double sign) {
                const size_t h = ws.segment.length();
                const double sum = std::accumulate(y.begin(), y.end(), 0.0);
                for (size_t t = 0; t < h; ++t) {
                    double g = sign * dz * ws.weights[t] * inv_pairs;
                    if (rd_lambda > 0.0) {
                        // targets w_t * sum are constants (no gradient through sum)
                        const double err = y[t] - ws.weights[t] * sum;
                        g += rd_lambda * 2.0 * err / static_cast<double>(h) * inv_segments;
                    }
                    backward(model, work[t], g, *grads);
                }
            };
            back_side(pair.seg0, work0, y0, 1.0);
            back_side(pair.seg1, work1, y1, -1.0);
        }
    }
    return total;
}

json layer_matrix_to_json(const std::vector<std::vector<double>>& m) {
    json out = json::array();
    for (const auto& layer : m) out.push_back(layer);
    return out;
}

std::vector<std::vector<double>> layer_matrix_from_json(const json& j) {
    std::vector<std::vector<double>> out;
    for (const auto& layer : j) out.push_back(layer.get<std::vector<double>>());
    return out;
}

}  // namespace

Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::tanh;
    if (s == "relu") return Activation::relu;
    fail(ErrorCode::parse, "unknown activation '" + s + "'");
}

Squash squash_from_string(const std::string& s) {
    if (s == "none") return Squash::none;
    if (s == "tanh") return Squash::tanh;
    fail(ErrorCode::parse, "unknown squash '" + s + "'");
}

std::string to_string(Activation a) { return a == Activation::tanh ? "tanh" : "relu"; }

std::string to_string(Squash s) { return s == Squash::tanh ? "tanh" : "none"; }

size_t RewardModel::parameter_count() const {
    size_t count = 0;
    for (size_t l = 0; l < num_layers(); ++l) count += weights[l].size() + biases[l].size();
    return count;
}

RewardModel init_model(int state_dim, int action_dim, const std::vector<int>& hidden,
                       std::uint64_t seed, Activation activation, Squash squash) {
    if (hidden.empty()) fail(ErrorCode::invalid_argument, "need at least one hidden layer");
    if (state_dim < 1 || action_dim < 1)
        fail(ErrorCode::invalid_argument, "state/action dims must be positive");
    for (int h : hidden)
        if (h < 1) fail(ErrorCode::invalid_argument, "hidden widths must be positive");

    RewardModel model;
    model.activation = activation;
    model.squash = squash;
    model.layer_dims.push_back(state_dim + action_dim);
    model.layer_dims.insert(model.layer_dims.end(), hidden.begin(), hidden.end());
    model.layer_dims.push_back(1);

    auto rng = make_rng(seed, RngStream::model_init);
    for (size_t l = 0; l + 1 < model.layer_dims.size(); ++l) {
        const int in_dim = model.layer_dims[l];
        const int out_dim = model.layer_dims[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
        std::uniform_real_distribution<double> uniform(-bound, bound);
        std::vector<double> w(static_cast<size_t>(in_dim) * out_dim);
        std::vector<double> b(out_dim);
        for (double& x : w) x = uniform(rng);
        for (double& x : b) x = uniform(rng);
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
    }
    return model;
}

double predict_reward(const RewardModel& model, std::span<const double> input) {
    if (static_cast<int>(input.size()) != model.input_dim())
        fail(ErrorCode::dimension_mismatch,
             "input width " + std::to_string(input.size()) + " does not match model input " +
                 std::to_string(model.input_dim()));
    MlpWork work;
    work.resize(model);
    return forward(model, input, work);
}

double predict_reward(const RewardModel& model, const Transition& t) {
    return predict_reward(model, t.concat());
}

Vec predict_rewards(const RewardModel& model, const Segment& segment) {
    Vec out;
    out.reserve(segment.length());
    MlpWork work;
    work.resize(model);
    for (const auto& tr : segment.transitions) {
        const Vec input = tr.concat();
        if (static_cast<int>(input.size()) != model.input_dim())
            fail(ErrorCode::dimension_mismatch, "transition width does not match model input");
        out.push_back(forward(model, input, work));
    }
    return out;
}

double weighted_return(const RewardModel& model, const WeightedSegment& ws) {
    if (ws.weights.size() != ws.segment.length())
        fail(ErrorCode::dimension_mismatch, "weight vector length differs from segment");
    const Vec rewards = predict_rewards(model, ws.segment);
    double r = 0.0;
    for (size_t t = 0; t < rewards.size(); ++t) r += ws.weights[t] * rewards[t];
    return r;
}

double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double preference_probability(const RewardModel& model, const WeightedSegment& ws0,
                              const WeightedSegment& ws1) {
    return logistic(weighted_return(model, ws0) - weighted_return(model, ws1));
}

double ce_loss(const RewardModel& model, const std::vector<WeightedPair>& batch) {
    return batch_loss(model, batch, 0.0, nullptr);
}

double redistribution_loss(const RewardModel& model, const WeightedSegment& ws) {
    if (ws.weights.size() != ws.segment.length())
        fail(ErrorCode::dimension_mismatch, "weight vector length differs from segment");
    const Vec rewards = predict_rewards(model, ws.segment);
    const double sum = std::accumulate(rewards.begin(), rewards.end(), 0.0);
    double acc = 0.0;
    for (size_t t = 0; t < rewards.size(); ++t) {
        const double err = rewards[t] - ws.weights[t] * sum;
        acc += err * err;
    }
    return acc / static_cast<double>(rewards.size());
}

Gradients Gradients::zeros_like(const RewardModel& model) {
    Gradients g;
    for (size_t l = 0; l < model.num_layers(); ++l) {
        g.weights.emplace_back(model.weights[l].size(), 0.0);
        g.biases.emplace_back(model.biases[l].size(), 0.0);
    }
    return g;
}

Gradients grad_ce(const RewardModel& model, const std::vector<WeightedPair>& batch,
                  double redistribution_lambda) {
    Gradients grads = Gradients::zeros_like(model);
    batch_loss(model, batch, redistribution_lambda, &grads);
    return grads;
}

double pairwise_accuracy(const RewardModel& model, const std::vector<WeightedPair>& pairs) {
    double credit = 0.0;
    size_t counted = 0;
    for (const auto& pair : pairs) {
        if (pair.label == 0.5) continue;
        ++counted;
        const double p = preference_probability(model, pair.seg0, pair.seg1);
        if (p == 0.5)
            credit += 0.5;
        else if ((p > 0.5) == (pair.label == 0.0))
            credit += 1.0;
    }
    if (counted == 0) return 0.5;
    return credit / static_cast<double>(counted);
}

TrainLog train_reward(RewardModel& model, const std::vector<PreferencePair>& pairs,
                      const ExpertTransitionSet* expert, Temperature tau,
                      const TrainConfig& config, const IndexOptions& index_options) {
    if (pairs.empty()) fail(ErrorCode::empty_input, "no preference pairs to train on");
    if (config.learning_rate <= 0) fail(ErrorCode::invalid_argument, "learning rate must be > 0");
    if (config.batch_size < 1) fail(ErrorCode::invalid_argument, "batch size must be >= 1");
    if (config.epochs < 0) fail(ErrorCode::invalid_argument, "epochs must be >= 0");

    // Weights depend only on the expert set and the segments, so they are
    // computed once up front. The uniform mode and the infinite-tau path
    // produce the same exact 1/H weights and never touch the index.
    const bool uniform = config.weight_mode == WeightMode::uniform || tau.is_infinite();
    std::vector<WeightedPair> weighted;
    weighted.reserve(pairs.size());
    if (uniform) {
        for (const auto& pair : pairs)
            weighted.push_back(WeightedPair{uniform_weighted(pair.seg0),
                                            uniform_weighted(pair.seg1), pair.label});
    } else {
        if (expert == nullptr || expert->empty())
            fail(ErrorCode::empty_input, "similarity weighting needs a nonempty expert set");
        const NearestNeighborIndex index = NearestNeighborIndex::build(*expert, index_options);
        for (const auto& pair : pairs)
            weighted.push_back(WeightedPair{weight_segment(index, pair.seg0, tau),
                                            weight_segment(index, pair.seg1, tau), pair.label});
    }
    if (config.legacy_sum_scale) {
        for (auto& pair : weighted)
            for (WeightedSegment* ws : {&pair.seg0, &pair.seg1})
                for (double& w : ws->weights) w *= static_cast<double>(ws->weights.size());
    }

    Gradients grads = Gradients::zeros_like(model);
    Gradients moment1 = Gradients::zeros_like(model);
    Gradients moment2 = Gradients::zeros_like(model);
    long step = 0;

    auto rng = make_rng(config.seed, RngStream::training);
    std::vector<size_t> order(weighted.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::vector<WeightedPair> batch;

    TrainLog log;
    log.epochs.reserve(config.epochs);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (size_t begin = 0; begin < order.size(); begin += config.batch_size) {
            const size_t end = std::min(begin + config.batch_size, order.size());
            batch.clear();
            for (size_t i = begin; i < end; ++i) batch.push_back(weighted[order[i]]);

            for (size_t l = 0; l < grads.weights.size(); ++l) {
                std::fill(grads.weights[l].begin(), grads.weights[l].end(), 0.0);
                std::fill(grads.biases[l].begin(), grads.biases[l].end(), 0.0);
            }
            const double loss =
                batch_loss(model, batch, config.redistribution_lambda, &grads);
            if (!std::isfinite(loss))
                fail(ErrorCode::numeric, "non-finite loss at epoch " + std::to_string(epoch) +
                                             ", batch starting at " + std::to_string(begin));
            epoch_loss += loss * static_cast<double>(end - begin);

            ++step;
            auto update = [&](std::vector<double>& params, const std::vector<double>& g,
                              std::vector<double>& m1, std::vector<double>& m2) {
                if (config.optimizer == Optimizer::sgd) {
                    for (size_t i = 0; i < params.size(); ++i)
                        params[i] -= config.learning_rate * g[i];
                    return;
                }
                const double c1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(step));
                const double c2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(step));
                for (size_t i = 0; i < params.size(); ++i) {
                    m1[i] = config.adam_beta1 * m1[i] + (1.0 - config.adam_beta1) * g[i];
                    m2[i] = config.adam_beta2 * m2[i] + (1.0 - config.adam_beta2) * g[i] * g[i];
                    const double mhat = m1[i] / c1;
                    const double vhat = m2[i] / c2;
                    params[i] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.adam_epsilon);
                }
            };
            for (size_t l = 0; l < model.num_layers(); ++l) {
                update(model.weights[l], grads.weights[l], moment1.weights[l], moment2.weights[l]);
                update(model.biases[l], grads.biases[l], moment1.biases[l], moment2.biases[l]);
            }
        }
        EpochRecord record;
        record.epoch = epoch;
        record.loss = epoch_loss / static_cast<double>(weighted.size());
        record.accuracy = pairwise_accuracy(model, weighted);
        log.epochs.push_back(record);
    }
    return log;
}

void save_model(const std::string& path, const RewardModel& model) {
    json j{{"format_version", 1},
           {"kind", "mlp"},
           {"layer_dims", model.layer_dims},
           {"activation", to_string(model.activation)},
           {"squash", to_string(model.squash)},
           {"weights", layer_matrix_to_json(model.weights)},
           {"biases", layer_matrix_to_json(model.biases)}};
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

RewardModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open '" + path + "' for reading");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::parse, "checkpoint '" + path + "' is not valid JSON");
    if (!j.contains("format_version") || j["format_version"].get<int>() != 1)
        fail(ErrorCode::parse, "checkpoint '" + path + "' has an unsupported format version");
    if (j.value("kind", "") != "mlp")
        fail(ErrorCode::parse, "checkpoint '" + path + "' is not a reward model");

    RewardModel model;
    model.layer_dims = j["layer_dims"].get<std::vector<int>>();
    model.activation = activation_from_string(j["activation"].get<std::string>());
    model.squash = squash_from_string(j["squash"].get<std::string>());
    model.weights = layer_matrix_from_json(j["weights"]);
    model.biases = layer_matrix_from_json(j["biases"]);

    if (model.layer_dims.size() < 2 || model.layer_dims.back() != 1)
        fail(ErrorCode::parse, "checkpoint layer_dims are invalid");
    if (model.weights.size() != model.layer_dims.size() - 1 ||
        model.biases.size() != model.weights.size())
        fail(ErrorCode::parse, "checkpoint parameter blocks do not match layer_dims");
    for (size_t l = 0; l < model.num_layers(); ++l) {
        const size_t expected_w =
            static_cast<size_t>(model.layer_dims[l]) * model.layer_dims[l + 1];
        if (model.weights[l].size() != expected_w ||
            model.biases[l].size() != static_cast<size_t>(model.layer_dims[l + 1]))
            fail(ErrorCode::parse, "checkpoint layer " + std::to_string(l) + " has wrong shape");
    }
    return model;
}

}  // namespace spw
