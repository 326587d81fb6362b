#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spw/types.hpp"
#include "spw/weighting.hpp"

namespace spw {

enum class Activation { tanh, relu };
enum class Squash { none, tanh };
enum class Optimizer { adam, sgd };
enum class WeightMode { spw, uniform };

Activation activation_from_string(const std::string& s);
Squash squash_from_string(const std::string& s);
std::string to_string(Activation a);
std::string to_string(Squash s);

/// Small feedforward reward predictor r(s, a). Layers are dense with a
/// shared hidden activation; the scalar output is optionally squashed by
/// tanh to keep learned rewards bounded.
struct RewardModel {
    std::vector<int> layer_dims;  // input, hidden..., 1
    std::vector<std::vector<double>> weights;  // per layer, row-major [out][in]
    std::vector<std::vector<double>> biases;
    Activation activation = Activation::relu;
    Squash squash = Squash::tanh;

    int input_dim() const { return layer_dims.front(); }
    size_t num_layers() const { return weights.size(); }
    size_t parameter_count() const;
};

/// Deterministic fan-in-scaled uniform initialization.
RewardModel init_model(int state_dim, int action_dim, const std::vector<int>& hidden,
                       std::uint64_t seed, Activation activation = Activation::relu,
                       Squash squash = Squash::tanh);

double predict_reward(const RewardModel& model, std::span<const double> input);
double predict_reward(const RewardModel& model, const Transition& t);
Vec predict_rewards(const RewardModel& model, const Segment& segment);

/// Weighted return: sum_t w_t * r(s_t, a_t).
double weighted_return(const RewardModel& model, const WeightedSegment& ws);

double logistic(double z);

/// Bradley-Terry probability that the first segment is preferred, computed
/// stably as logistic(R0 - R1).
double preference_probability(const RewardModel& model, const WeightedSegment& ws0,
                              const WeightedSegment& ws1);

struct WeightedPair {
    WeightedSegment seg0;
    WeightedSegment seg1;
    double label = 0.5;  // 0: seg0 preferred, 1: seg1 preferred, 0.5: tie
};

/// Mean cross-entropy between the model's preference probabilities and the
/// labels; a 0.5 label contributes both directions at half weight.
double ce_loss(const RewardModel& model, const std::vector<WeightedPair>& batch);

/// Per-step redistribution penalty: mean squared error between each step's
/// predicted reward and its weight share of the segment's (unweighted)
/// total, the total treated as a constant target.
double redistribution_loss(const RewardModel& model, const WeightedSegment& ws);

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    static Gradients zeros_like(const RewardModel& model);
};

/// Exact gradient of ce_loss (plus redistribution_lambda times the mean
/// redistribution penalty over the batch's segments) with respect to all
/// parameters, via backpropagation.
Gradients grad_ce(const RewardModel& model, const std::vector<WeightedPair>& batch,
                  double redistribution_lambda = 0.0);

/// Fraction of non-tie pairs whose predicted direction matches the label;
/// an exact 0.5 probability counts half. 0.5 when every label is a tie.
double pairwise_accuracy(const RewardModel& model, const std::vector<WeightedPair>& pairs);

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 16;
    int epochs = 80;
    std::uint64_t seed = 0;
    Optimizer optimizer = Optimizer::adam;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    WeightMode weight_mode = WeightMode::spw;
    /// Scales the simplex weights by H, restoring raw-sum returns.
    bool legacy_sum_scale = false;
    /// > 0 adds the redistribution penalty to the objective.
    double redistribution_lambda = 0.0;
};

struct EpochRecord {
    int epoch = 0;
    double loss = 0.0;
    double accuracy = 0.0;
};

struct TrainLog {
    std::vector<EpochRecord> epochs;
};

/// Precomputes importance weights for every segment (nearest-expert softmax
/// in spw mode, exact 1/H in uniform mode or at infinite tau), then runs
/// seeded minibatch optimization. Single-threaded and deterministic given
/// the config seed. Aborts with a diagnostic if the loss turns non-finite.
/// `expert` may be null in uniform mode or at infinite tau.
TrainLog train_reward(RewardModel& model, const std::vector<PreferencePair>& pairs,
                      const ExpertTransitionSet* expert, Temperature tau,
                      const TrainConfig& config, const IndexOptions& index_options = {});

/// Checkpoint round-trip; JSON with shapes, flattened parameters and a
/// format version. Values survive exactly.
void save_model(const std::string& path, const RewardModel& model);
RewardModel load_model(const std::string& path);

}  // namespace spw
