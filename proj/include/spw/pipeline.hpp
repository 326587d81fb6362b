#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "spw/config.hpp"
#include "spw/task.hpp"

namespace spw {

/// Output locations: <outdir>/<task>/<method>/seed<k>/...
/// The method directory can be renamed through the run.subdir key, which the
/// tau ablation uses to keep one directory per tau variant.
struct RunLayout {
    std::filesystem::path task_dir;
    std::filesystem::path method_dir;

    static RunLayout resolve(const Config& config);
    std::filesystem::path seed_dir(std::uint64_t seed) const;
};

using MetricMap = std::map<std::string, double>;

SyntheticTask task_from_config(const Config& config);

/// Per-seed steps; the run_* commands loop these over config seeds.
void generate_seed(const Config& config, const SyntheticTask& task, std::uint64_t seed);
void train_seed(const Config& config, const SyntheticTask& task, std::uint64_t seed);
MetricMap evaluate_seed(const Config& config, const SyntheticTask& task, std::uint64_t seed);

/// Subcommands. Each is deterministic given the config: rerunning writes
/// byte-identical files.
void run_generate(const Config& config);
void run_train(const Config& config);
void run_evaluate(const Config& config);
void run_ablate_tau(const Config& config);
void run_compare(const Config& config);

/// Dispatch by subcommand name (generate, train, evaluate, ablate-tau,
/// compare); errors on anything else.
void run_command(const std::string& command, const Config& config);

}  // namespace spw
