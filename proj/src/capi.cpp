#include "spw.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "spw/config.hpp"
#include "spw/dataset.hpp"
#include "spw/error.hpp"
#include "spw/io.hpp"
#include "spw/pipeline.hpp"
#include "spw/reward_model.hpp"
#include "spw/search.hpp"
#include "spw/version.hpp"
#include "spw/weighting.hpp"

struct spw_config {
    spw::Config impl;
};

struct spw_trajectories {
    std::vector<spw::Trajectory> impl;
};

struct spw_index {
    spw::NearestNeighborIndex impl;
};

struct spw_model {
    spw::RewardModel impl;
};

namespace {

thread_local std::string g_last_error;

spw_status status_of(spw::ErrorCode code) {
    switch (code) {
        case spw::ErrorCode::invalid_argument: return SPW_ERROR_INVALID_ARGUMENT;
        case spw::ErrorCode::io: return SPW_ERROR_IO;
        case spw::ErrorCode::parse: return SPW_ERROR_PARSE;
        case spw::ErrorCode::dimension_mismatch: return SPW_ERROR_DIMENSION_MISMATCH;
        case spw::ErrorCode::empty_input: return SPW_ERROR_EMPTY_INPUT;
        case spw::ErrorCode::numeric: return SPW_ERROR_NUMERIC;
        case spw::ErrorCode::not_converged: return SPW_ERROR_NOT_CONVERGED;
        case spw::ErrorCode::unknown: return SPW_ERROR_UNKNOWN;
    }
    return SPW_ERROR_UNKNOWN;
}

/// Runs `body`, converting any exception into a status plus message.
template <typename Fn>
spw_status guarded(Fn&& body) {
    try {
        body();
        g_last_error.clear();
        return SPW_OK;
    } catch (const spw::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SPW_ERROR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown error";
        return SPW_ERROR_UNKNOWN;
    }
}

spw_status require(bool condition, const char* message) {
    if (condition) return SPW_OK;
    g_last_error = message;
    return SPW_ERROR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* spw_version(void) { return spw::kVersion; }

const char* spw_last_error(void) { return g_last_error.c_str(); }

spw_config* spw_config_new(void) {
    auto* config = new (std::nothrow) spw_config;
    if (config) config->impl = spw::Config::defaults();
    return config;
}

void spw_config_free(spw_config* config) { delete config; }

spw_status spw_config_load_file(spw_config* config, const char* path) {
    if (spw_status s = require(config && path, "config and path must not be NULL"); s != SPW_OK)
        return s;
    return guarded([&] { config->impl.load_file(path); });
}

spw_status spw_config_set(spw_config* config, const char* key, const char* value) {
    if (spw_status s = require(config && key && value, "config, key and value must not be NULL");
        s != SPW_OK)
        return s;
    return guarded([&] { config->impl.set(key, value); });
}

int spw_config_has(const spw_config* config, const char* key) {
    return config && key && config->impl.has(key) ? 1 : 0;
}

spw_status spw_config_get(const spw_config* config, const char* key, char* buffer,
                          size_t buffer_size) {
    if (spw_status s = require(config && key && buffer, "config, key and buffer must not be NULL");
        s != SPW_OK)
        return s;
    return guarded([&] {
        const std::string value = config->impl.get(key);
        if (value.size() + 1 > buffer_size)
            spw::fail(spw::ErrorCode::invalid_argument,
                      "buffer of " + std::to_string(buffer_size) + " bytes is too small for '" +
                          value + "'");
        std::memcpy(buffer, value.c_str(), value.size() + 1);
    });
}

spw_status spw_run_generate(const spw_config* config) {
    if (spw_status s = require(config != nullptr, "config must not be NULL"); s != SPW_OK) return s;
    return guarded([&] { spw::run_generate(config->impl); });
}

spw_status spw_run_train(const spw_config* config) {
    if (spw_status s = require(config != nullptr, "config must not be NULL"); s != SPW_OK) return s;
    return guarded([&] { spw::run_train(config->impl); });
}

spw_status spw_run_evaluate(const spw_config* config) {
    if (spw_status s = require(config != nullptr, "config must not be NULL"); s != SPW_OK) return s;
    return guarded([&] { spw::run_evaluate(config->impl); });
}

spw_status spw_run_ablate_tau(const spw_config* config) {
    if (spw_status s = require(config != nullptr, "config must not be NULL"); s != SPW_OK) return s;
    return guarded([&] { spw::run_ablate_tau(config->impl); });
}

spw_status spw_run_compare(const spw_config* config) {
    if (spw_status s = require(config != nullptr, "config must not be NULL"); s != SPW_OK) return s;
    return guarded([&] { spw::run_compare(config->impl); });
}

spw_status spw_trajectories_load(const char* path, spw_trajectories** out) {
    if (spw_status s = require(path && out, "path and out must not be NULL"); s != SPW_OK)
        return s;
    return guarded([&] {
        auto loaded = spw::load_trajectories(path);
        *out = new spw_trajectories{std::move(loaded)};
    });
}

void spw_trajectories_free(spw_trajectories* trajectories) { delete trajectories; }

size_t spw_trajectories_count(const spw_trajectories* trajectories) {
    return trajectories ? trajectories->impl.size() : 0;
}

spw_status spw_trajectories_dims(const spw_trajectories* trajectories, size_t* state_dim,
                                 size_t* action_dim) {
    if (spw_status s = require(trajectories && state_dim && action_dim,
                               "trajectories and out params must not be NULL");
        s != SPW_OK)
        return s;
    return guarded([&] {
        if (trajectories->impl.empty())
            spw::fail(spw::ErrorCode::empty_input, "no trajectories loaded");
        const auto& first = trajectories->impl.front().transitions.front();
        *state_dim = first.state_dim();
        *action_dim = first.action_dim();
    });
}

spw_status spw_index_build(const spw_trajectories* expert, int standardize, spw_index** out) {
    if (spw_status s = require(expert && out, "expert and out must not be NULL"); s != SPW_OK)
        return s;
    return guarded([&] {
        const auto set = spw::build_expert_transition_set(expert->impl);
        spw::IndexOptions options;
        options.standardize = standardize != 0;
        *out = new spw_index{spw::NearestNeighborIndex::build(set, options)};
    });
}

void spw_index_free(spw_index* index) { delete index; }

size_t spw_index_size(const spw_index* index) { return index ? index->impl.size() : 0; }

spw_status spw_index_nearest_distance(const spw_index* index, const double* query, size_t dim,
                                      double* out_distance) {
    if (spw_status s =
            require(index && query && out_distance, "index, query and out must not be NULL");
        s != SPW_OK)
        return s;
    return guarded([&] {
        *out_distance = index->impl.nearest_distance(std::span<const double>(query, dim));
    });
}

spw_status spw_extract_weights(const double* distances, size_t count, double tau,
                               double* out_weights) {
    if (spw_status s =
            require(distances && out_weights, "distances and out_weights must not be NULL");
        s != SPW_OK)
        return s;
    return guarded([&] {
        const spw::Temperature temperature = std::isinf(tau) && tau > 0
                                                 ? spw::Temperature::infinity()
                                                 : spw::Temperature::finite(tau);
        const spw::Vec weights = spw::extract_weights(
            spw::DistanceProfile(distances, distances + count), temperature);
        std::memcpy(out_weights, weights.data(), weights.size() * sizeof(double));
    });
}

spw_status spw_model_load(const char* checkpoint_path, spw_model** out) {
    if (spw_status s = require(checkpoint_path && out, "path and out must not be NULL");
        s != SPW_OK)
        return s;
    return guarded([&] { *out = new spw_model{spw::load_model(checkpoint_path)}; });
}

void spw_model_free(spw_model* model) { delete model; }

spw_status spw_model_input_dim(const spw_model* model, size_t* out_dim) {
    if (spw_status s = require(model && out_dim, "model and out must not be NULL"); s != SPW_OK)
        return s;
    *out_dim = static_cast<size_t>(model->impl.input_dim());
    return SPW_OK;
}

spw_status spw_model_predict(const spw_model* model, const double* input, size_t dim,
                             double* out_reward) {
    if (spw_status s =
            require(model && input && out_reward, "model, input and out must not be NULL");
        s != SPW_OK)
        return s;
    return guarded([&] {
        *out_reward = spw::predict_reward(model->impl, std::span<const double>(input, dim));
    });
}

}  // extern "C"
