#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levysim/functionals.hpp"
#include "levysim/levy_model.hpp"

namespace levysim {

/// Experiment configuration, parsed from a single JSON document with strict
/// schema validation (unknown keys rejected, required keys named in errors).
struct ExperimentConfig {
    std::string description;
    double horizon = 1.0;
    LevyTriplet triplet;
    int partition_sectors = 8;
    double partition_eps_min = 1e-3;
    double brownian_step = 0.0;  // 0 -> horizon/1024 when sigma > 0
    std::uint64_t seed = 0;
    std::optional<PathFunctional> functional;

    struct Simulate {
        std::uint64_t n_paths = 1;
        int grid_points = 64;
    };
    std::optional<Simulate> simulate;

    struct Derivative {
        std::uint64_t n_samples = 1000;
        std::vector<double> r_values;  // empty -> uniform midpoints
        std::vector<double> v_values;  // empty -> atoms / sector medians
        int r_count = 4;
    };
    std::optional<Derivative> derivative;

    struct ChainCheck {
        ParametricFunctional g;
        std::uint64_t n_samples = 1000;
        double tolerance = 1e-10;
    };
    std::optional<ChainCheck> chain_check;

    struct Boxes {
        std::vector<Rect> boxes;
        std::vector<int> orders = {0, 1};
        std::uint64_t n_samples = 10000;
    };
    std::optional<Boxes> chaos;

    struct Transfer {
        std::vector<Rect> boxes;
        std::vector<int> orders = {0, 1, 2};
        std::uint64_t n_samples = 100000;
        double rate_corruption = 1.0;  // negative-control knob
        int field_times = 0;           // > 0 enables the derivative-field pass
    };
    std::optional<Transfer> transfer;

    static ExperimentConfig from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;

    /// FNV-1a over the canonical serialization; embedded in every artifact.
    std::string hash() const;
};

ExperimentConfig load_config(const std::string& path);

/// Result of one suite run: artifacts are written into `out_dir` and the
/// summary is both returned and persisted as summary.json.
struct SuiteResult {
    bool pass = false;
    nlohmann::json summary;
};

SuiteResult run_simulate_suite(const ExperimentConfig& cfg, const std::string& out_dir,
                               unsigned threads);
SuiteResult run_derivative_suite(const ExperimentConfig& cfg, const std::string& out_dir,
                                 unsigned threads);
SuiteResult run_chain_check_suite(const ExperimentConfig& cfg, const std::string& out_dir,
                                  unsigned threads);
SuiteResult run_chaos_suite(const ExperimentConfig& cfg, const std::string& out_dir,
                            unsigned threads);
SuiteResult run_transfer_suite(const ExperimentConfig& cfg, const std::string& out_dir,
                               unsigned threads);

}  // namespace levysim
