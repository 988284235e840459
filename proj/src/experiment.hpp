// irspm - IRS reflection design from user power measurements
// Copyright (C) 2026 irspm contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRSPM_EXPERIMENT_HPP
#define IRSPM_EXPERIMENT_HPP

#include "baselines.hpp"
#include "estimator.hpp"
#include "optimizer.hpp"

namespace irspm {

// Strategy tokens accepted in configs and emitted in results.csv:
//   nn-ge   estimate channels, geometry method (single user only)
//   nn-sdr  estimate channels, relaxed solve + randomization + refinement
//   nn-sr   estimate channels, refinement from the best measured reflection
//   rms     best measured reflection, used directly
//   csm     conditional-sample-mean selection
//   csi     upper bound: optimizer fed the true covariances
const std::vector<std::string>& known_strategies();

struct ExperimentConfig {
    ScenarioConfig scenario;
    TrainConfig train;
    int rsrp_samples = 10;                           // Q
    std::vector<int> sweep_reflections = {50, 100, 200, 300};
    std::vector<std::uint32_t> sweep_phase_bits;     // empty: {scenario.phase_bits}
    std::vector<int> sweep_users;                    // empty: {scenario.users}
    int trials = 50;
    std::vector<std::string> strategies = {"nn-sr", "rms", "csm", "csi"};
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    bool timing = false;          // off keeps results.csv byte-reproducible
    bool dump_loss_curves = false;
    int randomization_draws = 200;

    std::vector<std::uint32_t> phase_bit_values() const;
    std::vector<int> user_values() const;
    void validate() const;
};

ExperimentConfig experiment_from_json_text(const std::string& json_text);
ExperimentConfig experiment_from_json_file(const std::string& path);

struct ResultRow {
    std::string strategy;
    int users = 0;          // K
    std::uint32_t alpha = 0;
    int m = 0;
    int trial = 0;
    double min_snr_db = 0.0;  // achieved on the TRUE channels
    double runtime_ms = 0.0;
    std::string flags = "ok";
};

/// The optimizer fed the true covariances of one realization; with
/// strategy = geometry (K = 1) this is the exact discrete optimum.
ReflectionSolution perfect_csi_bound(const ChannelRealization& real, std::uint32_t alpha,
                                     Strategy strategy, const OptimizeOptions& opts = {});

/// Full sweep protocol. Per trial the reflection schedule and measurements
/// are generated once at the largest M and prefixes are reused across the M
/// sweep. Per-strategy failures become flagged rows; deterministic under the
/// config seed (row order and, with timing off, bytes). Honors the
/// IRSPM_THREADS environment variable for trial-level parallelism.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);

/// run_experiment + results.csv (and optional loss curves) under cfg.out_dir;
/// returns the results.csv path.
std::string run_experiment_to_files(const ExperimentConfig& cfg);

struct SummaryRow {
    std::string strategy;
    int users = 0;
    std::uint32_t alpha = 0;
    int m = 0;
    int trials = 0;            // rows contributing to the stats
    double mean_min_snr_db = 0.0;
    double stddev_min_snr_db = 0.0;
    double mean_runtime_ms = 0.0;
    int flagged = 0;           // rows excluded (flags != ok or non-finite SNR)
};

/// Per-(strategy, K, alpha, M) mean/stddev aggregation of a results CSV.
/// Malformed input is rejected with the offending line number.
std::vector<SummaryRow> summarize_results(const std::string& results_csv_path);

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

void summarize_to_file(const std::string& results_csv_path, const std::string& summary_csv_path);

}  // namespace irspm

#endif
