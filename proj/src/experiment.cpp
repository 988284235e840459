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

#include "experiment.hpp"

#include "csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace irspm {

using nlohmann::json;

const std::vector<std::string>& known_strategies() {
    static const std::vector<std::string> names = {"nn-ge", "nn-sdr", "nn-sr",
                                                   "rms",   "csm",    "csi"};
    return names;
}

std::vector<std::uint32_t> ExperimentConfig::phase_bit_values() const {
    return sweep_phase_bits.empty() ? std::vector<std::uint32_t>{scenario.phase_bits}
                                    : sweep_phase_bits;
}

std::vector<int> ExperimentConfig::user_values() const {
    return sweep_users.empty() ? std::vector<int>{scenario.users} : sweep_users;
}

void ExperimentConfig::validate() const {
    scenario.validate();
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (rsrp_samples < 1) throw std::invalid_argument("experiment: rsrp_samples must be >= 1");
    if (randomization_draws < 1)
        throw std::invalid_argument("experiment: randomization_draws must be >= 1");
    if (sweep_reflections.empty())
        throw std::invalid_argument("experiment: need at least one reflection count");
    for (int m : sweep_reflections) {
        if (m < 2) throw std::invalid_argument("experiment: reflection counts must be >= 2");
    }
    for (std::uint32_t a : phase_bit_values()) {
        ScenarioConfig s = scenario;
        s.phase_bits = a;
        s.validate();
    }
    for (int k : user_values()) {
        ScenarioConfig s = scenario;
        s.users = k;
        s.validate();
    }
    if (strategies.empty()) throw std::invalid_argument("experiment: no strategies selected");
    const auto& known = known_strategies();
    for (const std::string& s : strategies) {
        if (std::find(known.begin(), known.end(), s) == known.end())
            throw std::invalid_argument("experiment: unknown strategy \"" + s + "\"");
    }
    const bool has_multiuser =
        std::any_of(user_values().begin(), user_values().end(), [](int k) { return k > 1; });
    if (has_multiuser &&
        std::find(strategies.begin(), strategies.end(), "nn-ge") != strategies.end())
        throw std::invalid_argument("experiment: nn-ge requires single-user sweeps");
    const int m0 = train.m0;
    if (m0 > 0) {
        for (int m : sweep_reflections) {
            if (m0 >= m)
                throw std::invalid_argument(
                    "experiment: train.m0 must be below every reflection count");
        }
    }
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!known.count(item.key()))
            throw parse_error(where + ": unknown key \"" + item.key() + "\"");
    }
}

TrainConfig train_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"m0", "learning_rate", "epochs", "init_scale", "normalize",
                         "subtract_noise_floor", "seed"},
                        "train");
    TrainConfig cfg;
    cfg.m0 = j.value("m0", cfg.m0);
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.init_scale = j.value("init_scale", cfg.init_scale);
    cfg.normalize = j.value("normalize", cfg.normalize);
    // the actual noise power is substituted at run time when enabled
    if (j.contains("subtract_noise_floor") && j["subtract_noise_floor"].get<bool>())
        cfg.subtract_noise_w = -1.0;
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

ScenarioConfig scenario_from_json_fragment(const json& j) {
    return scenario_from_json_text(j.dump());
}

}  // namespace

ExperimentConfig experiment_from_json_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("experiment: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw parse_error("experiment: expected a JSON object");
    reject_unknown_keys(j,
                        {"scenario", "train", "rsrp_samples", "sweep_reflections",
                         "sweep_phase_bits", "sweep_users", "trials", "strategies", "seed",
                         "out_dir", "timing", "dump_loss_curves", "randomization_draws"},
                        "experiment");
    ExperimentConfig cfg;
    if (j.contains("scenario")) cfg.scenario = scenario_from_json_fragment(j["scenario"]);
    if (j.contains("train")) cfg.train = train_from_json(j["train"]);
    cfg.rsrp_samples = j.value("rsrp_samples", cfg.rsrp_samples);
    if (j.contains("sweep_reflections"))
        cfg.sweep_reflections = j["sweep_reflections"].get<std::vector<int>>();
    if (j.contains("sweep_phase_bits"))
        cfg.sweep_phase_bits = j["sweep_phase_bits"].get<std::vector<std::uint32_t>>();
    if (j.contains("sweep_users")) cfg.sweep_users = j["sweep_users"].get<std::vector<int>>();
    cfg.trials = j.value("trials", cfg.trials);
    if (j.contains("strategies")) cfg.strategies = j["strategies"].get<std::vector<std::string>>();
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.timing = j.value("timing", cfg.timing);
    cfg.dump_loss_curves = j.value("dump_loss_curves", cfg.dump_loss_curves);
    cfg.randomization_draws = j.value("randomization_draws", cfg.randomization_draws);
    cfg.validate();
    return cfg;
}

ExperimentConfig experiment_from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error(path + ": cannot open");
    std::stringstream ss;
    ss << is.rdbuf();
    return experiment_from_json_text(ss.str());
}

ReflectionSolution perfect_csi_bound(const ChannelRealization& real, std::uint32_t alpha,
                                     Strategy strategy, const OptimizeOptions& opts) {
    std::vector<MatC> g_true;
    g_true.reserve(static_cast<std::size_t>(real.users()));
    for (int k = 0; k < real.users(); ++k) g_true.push_back(real.covariance(k));
    return optimize(g_true, alpha, strategy, opts);
}

namespace {

struct Timer {
    bool enabled;
    std::chrono::steady_clock::time_point start;
    explicit Timer(bool on) : enabled(on), start(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        if (!enabled) return 0.0;
        const auto d = std::chrono::steady_clock::now() - start;
        return std::chrono::duration<double, std::milli>(d).count();
    }
};

double achieved_min_snr_db(const ReflectionSet& v, const ChannelRealization& real) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < real.users(); ++k) worst = std::min(worst, snr(v, real, k));
    return linear_to_db(worst);
}

std::string sanitize_flag(std::string text) {
    for (char& c : text) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return text;
}

struct TrialOutput {
    std::vector<ResultRow> rows;
};

TrialOutput run_trial(const ExperimentConfig& cfg, int users, std::uint32_t alpha, int trial) {
    ScenarioConfig scen = cfg.scenario;
    scen.users = users;
    scen.phase_bits = alpha;

    const std::uint64_t base =
        derive_seed(cfg.seed, static_cast<std::uint64_t>(users),
                    static_cast<std::uint64_t>(alpha), static_cast<std::uint64_t>(trial));

    Rng rng_scene(derive_seed(base, 1));
    const std::vector<Point3> positions = draw_user_positions(scen, rng_scene);
    const ChannelRealization real = gen_channels(scen, positions, rng_scene);

    const int m_max = *std::max_element(cfg.sweep_reflections.begin(), cfg.sweep_reflections.end());
    Rng rng_meas(derive_seed(base, 2));
    const std::vector<ReflectionSet> sets = random_reflections(m_max, scen.elements(), alpha, rng_meas);
    const MeasurementTable table_full = collect(real, sets, cfg.rsrp_samples, rng_meas);

    const auto& strategies = cfg.strategies;
    auto wants = [&](const char* name) {
        return std::find(strategies.begin(), strategies.end(), name) != strategies.end();
    };
    const bool wants_nn = wants("nn-ge") || wants("nn-sdr") || wants("nn-sr");

    // The bound does not depend on M; computed once and replicated per row.
    ReflectionSolution csi_sol;
    double csi_ms = 0.0;
    std::string csi_error;
    if (wants("csi")) {
        try {
            OptimizeOptions opts;
            opts.seed = derive_seed(base, 3);
            opts.randomization_draws = cfg.randomization_draws;
            const Timer timer(cfg.timing);
            csi_sol = perfect_csi_bound(
                real, alpha, users == 1 ? Strategy::geometry : Strategy::sdr_refine, opts);
            csi_ms = timer.elapsed_ms();
        } catch (const std::exception& e) {
            csi_error = e.what();
        }
    }

    TrialOutput out;
    for (int m : cfg.sweep_reflections) {
        const MeasurementTable table = table_full.prefix(m);

        std::vector<MatC> g_hats;
        double train_ms = 0.0;
        std::string train_error;
        if (wants_nn) {
            try {
                const Timer timer(cfg.timing);
                for (int k = 0; k < users; ++k) {
                    TrainConfig tc = cfg.train;
                    if (tc.subtract_noise_w < 0.0) tc.subtract_noise_w = scen.noise_w;
                    tc.seed = derive_seed(base, 4, static_cast<std::uint64_t>(m),
                                          static_cast<std::uint64_t>(k));
                    if (cfg.dump_loss_curves) {
                        char name[96];
                        std::snprintf(name, sizeof name, "loss_K%d_a%u_t%d_M%d_u%d.csv", users,
                                      alpha, trial, m, k);
                        tc.curve_csv_path =
                            (std::filesystem::path(cfg.out_dir) / "loss_curves" / name).string();
                    }
                    const ChannelEstimate est = train(table, k, tc);
                    g_hats.push_back(est.covariance());
                }
                train_ms = timer.elapsed_ms();
            } catch (const std::exception& e) {
                train_error = e.what();
                g_hats.clear();
            }
        }

        ReflectionSet rms_v;
        if (wants("rms") || wants("nn-sr")) rms_v = rms_select(table);

        for (std::size_t si = 0; si < strategies.size(); ++si) {
            const std::string& name = strategies[si];
            ResultRow row;
            row.strategy = name;
            row.users = users;
            row.alpha = alpha;
            row.m = m;
            row.trial = trial;
            try {
                const Timer timer(cfg.timing);
                ReflectionSet chosen;
                std::string status = "ok";
                double extra_ms = 0.0;
                if (name == "csi") {
                    if (!csi_error.empty()) throw std::runtime_error(csi_error);
                    chosen = csi_sol.v;
                    status = csi_sol.status;
                    extra_ms = csi_ms;
                } else if (name == "rms") {
                    chosen = rms_v;
                } else if (name == "csm") {
                    chosen = csm_select(table, alpha);
                } else {
                    if (!train_error.empty()) throw std::runtime_error(train_error);
                    OptimizeOptions opts;
                    opts.seed = derive_seed(base, 5, si, static_cast<std::uint64_t>(m));
                    opts.randomization_draws = cfg.randomization_draws;
                    Strategy strat;
                    if (name == "nn-ge") {
                        strat = Strategy::geometry;
                    } else if (name == "nn-sdr") {
                        strat = Strategy::sdr_refine;
                    } else {
                        strat = Strategy::rms_init_refine;
                        opts.initial = rms_v;
                    }
                    const ReflectionSolution sol = optimize(g_hats, alpha, strat, opts);
                    chosen = sol.v;
                    status = sol.status;
                    extra_ms = train_ms;
                }
                row.min_snr_db = achieved_min_snr_db(chosen, real);
                row.runtime_ms = timer.elapsed_ms() + extra_ms;
                row.flags = sanitize_flag(status);
                if (!std::isfinite(row.min_snr_db) && row.flags == "ok") row.flags = "degenerate";
            } catch (const std::exception& e) {
                row.min_snr_db = std::numeric_limits<double>::quiet_NaN();
                row.runtime_ms = 0.0;
                row.flags = sanitize_flag(std::string("error: ") + e.what());
            }
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

int thread_count_from_env() {
    const char* env = std::getenv("IRSPM_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return n >= 1 ? n : 1;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    struct Task {
        int users;
        std::uint32_t alpha;
        int trial;
    };
    std::vector<Task> tasks;
    for (int users : cfg.user_values())
        for (std::uint32_t alpha : cfg.phase_bit_values())
            for (int trial = 0; trial < cfg.trials; ++trial) tasks.push_back({users, alpha, trial});

    std::vector<TrialOutput> outputs(tasks.size());
    const int threads = std::min<int>(thread_count_from_env(), static_cast<int>(tasks.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            outputs[i] = run_trial(cfg, tasks[i].users, tasks[i].alpha, tasks[i].trial);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                    outputs[i] = run_trial(cfg, tasks[i].users, tasks[i].alpha, tasks[i].trial);
            });
        }
        for (auto& th : pool) th.join();
    }

    std::vector<ResultRow> rows;
    for (TrialOutput& out : outputs)
        for (ResultRow& r : out.rows) rows.push_back(std::move(r));
    return rows;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << "strategy,K,alpha,M,trial,min_snr_db,runtime_ms,flags\n";
    char num[48];
    for (const ResultRow& r : rows) {
        std::vector<std::string> fields;
        fields.push_back(r.strategy);
        fields.push_back(std::to_string(r.users));
        fields.push_back(std::to_string(r.alpha));
        fields.push_back(std::to_string(r.m));
        fields.push_back(std::to_string(r.trial));
        std::snprintf(num, sizeof num, "%.10g", r.min_snr_db);
        fields.emplace_back(num);
        std::snprintf(num, sizeof num, "%.3f", r.runtime_ms);
        fields.emplace_back(num);
        fields.push_back(r.flags);
        csv_write_row(os, fields);
    }
}

std::string run_experiment_to_files(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    if (cfg.dump_loss_curves) fs::create_directories(fs::path(cfg.out_dir) / "loss_curves");
    const std::vector<ResultRow> rows = run_experiment(cfg);
    const std::string path = (fs::path(cfg.out_dir) / "results.csv").string();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_results_csv(os, rows);
    return path;
}

namespace {

double parse_double_field(const std::string& text, const std::string& where, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw parse_error(where + ":" + std::to_string(line) + ": bad number \"" + text + "\"");
    }
}

long parse_long_field(const std::string& text, const std::string& where, int line) {
    try {
        std::size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw parse_error(where + ":" + std::to_string(line) + ": bad integer \"" + text + "\"");
    }
}

}  // namespace

std::vector<SummaryRow> summarize_results(const std::string& results_csv_path) {
    std::ifstream is(results_csv_path);
    if (!is) throw parse_error(results_csv_path + ": cannot open");

    static const std::string kHeader = "strategy,K,alpha,M,trial,min_snr_db,runtime_ms,flags";
    std::string row_text;
    int line = 0;

    if (!std::getline(is, row_text)) throw parse_error(results_csv_path + ": empty file");
    ++line;
    if (!row_text.empty() && row_text.back() == '\r') row_text.pop_back();
    if (row_text != kHeader)
        throw parse_error(results_csv_path + ":1: unexpected header (want \"" + kHeader + "\")");

    struct Key {
        std::string strategy;
        long users;
        long alpha;
        long m;
        bool operator<(const Key& o) const {
            return std::tie(strategy, users, alpha, m) < std::tie(o.strategy, o.users, o.alpha, o.m);
        }
    };
    struct Acc {
        std::vector<double> snr;
        double runtime_sum = 0.0;
        int flagged = 0;
    };
    std::map<Key, Acc> groups;

    while (std::getline(is, row_text)) {
        ++line;
        if (row_text.empty()) continue;
        const std::vector<std::string> f = csv_split_row(row_text, results_csv_path, line);
        if (f.size() != 8)
            throw parse_error(results_csv_path + ":" + std::to_string(line) +
                              ": expected 8 columns, got " + std::to_string(f.size()));
        Key key{f[0], parse_long_field(f[1], results_csv_path, line),
                parse_long_field(f[2], results_csv_path, line),
                parse_long_field(f[3], results_csv_path, line)};
        parse_long_field(f[4], results_csv_path, line);  // trial index; validated, not aggregated
        const double snr_db = parse_double_field(f[5], results_csv_path, line);
        const double runtime = parse_double_field(f[6], results_csv_path, line);
        Acc& acc = groups[key];
        const bool usable = (f[7] == "ok" || f[7] == "degenerate" || f[7] == "relax-max-iterations") &&
                            std::isfinite(snr_db);
        if (usable) {
            acc.snr.push_back(snr_db);
            acc.runtime_sum += runtime;
        } else {
            ++acc.flagged;
        }
    }

    std::vector<SummaryRow> out;
    for (const auto& [key, acc] : groups) {
        SummaryRow s;
        s.strategy = key.strategy;
        s.users = static_cast<int>(key.users);
        s.alpha = static_cast<std::uint32_t>(key.alpha);
        s.m = static_cast<int>(key.m);
        s.trials = static_cast<int>(acc.snr.size());
        s.flagged = acc.flagged;
        if (!acc.snr.empty()) {
            double mean = 0.0;
            for (double v : acc.snr) mean += v;
            mean /= static_cast<double>(acc.snr.size());
            double var = 0.0;
            for (double v : acc.snr) var += (v - mean) * (v - mean);
            s.mean_min_snr_db = mean;
            s.stddev_min_snr_db =
                acc.snr.size() > 1 ? std::sqrt(var / static_cast<double>(acc.snr.size() - 1)) : 0.0;
            s.mean_runtime_ms = acc.runtime_sum / static_cast<double>(acc.snr.size());
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "strategy,K,alpha,M,trials,mean_min_snr_db,stddev_min_snr_db,mean_runtime_ms,flagged\n";
    char num[48];
    for (const SummaryRow& r : rows) {
        std::vector<std::string> fields;
        fields.push_back(r.strategy);
        fields.push_back(std::to_string(r.users));
        fields.push_back(std::to_string(r.alpha));
        fields.push_back(std::to_string(r.m));
        fields.push_back(std::to_string(r.trials));
        std::snprintf(num, sizeof num, "%.10g", r.mean_min_snr_db);
        fields.emplace_back(num);
        std::snprintf(num, sizeof num, "%.10g", r.stddev_min_snr_db);
        fields.emplace_back(num);
        std::snprintf(num, sizeof num, "%.3f", r.mean_runtime_ms);
        fields.emplace_back(num);
        fields.push_back(std::to_string(r.flagged));
        csv_write_row(os, fields);
    }
}

void summarize_to_file(const std::string& results_csv_path, const std::string& summary_csv_path) {
    const std::vector<SummaryRow> rows = summarize_results(results_csv_path);
    std::ofstream os(summary_csv_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + summary_csv_path);
    write_summary_csv(os, rows);
}

}  // namespace irspm
