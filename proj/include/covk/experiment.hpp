// Copyright 2026 The covk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Monte-Carlo trials over random coset datasets, aggregation per (N, m), and
 * report persistence.
 *
 * Every trial owns a seed derived from (master seed, N, m, trial index); the
 * dataset, the split and the noise draws each use their own child stream of
 * that seed. Results therefore do not depend on scheduling or thread count.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "covk/theory.hpp"

namespace covk {

enum class VarianceSurface { Train, Full };
enum class OutputFormat { Json, Csv };

inline std::string to_string(VarianceSurface s) { return s == VarianceSurface::Train ? "train" : "full"; }
inline std::string to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }
inline std::string to_string(EvalPath p) { return p == EvalPath::GateLevel ? "gate" : "dense"; }

inline VarianceSurface parse_surface(std::string_view s) {
    if (s == "train") return VarianceSurface::Train;
    if (s == "full") return VarianceSurface::Full;
    throw std::invalid_argument("unknown variance surface '" + std::string(s) + "'");
}

inline OutputFormat parse_format(std::string_view s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    throw std::invalid_argument("unknown output format '" + std::string(s) + "'");
}

inline EvalPath parse_eval_path(std::string_view s) {
    if (s == "gate") return EvalPath::GateLevel;
    if (s == "dense") return EvalPath::DenseOracle;
    throw std::invalid_argument("unknown evaluation path '" + std::string(s) + "'");
}

struct QubitRange {
    std::size_t first = 2;
    std::size_t last = 10;

    /// Accepts "a..b" or a single integer.
    static QubitRange parse(std::string_view s) {
        auto to_size = [&](std::string_view t) {
            std::size_t v = 0;
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
                throw std::invalid_argument("invalid qubit range '" + std::string(s) + "'");
            }
            return v;
        };
        const auto dots = s.find("..");
        if (dots == std::string_view::npos) {
            const auto v = to_size(s);
            return {v, v};
        }
        return {to_size(s.substr(0, dots)), to_size(s.substr(dots + 2))};
    }

    std::string str() const { return std::to_string(first) + ".." + std::to_string(last); }
    friend bool operator==(const QubitRange &, const QubitRange &) = default;
};

/// Smallest and largest register the experiment harness accepts.
inline constexpr std::size_t kMinExperimentQubits = 2;
inline constexpr std::size_t kMaxExperimentQubits = 12;

struct ExperimentConfig {
    QubitRange qubits{2, 10};
    std::vector<std::size_t> coset_counts{2, 3, 4, 5};
    std::size_t trials = 100;
    NoiseConfig noise;
    std::uint64_t seed = 42;
    VarianceSurface surface = VarianceSurface::Train;
    EvalPath path = EvalPath::GateLevel;
    std::string output_path;
    OutputFormat output_format = OutputFormat::Json;
    std::string heatmap_path;
    /// 0 picks std::thread::hardware_concurrency(). Not part of the report.
    std::size_t threads = 0;

    void validate() const {
        require(trials >= 1, "config: trials must be >= 1");
        require(qubits.first <= qubits.last, "config: empty qubit range");
        if (qubits.first < kMinExperimentQubits || qubits.last > kMaxExperimentQubits) {
            throw CapacityError("config: qubit range must lie within " + std::to_string(kMinExperimentQubits) +
                                ".." + std::to_string(kMaxExperimentQubits));
        }
        require(!coset_counts.empty(), "config: no coset counts");
        for (auto m : coset_counts) {
            require(m >= 2, "config: coset counts must be >= 2");
        }
        noise.validate();
    }
};

struct TrialReport {
    std::size_t num_qubits = 0;
    std::size_t num_cosets = 0;
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    std::size_t surface_size = 0;
    double empirical_mean = 0.0;
    double empirical_variance = 0.0;
    /// exact_variance with this dataset's per-pair alpha (full-matrix formula).
    double theory_exact_variance = 0.0;
    double alpha_min = 0.0;
    double alpha_mean = 0.0;
    double alpha_max = 0.0;
    std::string noise_draws_digest;

    friend bool operator==(const TrialReport &, const TrialReport &) = default;
};

struct AggregateReport {
    std::size_t num_qubits = 0;
    std::size_t num_cosets = 0;
    std::size_t trials = 0;
    double mean_variance = 0.0;
    /// Population standard deviation of the per-trial variances.
    double std_dev_variance = 0.0;
    double mean_expectation = 0.0;
    double theory_exact = 0.0;
    double theory_asymptotic = 0.0;
    double theory_limit = 0.0;
    double mean_alpha = 0.0;

    friend bool operator==(const AggregateReport &, const AggregateReport &) = default;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<AggregateReport> aggregates;
    std::vector<TrialReport> trials;
};

struct TrialSpec {
    std::size_t num_qubits = 2;
    std::size_t num_cosets = 2;
    NoiseConfig noise;
    VarianceSurface surface = VarianceSurface::Train;
    EvalPath path = EvalPath::GateLevel;
};

/// Intermediate products of one trial, kept for heat maps and cross-checks.
struct TrialArtifacts {
    CosetDataset dataset;
    SplitIndices split;
    NoiseDraws draws;
    KernelMatrix kernel{Eigen::MatrixXd(), {}};
    Eigen::MatrixXd alphas;
    TrialReport report;
};

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t num_qubits, std::size_t num_cosets,
                                std::size_t trial_index) {
    return derive_seed(master, {num_qubits, num_cosets, trial_index});
}

namespace detail {

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace detail

/// dataset -> split -> noise draws -> kernel on the chosen surface -> off-diagonal statistics.
inline TrialArtifacts run_trial_detailed(const TrialSpec &spec, std::uint64_t seed, std::size_t trial_index = 0) {
    if (spec.num_qubits > kMaxExperimentQubits) {
        throw CapacityError("run_trial: " + std::to_string(spec.num_qubits) + " qubits exceeds simulator capacity");
    }
    TrialArtifacts t;
    t.dataset = generate_seeded(spec.num_qubits, spec.num_cosets, derive_seed(seed, {1}));
    Rng split_rng(derive_seed(seed, {2}));
    t.split = split(t.dataset, split_rng);
    const std::uint64_t noise_seed = derive_seed(seed, {3});
    Rng noise_rng(noise_seed);
    t.draws = sample_noise_draws(spec.noise, spec.num_qubits, t.dataset.points.size(), noise_rng);

    const auto indices = spec.surface == VarianceSurface::Train ? t.split.train : all_indices(t.dataset);
    t.kernel = kernel_matrix(make_job(t.dataset, indices, t.draws, spec.path));
    t.alphas = alpha_estimate(t.dataset);

    auto &r = t.report;
    r.num_qubits = spec.num_qubits;
    r.num_cosets = spec.num_cosets;
    r.trial_index = trial_index;
    r.seed = seed;
    r.surface_size = t.kernel.size();
    const auto st = offdiagonal_stats(t.kernel);
    r.empirical_mean = st.mean;
    r.empirical_variance = st.variance;
    r.theory_exact_variance = exact_variance(spec.num_cosets, t.dataset.subgroup_size, t.alphas);

    double lo = 1.0, hi = 0.0, acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < t.kernel.size(); ++i) {
        for (std::size_t j = 0; j < t.kernel.size(); ++j) {
            if (!t.kernel.same_coset(i, j)) {
                lo = std::min(lo, t.kernel(i, j));
                hi = std::max(hi, t.kernel(i, j));
                acc += t.kernel(i, j);
                ++cnt;
            }
        }
    }
    r.alpha_min = cnt ? lo : 0.0;
    r.alpha_max = cnt ? hi : 0.0;
    r.alpha_mean = cnt ? acc / static_cast<double>(cnt) : 0.0;
    r.noise_draws_digest = to_string(spec.noise.variant) + ":" + detail::hex64(noise_seed);
    return t;
}

inline TrialReport run_trial(const TrialSpec &spec, std::uint64_t seed, std::size_t trial_index = 0) {
    return run_trial_detailed(spec, seed, trial_index).report;
}

/// Draws the trial seed from `rng`.
inline TrialReport run_trial(const TrialSpec &spec, Rng &rng) { return run_trial(spec, rng()); }

inline AggregateReport aggregate(std::size_t num_qubits, std::size_t num_cosets,
                                 const std::vector<TrialReport> &trials) {
    require(!trials.empty(), "aggregate: no trials");
    AggregateReport a;
    a.num_qubits = num_qubits;
    a.num_cosets = num_cosets;
    a.trials = trials.size();
    std::vector<double> variances;
    double mean_e = 0.0, th = 0.0, alpha = 0.0;
    for (const auto &t : trials) {
        variances.push_back(t.empirical_variance);
        mean_e += t.empirical_mean;
        th += t.theory_exact_variance;
        alpha += t.alpha_mean;
    }
    const double n = static_cast<double>(trials.size());
    const auto st = population_stats(variances);
    a.mean_variance = st.mean;
    a.std_dev_variance = std::sqrt(st.variance);
    a.mean_expectation = mean_e / n;
    a.theory_exact = th / n;
    a.mean_alpha = alpha / n;
    a.theory_asymptotic = asymptotic_variance(num_cosets, num_qubits, num_qubits);
    a.theory_limit = limit_variance(num_cosets);
    return a;
}

/// Runs `fn(i)` for i in [0, count) on `threads` workers; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) {
                        err = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (err) {
        std::rethrow_exception(err);
    }
}

inline ExperimentReport run_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    struct Job {
        std::size_t n, m, t;
    };
    std::vector<Job> jobs;
    for (std::size_t n = cfg.qubits.first; n <= cfg.qubits.last; ++n) {
        for (auto m : cfg.coset_counts) {
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                jobs.push_back({n, m, t});
            }
        }
    }
    std::vector<TrialReport> results(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t k) {
        const auto &j = jobs[k];
        TrialSpec spec{j.n, j.m, cfg.noise, cfg.surface, cfg.path};
        results[k] = run_trial(spec, trial_seed(cfg.seed, j.n, j.m, j.t), j.t);
    });

    ExperimentReport rep;
    rep.config = cfg;
    rep.trials = results;
    for (std::size_t start = 0; start < results.size(); start += cfg.trials) {
        std::vector<TrialReport> group(results.begin() + static_cast<std::ptrdiff_t>(start),
                                       results.begin() + static_cast<std::ptrdiff_t>(start + cfg.trials));
        rep.aggregates.push_back(aggregate(group.front().num_qubits, group.front().num_cosets, group));
    }
    return rep;
}

struct EnvelopeCheck {
    std::size_t entries = 0;
    std::size_t violations = 0;
    /// Smallest distance from an entry to the nearest envelope edge (negative when outside).
    double worst_margin = 1.0;
};

/// Checks every entry of the trial's kernel against the noise envelope built from that
/// pair's ideal alpha. Diagonal entries count as same-coset pairs.
inline EnvelopeCheck check_envelopes(const TrialArtifacts &t, NoiseVariant variant, double epsilon,
                                     double tol = 1e-10) {
    EnvelopeCheck c;
    const auto &k = t.kernel;
    for (std::size_t i = 0; i < k.size(); ++i) {
        for (std::size_t j = 0; j < k.size(); ++j) {
            const auto ci = static_cast<Eigen::Index>(k.labels()[i].coset);
            const auto cj = static_cast<Eigen::Index>(k.labels()[j].coset);
            const bool same = ci == cj;
            const double alpha = same ? 1.0 : std::clamp(t.alphas(ci, cj), 0.0, 1.0);
            const NoiseBounds b = bounds_for(variant, alpha, epsilon);
            const double v = k(i, j);
            const double margin = same ? std::min(v - b.same_coset_lower, 1.0 - v)
                                       : std::min(v - b.cross_coset_lower, b.cross_coset_upper - v);
            c.worst_margin = std::min(c.worst_margin, margin);
            ++c.entries;
            if (!b.admits(same, v, tol)) {
                ++c.violations;
            }
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json config_to_json(const ExperimentConfig &c) {
    return {{"qubits", c.qubits.str()},
            {"cosets", c.coset_counts},
            {"trials", c.trials},
            {"noise", to_string(c.noise.variant)},
            {"epsilon", c.noise.epsilon},
            {"seed", c.seed},
            {"surface", to_string(c.surface)},
            {"path", to_string(c.path)},
            {"out", c.output_path},
            {"format", to_string(c.output_format)},
            {"heatmap", c.heatmap_path}};
}

/// Reads any subset of the keys written by config_to_json on top of `base`.
inline ExperimentConfig config_from_json(const nlohmann::json &j, ExperimentConfig base = {}) {
    if (!j.is_object()) {
        throw std::invalid_argument("config: expected a JSON object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto &k = it.key();
        const auto &v = it.value();
        if (k == "qubits") {
            base.qubits = v.is_string() ? QubitRange::parse(v.get<std::string>())
                                        : QubitRange{v.at(0).get<std::size_t>(), v.at(1).get<std::size_t>()};
        } else if (k == "cosets") {
            base.coset_counts = v.get<std::vector<std::size_t>>();
        } else if (k == "trials") {
            base.trials = v.get<std::size_t>();
        } else if (k == "noise") {
            base.noise.variant = parse_noise_variant(v.get<std::string>());
        } else if (k == "epsilon") {
            base.noise.epsilon = v.get<double>();
        } else if (k == "seed") {
            base.seed = v.get<std::uint64_t>();
        } else if (k == "surface") {
            base.surface = parse_surface(v.get<std::string>());
        } else if (k == "path") {
            base.path = parse_eval_path(v.get<std::string>());
        } else if (k == "out") {
            base.output_path = v.get<std::string>();
        } else if (k == "format") {
            base.output_format = parse_format(v.get<std::string>());
        } else if (k == "heatmap") {
            base.heatmap_path = v.get<std::string>();
        } else if (k == "threads") {
            base.threads = v.get<std::size_t>();
        } else {
            throw std::invalid_argument("config: unknown key '" + k + "'");
        }
    }
    return base;
}

inline nlohmann::json report_to_json(const ExperimentReport &r) {
    nlohmann::json j;
    j["config"] = config_to_json(r.config);
    j["aggregates"] = nlohmann::json::array();
    for (const auto &a : r.aggregates) {
        j["aggregates"].push_back({{"num_qubits", a.num_qubits},
                                   {"num_cosets", a.num_cosets},
                                   {"trials", a.trials},
                                   {"mean_variance", a.mean_variance},
                                   {"std_dev_variance", a.std_dev_variance},
                                   {"mean_expectation", a.mean_expectation},
                                   {"theory_exact", a.theory_exact},
                                   {"theory_asymptotic", a.theory_asymptotic},
                                   {"theory_limit", a.theory_limit},
                                   {"mean_alpha", a.mean_alpha}});
    }
    j["trials"] = nlohmann::json::array();
    for (const auto &t : r.trials) {
        j["trials"].push_back({{"num_qubits", t.num_qubits},
                               {"num_cosets", t.num_cosets},
                               {"trial_index", t.trial_index},
                               {"seed", t.seed},
                               {"surface_size", t.surface_size},
                               {"empirical_mean", t.empirical_mean},
                               {"empirical_variance", t.empirical_variance},
                               {"theory_exact_variance", t.theory_exact_variance},
                               {"alpha_min", t.alpha_min},
                               {"alpha_mean", t.alpha_mean},
                               {"alpha_max", t.alpha_max},
                               {"noise_draws_digest", t.noise_draws_digest}});
    }
    return j;
}

inline ExperimentReport report_from_json(const nlohmann::json &j) {
    ExperimentReport r;
    r.config = config_from_json(j.at("config"));
    for (const auto &a : j.at("aggregates")) {
        AggregateReport x;
        x.num_qubits = a.at("num_qubits").get<std::size_t>();
        x.num_cosets = a.at("num_cosets").get<std::size_t>();
        x.trials = a.at("trials").get<std::size_t>();
        x.mean_variance = a.at("mean_variance").get<double>();
        x.std_dev_variance = a.at("std_dev_variance").get<double>();
        x.mean_expectation = a.at("mean_expectation").get<double>();
        x.theory_exact = a.at("theory_exact").get<double>();
        x.theory_asymptotic = a.at("theory_asymptotic").get<double>();
        x.theory_limit = a.at("theory_limit").get<double>();
        x.mean_alpha = a.at("mean_alpha").get<double>();
        r.aggregates.push_back(x);
    }
    for (const auto &t : j.at("trials")) {
        TrialReport x;
        x.num_qubits = t.at("num_qubits").get<std::size_t>();
        x.num_cosets = t.at("num_cosets").get<std::size_t>();
        x.trial_index = t.at("trial_index").get<std::size_t>();
        x.seed = t.at("seed").get<std::uint64_t>();
        x.surface_size = t.at("surface_size").get<std::size_t>();
        x.empirical_mean = t.at("empirical_mean").get<double>();
        x.empirical_variance = t.at("empirical_variance").get<double>();
        x.theory_exact_variance = t.at("theory_exact_variance").get<double>();
        x.alpha_min = t.at("alpha_min").get<double>();
        x.alpha_mean = t.at("alpha_mean").get<double>();
        x.alpha_max = t.at("alpha_max").get<double>();
        x.noise_draws_digest = t.at("noise_draws_digest").get<std::string>();
        r.trials.push_back(x);
    }
    return r;
}

namespace detail {

/// Shortest decimal that round-trips.
inline std::string shortest(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

inline void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
    }
    f << content;
    f.flush();
    if (!f) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

}  // namespace detail

inline std::string report_to_csv(const ExperimentReport &r) {
    std::ostringstream out;
    out << "num_qubits,num_cosets,trials,mean_variance,std_dev_variance,mean_expectation,"
           "theory_exact,theory_asymptotic,theory_limit,mean_alpha\n";
    for (const auto &a : r.aggregates) {
        using detail::shortest;
        out << a.num_qubits << ',' << a.num_cosets << ',' << a.trials << ',' << shortest(a.mean_variance) << ','
            << shortest(a.std_dev_variance) << ',' << shortest(a.mean_expectation) << ','
            << shortest(a.theory_exact) << ',' << shortest(a.theory_asymptotic) << ','
            << shortest(a.theory_limit) << ',' << shortest(a.mean_alpha) << '\n';
    }
    return out.str();
}

/// Persists the report. Refuses to write a report without trials.
inline void export_report(const ExperimentReport &r, const std::string &path, OutputFormat format) {
    if (r.trials.empty() || r.aggregates.empty()) {
        throw std::invalid_argument("export_report: report has no trials; nothing written to '" + path + "'");
    }
    if (format == OutputFormat::Json) {
        detail::write_file(path, report_to_json(r).dump(2) + "\n");
    } else {
        detail::write_file(path, report_to_csv(r));
    }
}

inline ExperimentReport import_report(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open '" + path + "' for reading: " + std::strerror(errno));
    }
    try {
        return report_from_json(nlohmann::json::parse(f));
    } catch (const nlohmann::json::exception &e) {
        throw std::runtime_error("malformed report '" + path + "': " + e.what());
    }
}

inline void export_heatmap(const KernelMatrix &k, const std::string &path) {
    require(k.size() > 0, "export_heatmap: empty kernel matrix");
    std::ostringstream out;
    write_heatmap_csv(k, out);
    detail::write_file(path, out.str());
}

}  // namespace covk
