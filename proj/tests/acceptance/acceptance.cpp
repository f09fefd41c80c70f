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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "covk/covk.hpp"
#include "support/lemmas.hpp"
#include "support/oracles.hpp"
#include "support/run_cli.hpp"

using namespace covk;
namespace ct = covk::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct Detail {
    std::ostringstream os;
    template <typename T>
    Detail &operator<<(const T &v) {
        os << v;
        return *this;
    }
    std::string str() const { return os.str(); }
};

ExperimentReport noiseless_runs(std::size_t first, std::size_t last, std::vector<std::size_t> cosets,
                                VarianceSurface surface, std::uint64_t seed, NoiseConfig noise = {}) {
    ExperimentConfig cfg;
    cfg.qubits = {first, last};
    cfg.coset_counts = std::move(cosets);
    cfg.trials = 100;
    cfg.surface = surface;
    cfg.seed = seed;
    cfg.noise = noise;
    return run_experiment(cfg);
}

const AggregateReport &find_aggregate(const ExperimentReport &r, std::size_t n, std::size_t m) {
    for (const auto &a : r.aggregates)
        if (a.num_qubits == n && a.num_cosets == m) return a;
    throw std::logic_error("missing aggregate");
}

// 1. Full-surface variance against the per-dataset closed form and the large-N limit.
Outcome noiseless_asymptote() {
    const auto rep = noiseless_runs(10, 10, {2, 3, 4, 5}, VarianceSurface::Full, 1001);
    Outcome o{true, ""};
    Detail d;
    for (std::size_t m = 2; m <= 5; ++m) {
        std::vector<double> emp, th;
        for (const auto &t : rep.trials) {
            if (t.num_cosets != m) continue;
            emp.push_back(t.empirical_variance);
            th.push_back(t.theory_exact_variance);
        }
        auto [emp_mean, emp_var] = ct::brute_mean_var(emp);
        auto [th_mean, th_var] = ct::brute_mean_var(th);
        const double se = std::sqrt(emp_var / static_cast<double>(emp.size()));
        const double limit = limit_variance(m);
        const bool ok_theory = std::abs(emp_mean - th_mean) <= 3 * se;
        const bool ok_limit = std::abs(emp_mean - limit) <= 0.03;
        o.pass = o.pass && ok_theory && ok_limit;
        d << "m=" << m << " mean=" << fmt("%.4f", emp_mean) << " theory=" << fmt("%.4f", th_mean)
          << " limit=" << fmt("%.4f", limit) << "; ";
    }
    o.detail = d.str();
    return o;
}

// 2. Training-surface mean variance against n(n-1)(m-1)/(mn-1)^2 (1 - 2^-N)^2.
Outcome finite_size_curve() {
    const auto rep = noiseless_runs(4, 10, {2}, VarianceSurface::Train, 2002);
    Outcome o{true, ""};
    Detail d;
    std::vector<double> gaps;
    for (std::size_t n : {4, 6, 8, 10}) {
        const auto &a = find_aggregate(rep, n, 2);
        const double theory = asymptotic_variance(2, n, n);
        const double gap = std::abs(a.mean_variance - theory);
        gaps.push_back(gap / theory);
        const bool ok = gap <= 3 * a.std_dev_variance;
        o.pass = o.pass && ok;
        d << "N=" << n << " mean=" << fmt("%.4f", a.mean_variance) << " sd=" << fmt("%.4f", a.std_dev_variance)
          << " theory=" << fmt("%.4f", theory) << "; ";
    }
    // Monotone approach beyond N = 6: the relative gap to theory does not grow from N = 6 to 8 to 10.
    const bool monotone = gaps[1] >= gaps[2] && gaps[2] >= gaps[3];
    o.pass = o.pass && monotone;
    d << "rel_gap N=6/8/10: " << fmt("%.4f", gaps[1]) << "/" << fmt("%.4f", gaps[2]) << "/" << fmt("%.4f", gaps[3]);
    o.detail = d.str();
    return o;
}

// 3. Counting structure of full noiseless kernel matrices.
Outcome multiset_counts() {
    Rng rng(3003);
    std::uniform_int_distribution<std::size_t> pick_n(2, 8), pick_m(2, 5);
    std::size_t bad = 0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = pick_n(rng), m = pick_m(rng);
        const auto ds = covk::generate(n, m, rng);
        const auto k = kernel_matrix(make_job(ds, all_indices(ds), NoiseDraws{}));
        std::size_t ones = 0;
        std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> cross;
        for (std::size_t i = 0; i < k.size(); ++i) {
            for (std::size_t j = 0; j < k.size(); ++j) {
                if (i == j) continue;
                if (std::abs(k(i, j) - 1.0) <= 1e-9) ++ones;
                const auto ci = k.labels()[i].coset, cj = k.labels()[j].coset;
                if (ci != cj) cross[{std::min(ci, cj), std::max(ci, cj)}].push_back(k(i, j));
            }
        }
        bool ok = ones == m * (n * n - n) && cross.size() == m * (m - 1) / 2;
        for (const auto &[pair, v] : cross) {
            const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            ok = ok && v.size() == 2 * n * n && *hi - *lo <= 1e-10;
        }
        if (!ok) ++bad;
    }
    return {bad == 0, "50 datasets, " + std::to_string(bad) + " with wrong counts"};
}

// 4. Overlap of Haar-random states.
Outcome haar_overlap() {
    Rng rng(4004);
    Outcome o{true, ""};
    Detail d;
    for (std::size_t n = 1; n <= 8; ++n) {
        std::vector<double> w;
        for (int k = 0; k < 10000; ++k) {
            w.push_back(fidelity(haar_random_state(n, rng), haar_random_state(n, rng)));
        }
        auto [mean, var] = ct::brute_mean_var(w);
        const double se = std::sqrt(var / static_cast<double>(w.size()));
        const double target = std::ldexp(1.0, -static_cast<int>(n));
        const bool ok = std::abs(mean - target) <= 3 * se;
        o.pass = o.pass && ok;
        d << "N=" << n << " z=" << fmt("%.2f", (mean - target) / se) << "; ";
        if (n == 1) {
            const double ks = ct::ks_statistic(w, [](double x) { return std::clamp(x, 0.0, 1.0); });
            const bool ks_ok = ct::ks_one_sample_passes(w, [](double x) { return std::clamp(x, 0.0, 1.0); }, 0.01);
            o.pass = o.pass && ks_ok;
            d << "KS(N=1)=" << fmt("%.4f", ks) << "; ";
        }
    }
    o.detail = d.str();
    return o;
}

// 5. Sampled perturbations respect their operator-norm budgets.
Outcome noise_budgets() {
    Rng rng(5005);
    std::size_t samples = 0, violations = 0;
    double worst = -1.0;
    for (std::size_t n = 2; n <= 8; ++n) {
        const auto v = FiducialPreparation::chain(n).to_dense();
        const auto id = DenseOperator::identity(n);
        for (double eps : {0.05, 0.9}) {
            for (int k = 0; k < 1000; ++k) {
                const double a = operator_norm(v - sample_fiducial_offsets(n, eps, rng).preparation().to_dense());
                const double b = operator_norm(sample_element_perturbation(n, eps, rng).element().to_dense() - id);
                for (double x : {a, b}) {
                    ++samples;
                    worst = std::max(worst, x - eps);
                    if (x > eps + 1e-6) ++violations;
                }
            }
        }
    }
    return {violations == 0, std::to_string(samples) + " samples, " + std::to_string(violations) +
                                 " violations, max(norm - eps)=" + fmt("%.3e", worst)};
}

// 6. Noisy entries inside their envelopes at small epsilon.
Outcome bound_envelopes() {
    const double eps = 0.05;
    std::size_t entries = 0, violations = 0;
    Detail d;
    for (auto v : {NoiseVariant::FiducialError, NoiseVariant::SelectionError, NoiseVariant::RepresentationError}) {
        std::size_t vv = 0;
        double worst = 1.0;
        for (std::size_t n = 2; n <= 8; ++n) {
            for (std::size_t t = 0; t < 20; ++t) {
                TrialSpec spec{n, 2, {v, eps}, VarianceSurface::Full};
                const auto art = run_trial_detailed(spec, derive_seed(6006, {static_cast<std::uint64_t>(v), n, t}), t);
                const auto c = check_envelopes(art, v, eps);
                entries += c.entries;
                vv += c.violations;
                worst = std::min(worst, c.worst_margin);
            }
        }
        violations += vv;
        d << to_string(v) << ": " << vv << " violations, worst margin " << fmt("%.3e", worst) << "; ";
    }
    d << entries << " entries";
    return {violations == 0, d.str()};
}

// 7. Variance stays away from zero under heavy noise.
Outcome heavy_noise() {
    const auto fid = noiseless_runs(9, 10, {2}, VarianceSurface::Train, 7007, {NoiseVariant::FiducialError, 0.9});
    const auto sel = noiseless_runs(9, 10, {2}, VarianceSurface::Train, 7007, {NoiseVariant::SelectionError, 0.9});
    const double f9 = find_aggregate(fid, 9, 2).mean_variance, f10 = find_aggregate(fid, 10, 2).mean_variance;
    const double s9 = find_aggregate(sel, 9, 2).mean_variance, s10 = find_aggregate(sel, 10, 2).mean_variance;
    const bool ok = f10 > 0.02 && s10 > 0.02 && std::abs(f9 - f10) < 0.02 && std::abs(s9 - s10) < 0.02 && f10 < s10;
    Detail d;
    d << "fiducial N=9 " << fmt("%.4f", f9) << " N=10 " << fmt("%.4f", f10) << "; selection N=9 " << fmt("%.4f", s9)
      << " N=10 " << fmt("%.4f", s10);
    return {ok, d.str()};
}

// 8. Gate-level and dense evaluation agree.
Outcome oracle_equivalence() {
    Rng rng(8008);
    double worst_entry = 0.0;
    const NoiseVariant variants[] = {NoiseVariant::None, NoiseVariant::FiducialError, NoiseVariant::SelectionError,
                                     NoiseVariant::RepresentationError};
    std::uniform_int_distribution<std::size_t> pick_n(2, 6), pick_m(2, 5);
    for (int c = 0; c < 100; ++c) {
        const std::size_t n = pick_n(rng), m = pick_m(rng);
        const auto ds = covk::generate(n, m, rng);
        Rng nrng(rng());
        const auto draws = sample_noise_draws({variants[c % 4], 0.5}, n, ds.points.size(), nrng);
        const auto gate = make_job(ds, all_indices(ds), draws, EvalPath::GateLevel);
        const auto dense = make_job(ds, all_indices(ds), draws, EvalPath::DenseOracle);
        std::uniform_int_distribution<std::size_t> pick(0, ds.points.size() - 1);
        const std::size_t i = pick(rng), j = pick(rng);
        worst_entry = std::max(worst_entry, std::abs(kernel_entry(gate, i, j) - kernel_entry(dense, i, j)));
    }
    double worst_stat = 0.0;
    bool structural = true;
    for (auto v : variants) {
        for (auto surface : {VarianceSurface::Train, VarianceSurface::Full}) {
            for (std::uint64_t s = 0; s < 5; ++s) {
                TrialSpec g{4, 3, {v, 0.5}, surface, EvalPath::GateLevel};
                TrialSpec dn = g;
                dn.path = EvalPath::DenseOracle;
                const auto a = run_trial(g, derive_seed(8009, {s})), b = run_trial(dn, derive_seed(8009, {s}));
                structural = structural && a.surface_size == b.surface_size &&
                             a.noise_draws_digest == b.noise_draws_digest && a.seed == b.seed;
                for (auto [x, y] : {std::pair{a.empirical_mean, b.empirical_mean},
                                    {a.empirical_variance, b.empirical_variance},
                                    {a.theory_exact_variance, b.theory_exact_variance},
                                    {a.alpha_min, b.alpha_min},
                                    {a.alpha_mean, b.alpha_mean},
                                    {a.alpha_max, b.alpha_max}}) {
                    worst_stat = std::max(worst_stat, std::abs(x - y));
                }
            }
        }
    }
    const bool ok = worst_entry <= 1e-10 && worst_stat <= 1e-10 && structural;
    return {ok, "max entry diff " + fmt("%.2e", worst_entry) + ", max statistic diff " + fmt("%.2e", worst_stat)};
}

// 9. Operator-norm inequalities.
Outcome operator_norm_lemmas() {
    Rng rng(9009);
    bool ok = true;
    Detail d;
    for (const auto &r : ct::run_operator_norm_lemmas(200, rng, 1e-9)) {
        ok = ok && r.instances == 200 && r.violations == 0;
        d << r.name << " " << r.violations << "/" << r.instances << "; ";
    }
    return {ok, d.str()};
}

// 10. Byte-identical simulate output.
Outcome determinism() {
    const auto out = ct::scratch_path("acceptance_report.json");
    const auto heat = ct::scratch_path("acceptance_heat.csv");
    const std::string args = "simulate --qubits 2..6 --cosets 2,3 --trials 5 --noise selection --epsilon 0.3 --seed 1234"
                             " --out " + out + " --heatmap " + heat;
    std::vector<std::string> reports, heatmaps;
    bool ran = true;
    for (int run = 0; run < 2; ++run) {
        std::filesystem::remove(out);
        std::filesystem::remove(heat);
        ran = ran && ct::run_cli(args).exit_code == 0;
        reports.push_back(ct::read_file(out));
        heatmaps.push_back(ct::read_file(heat));
    }
    std::filesystem::remove(out);
    std::filesystem::remove(heat);
    const bool ok = ran && !reports[0].empty() && reports[0] == reports[1] && !heatmaps[0].empty() &&
                    heatmaps[0] == heatmaps[1];
    return {ok, std::to_string(reports[0].size()) + "-byte report, " + std::to_string(heatmaps[0].size()) +
                    "-byte heat map, identical=" + (ok ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"noiseless asymptote", noiseless_asymptote},
        {"finite-size theory curve", finite_size_curve},
        {"kernel multiset counts", multiset_counts},
        {"Haar overlap law", haar_overlap},
        {"noise budgets", noise_budgets},
        {"bound envelopes", bound_envelopes},
        {"non-concentration under heavy noise", heavy_noise},
        {"oracle equivalence", oracle_equivalence},
        {"operator-norm lemmas", operator_norm_lemmas},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": " << o.detail
                  << " (" << fmt("%.1f", secs) << " s)" << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " acceptance criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
