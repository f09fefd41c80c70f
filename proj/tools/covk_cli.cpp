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

// covk: command-line front end.
//
//   covk simulate --qubits 2..10 --cosets 2,3,5 --trials 100 --noise none --seed 42 --out report.json
//   covk theory --m 2 --n 10 --N 10
//   covk verify-bounds --epsilon 0.05 --qubits 2..8
//
// Errors are reported on stderr as a single JSON object {"error": {...}} with a
// nonzero exit code.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "covk/covk.hpp"

namespace {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kCapacity = 3, kRuntime = 4 };

int emit_error(const std::string &kind, const std::string &message, int code) {
    nlohmann::json rec = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
    std::cerr << rec.dump() << std::endl;
    return code;
}

std::vector<std::size_t> parse_list(const std::string &s) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size()) {
            throw std::invalid_argument("invalid integer list '" + s + "'");
        }
        out.push_back(v);
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

struct SimulateArgs {
    std::string config_file, qubits, cosets, noise, surface, out, format, heatmap, path;
    std::size_t trials = 0, threads = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

covk::ExperimentConfig resolve_config(const SimulateArgs &a, const CLI::App &cmd) {
    covk::ExperimentConfig cfg;
    if (!a.config_file.empty()) {
        std::ifstream f(a.config_file);
        if (!f) {
            throw std::runtime_error("cannot open config '" + a.config_file + "'");
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(f);
        } catch (const nlohmann::json::exception &e) {
            throw std::invalid_argument("malformed config '" + a.config_file + "': " + e.what());
        }
        cfg = covk::config_from_json(j, cfg);
    }
    auto given = [&](const char *name) { return cmd.get_option(name)->count() > 0; };
    if (given("--qubits")) cfg.qubits = covk::QubitRange::parse(a.qubits);
    if (given("--cosets")) cfg.coset_counts = parse_list(a.cosets);
    if (given("--trials")) cfg.trials = a.trials;
    if (given("--noise")) cfg.noise.variant = covk::parse_noise_variant(a.noise);
    if (given("--epsilon")) cfg.noise.epsilon = a.epsilon;
    if (given("--surface")) cfg.surface = covk::parse_surface(a.surface);
    if (given("--seed")) cfg.seed = a.seed;
    if (given("--out")) cfg.output_path = a.out;
    if (given("--format")) cfg.output_format = covk::parse_format(a.format);
    if (given("--heatmap")) cfg.heatmap_path = a.heatmap;
    if (given("--threads")) cfg.threads = a.threads;
    if (given("--path")) cfg.path = covk::parse_eval_path(a.path);
    cfg.validate();
    return cfg;
}

int run_simulate(const SimulateArgs &a, const CLI::App &cmd) {
    const auto cfg = resolve_config(a, cmd);
    const auto report = covk::run_experiment(cfg);
    if (cfg.output_path.empty()) {
        std::cout << (cfg.output_format == covk::OutputFormat::Json ? covk::report_to_json(report).dump(2) + "\n"
                                                                      : covk::report_to_csv(report));
    } else {
        covk::export_report(report, cfg.output_path, cfg.output_format);
        std::cout << covk::report_to_csv(report);
    }
    if (!cfg.heatmap_path.empty()) {
        // Full dataset of trial 0 at the largest N and the first coset count.
        covk::TrialSpec spec{cfg.qubits.last, cfg.coset_counts.front(), cfg.noise, covk::VarianceSurface::Full,
                             cfg.path};
        const auto t = covk::run_trial_detailed(
            spec, covk::trial_seed(cfg.seed, spec.num_qubits, spec.num_cosets, 0), 0);
        covk::export_heatmap(t.kernel, cfg.heatmap_path);
    }
    return kOk;
}

int run_theory(std::size_t m, std::size_t n, std::size_t num_qubits) {
    covk::require(m >= 2, "theory: --m must be >= 2");
    covk::require(n >= 1, "theory: --n must be >= 1");
    covk::require(num_qubits >= 1 && num_qubits <= 1000, "theory: --N must be in 1..1000");
    auto pred = [&](covk::PredictionRegime r) {
        const auto p = covk::predict(r, m, n, num_qubits);
        return nlohmann::json{{"expectation", p.expectation}, {"variance", p.variance}};
    };
    nlohmann::json out = {{"m", m},
                          {"n", n},
                          {"N", num_qubits},
                          {"alpha", std::ldexp(1.0, -static_cast<int>(num_qubits))},
                          {to_string(covk::PredictionRegime::UniformAlpha), pred(covk::PredictionRegime::UniformAlpha)},
                          {to_string(covk::PredictionRegime::AsymptoticHaar),
                           pred(covk::PredictionRegime::AsymptoticHaar)},
                          {to_string(covk::PredictionRegime::LimitLargeN), pred(covk::PredictionRegime::LimitLargeN)}};
    std::cout << out.dump(2) << std::endl;
    return kOk;
}

int run_verify_bounds(double epsilon, const std::string &qubits, std::size_t trials, std::size_t m,
                      std::uint64_t seed) {
    const auto range = covk::QubitRange::parse(qubits);
    covk::require(range.first >= covk::kMinExperimentQubits && range.first <= range.last,
                  "verify-bounds: invalid qubit range");
    if (range.last > covk::kMaxExperimentQubits) {
        throw covk::CapacityError("verify-bounds: qubit range exceeds simulator capacity");
    }
    covk::require(trials >= 1, "verify-bounds: --trials must be >= 1");
    covk::require(std::isfinite(epsilon) && epsilon >= 0, "verify-bounds: --epsilon must be >= 0");
    nlohmann::json rows = nlohmann::json::array();
    std::size_t total_violations = 0;
    for (auto variant : {covk::NoiseVariant::FiducialError, covk::NoiseVariant::SelectionError,
                         covk::NoiseVariant::RepresentationError}) {
        for (std::size_t n = range.first; n <= range.last; ++n) {
            covk::EnvelopeCheck acc;
            for (std::size_t t = 0; t < trials; ++t) {
                covk::TrialSpec spec{n, m, {variant, epsilon}, covk::VarianceSurface::Full};
                const auto art = covk::run_trial_detailed(
                    spec, covk::derive_seed(seed, {static_cast<std::uint64_t>(variant), n, m, t}), t);
                const auto c = covk::check_envelopes(art, variant, epsilon);
                acc.entries += c.entries;
                acc.violations += c.violations;
                acc.worst_margin = std::min(acc.worst_margin, c.worst_margin);
            }
            total_violations += acc.violations;
            rows.push_back({{"noise", to_string(variant)},
                            {"num_qubits", n},
                            {"entries", acc.entries},
                            {"violations", acc.violations},
                            {"worst_margin", acc.worst_margin}});
        }
    }
    nlohmann::json out = {{"epsilon", epsilon}, {"num_cosets", m}, {"trials", trials},
                          {"checks", rows},     {"violations", total_violations}};
    std::cout << out.dump(2) << std::endl;
    return total_violations == 0 ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Covariant quantum kernel simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "Run Monte-Carlo kernel-variance trials");
    simulate->add_option("--config", sim.config_file, "JSON config file; flags override its values");
    simulate->add_option("--qubits", sim.qubits, "Qubit range, e.g. 2..10");
    simulate->add_option("--cosets", sim.cosets, "Comma-separated coset counts, e.g. 2,3,5");
    simulate->add_option("--trials", sim.trials, "Trials per (N, m)");
    simulate->add_option("--noise", sim.noise, "none|fiducial|selection|representation");
    simulate->add_option("--epsilon", sim.epsilon, "Operator-norm noise budget");
    simulate->add_option("--surface", sim.surface, "train|full: points entering the variance");
    simulate->add_option("--seed", sim.seed, "Master seed");
    simulate->add_option("--out", sim.out, "Report file (stdout when omitted)");
    simulate->add_option("--format", sim.format, "json|csv");
    simulate->add_option("--heatmap", sim.heatmap, "Write a kernel heat-map CSV");
    simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
    simulate->add_option("--path", sim.path, "gate|dense: kernel evaluation path");

    std::size_t th_m = 2, th_n = 10, th_N = 10;
    auto *theory = app.add_subcommand("theory", "Print closed-form kernel mean and variance");
    theory->add_option("--m", th_m, "Number of cosets")->required();
    theory->add_option("--n", th_n, "Subset size |S|")->required();
    theory->add_option("--N", th_N, "Number of qubits")->required();

    double vb_eps = 0.05;
    std::string vb_qubits = "2..8";
    std::size_t vb_trials = 20, vb_m = 2;
    std::uint64_t vb_seed = 1;
    auto *verify = app.add_subcommand("verify-bounds", "Check noisy kernel entries against their envelopes");
    verify->add_option("--epsilon", vb_eps, "Operator-norm noise budget");
    verify->add_option("--qubits", vb_qubits, "Qubit range, e.g. 2..8");
    verify->add_option("--trials", vb_trials, "Trials per configuration");
    verify->add_option("--m", vb_m, "Number of cosets");
    verify->add_option("--seed", vb_seed, "Master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return emit_error("usage", e.what(), kUsage);
    }

    try {
        if (simulate->parsed()) {
            return run_simulate(sim, *simulate);
        }
        if (theory->parsed()) {
            return run_theory(th_m, th_n, th_N);
        }
        return run_verify_bounds(vb_eps, vb_qubits, vb_trials, vb_m, vb_seed);
    } catch (const covk::CapacityError &e) {
        return emit_error("capacity", e.what(), kCapacity);
    } catch (const std::invalid_argument &e) {
        return emit_error("invalid_argument", e.what(), kUsage);
    } catch (const std::exception &e) {
        return emit_error("runtime", e.what(), kRuntime);
    }
}
