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
 * Closed-form mean and variance of the off-diagonal kernel entries.
 *
 * All statistics are over ordered pairs (x, x') with x != x', i.e. the
 * (mn)^2 - mn off-diagonal entries of the full matrix, and variances are
 * population variances.
 */
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "covk/kernel.hpp"

namespace covk {

enum class PredictionRegime { ExactPerPairAlpha, UniformAlpha, AsymptoticHaar, LimitLargeN };

inline std::string to_string(PredictionRegime r) {
    switch (r) {
    case PredictionRegime::ExactPerPairAlpha: return "exact_per_pair_alpha";
    case PredictionRegime::UniformAlpha: return "uniform_alpha";
    case PredictionRegime::AsymptoticHaar: return "asymptotic_haar";
    default: return "limit_large_n";
    }
}

struct VariancePrediction {
    double expectation = 0.0;
    double variance = 0.0;
    PredictionRegime regime = PredictionRegime::ExactPerPairAlpha;
};

namespace detail {

struct AlphaSums {
    double sum = 0.0;     // sum_{i<j} alpha_ij
    double sum_sq = 0.0;  // sum_{i<j} alpha_ij^2
};

inline AlphaSums alpha_sums(std::size_t m, std::size_t n, const Eigen::MatrixXd &alphas) {
    require(m >= 2, "theory: need m >= 2");
    require(n >= 1, "theory: need n >= 1");
    if (alphas.rows() != static_cast<Eigen::Index>(m) || alphas.cols() != static_cast<Eigen::Index>(m)) {
        throw std::invalid_argument("theory: alpha matrix must be m x m");
    }
    AlphaSums s;
    for (Eigen::Index i = 0; i < alphas.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < alphas.cols(); ++j) {
            s.sum += alphas(i, j);
            s.sum_sq += alphas(i, j) * alphas(i, j);
        }
    }
    return s;
}

}  // namespace detail

/// [m(n-1) + 2n sum_{i<j} alpha_ij] / (m(mn-1))
inline double exact_expectation(std::size_t m, std::size_t n, const Eigen::MatrixXd &alphas) {
    const auto s = detail::alpha_sums(m, n, alphas);
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    return (md * (nd - 1) + 2 * nd * s.sum) / (md * (md * nd - 1));
}

/// [m(mn-1)(m(n-1) + 2n S2) - (m(n-1) + 2n S1)^2] / (m^2 (mn-1)^2)
inline double exact_variance(std::size_t m, std::size_t n, const Eigen::MatrixXd &alphas) {
    const auto s = detail::alpha_sums(m, n, alphas);
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    const double a = md * (nd - 1) + 2 * nd * s.sum;
    const double b = md * (nd - 1) + 2 * nd * s.sum_sq;
    const double denom = md * md * (md * nd - 1) * (md * nd - 1);
    return std::max(0.0, (md * (md * nd - 1) * b - a * a) / denom);
}

inline Eigen::MatrixXd uniform_alphas(std::size_t m, double alpha) {
    const auto md = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(md, md, alpha);
    a.diagonal().setOnes();
    return a;
}

/// ((n-1) + n(m-1) / 2^N) / (mn - 1)
inline double asymptotic_expectation(std::size_t m, std::size_t n, std::size_t num_qubits) {
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    return ((nd - 1) + nd * (md - 1) * std::ldexp(1.0, -static_cast<int>(num_qubits))) / (md * nd - 1);
}

/// n(n-1)(m-1) / (mn-1)^2 * (1 - 2^-N)^2
inline double asymptotic_variance(std::size_t m, std::size_t n, std::size_t num_qubits) {
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    const double f = 1.0 - std::ldexp(1.0, -static_cast<int>(num_qubits));
    return nd * (nd - 1) * (md - 1) / ((md * nd - 1) * (md * nd - 1)) * f * f;
}

/// Limit N, n -> infinity: (m - 1) / m^2.
inline double limit_variance(std::size_t m) {
    const double md = static_cast<double>(m);
    return (md - 1) / (md * md);
}

inline double limit_expectation(std::size_t m) { return 1.0 / static_cast<double>(m); }

inline VariancePrediction predict(PredictionRegime regime, std::size_t m, std::size_t n, std::size_t num_qubits,
                                  const Eigen::MatrixXd *alphas = nullptr) {
    VariancePrediction p;
    p.regime = regime;
    switch (regime) {
    case PredictionRegime::ExactPerPairAlpha:
        require(alphas != nullptr, "predict: per-pair regime needs an alpha matrix");
        p.expectation = exact_expectation(m, n, *alphas);
        p.variance = exact_variance(m, n, *alphas);
        break;
    case PredictionRegime::UniformAlpha: {
        const auto a = uniform_alphas(m, std::ldexp(1.0, -static_cast<int>(num_qubits)));
        p.expectation = exact_expectation(m, n, a);
        p.variance = exact_variance(m, n, a);
        break;
    }
    case PredictionRegime::AsymptoticHaar:
        p.expectation = asymptotic_expectation(m, n, num_qubits);
        p.variance = asymptotic_variance(m, n, num_qubits);
        break;
    case PredictionRegime::LimitLargeN:
        p.expectation = limit_expectation(m);
        p.variance = limit_variance(m);
        break;
    }
    return p;
}

/// Summary of the deviations gamma = 1 - kappa (same coset, off-diagonal) and
/// delta = kappa - alpha (different cosets).
struct NoiseDeviationStats {
    double mean_gamma = 0.0;
    double var_gamma = 0.0;
    double mean_delta = 0.0;
    double var_delta = 0.0;
    double alpha = 0.0;
};

/// (n-1)/(mn-1) (1 - E[gamma]) + n(m-1)/(mn-1) (alpha + E[delta])
inline double noisy_expectation(std::size_t m, std::size_t n, const NoiseDeviationStats &s) {
    require(m >= 2 && n >= 1, "noisy_expectation: need m >= 2, n >= 1");
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    return (nd - 1) / (md * nd - 1) * (1 - s.mean_gamma) + nd * (md - 1) / (md * nd - 1) * (s.alpha + s.mean_delta);
}

/// n(m-1)(n-1)/(mn-1)^2 ((1 - E[gamma]) - (alpha + E[delta]))^2
///   + ((n-1) Var[gamma] + n(m-1) Var[delta]) / (mn-1)
inline double noisy_variance(std::size_t m, std::size_t n, const NoiseDeviationStats &s) {
    require(m >= 2 && n >= 1, "noisy_variance: need m >= 2, n >= 1");
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    const double gap = (1 - s.mean_gamma) - (s.alpha + s.mean_delta);
    return nd * (md - 1) * (nd - 1) / ((md * nd - 1) * (md * nd - 1)) * gap * gap +
           ((nd - 1) * s.var_gamma + nd * (md - 1) * s.var_delta) / (md * nd - 1);
}

struct EntryStats {
    double mean = 0.0;
    double variance = 0.0;
    std::size_t count = 0;
};

inline EntryStats population_stats(const std::vector<double> &v) {
    EntryStats s;
    s.count = v.size();
    if (v.empty()) {
        return s;
    }
    double acc = 0.0;
    for (double x : v) {
        acc += x;
    }
    s.mean = acc / static_cast<double>(v.size());
    double sq = 0.0;
    for (double x : v) {
        sq += (x - s.mean) * (x - s.mean);
    }
    s.variance = sq / static_cast<double>(v.size());
    return s;
}

/// Mean and population variance over ordered off-diagonal entries.
inline EntryStats offdiagonal_stats(const KernelMatrix &k) {
    std::vector<double> v;
    v.reserve(k.size() * k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (i != j) {
                v.push_back(k(i, j));
            }
        }
    }
    return population_stats(v);
}

namespace detail {

template <typename AlphaOf>
NoiseDeviationStats deviation_stats(const KernelMatrix &k, double alpha_report, AlphaOf alpha_of) {
    std::vector<double> gamma, delta;
    for (std::size_t i = 0; i < k.size(); ++i) {
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (i == j) {
                continue;
            }
            if (k.same_coset(i, j)) {
                gamma.push_back(1.0 - k(i, j));
            } else {
                delta.push_back(k(i, j) - alpha_of(i, j));
            }
        }
    }
    if (gamma.size() < 2 || delta.size() < 2) {
        throw std::invalid_argument("extract_deviation_stats: need at least 2 same-coset and 2 cross-coset entries");
    }
    const auto g = population_stats(gamma);
    const auto d = population_stats(delta);
    return {g.mean, g.variance, d.mean, d.variance, alpha_report};
}

}  // namespace detail

/// Deviations against a single reference alpha for every cross-coset pair.
inline NoiseDeviationStats extract_deviation_stats(const KernelMatrix &k, double alpha) {
    return detail::deviation_stats(k, alpha, [alpha](std::size_t, std::size_t) { return alpha; });
}

/// Deviations against each pair's own alpha_{i,j}; the reported alpha is the mean over
/// cross-coset entries.
inline NoiseDeviationStats extract_deviation_stats(const KernelMatrix &k, const Eigen::MatrixXd &alphas) {
    double acc = 0.0;
    std::size_t cnt = 0;
    auto alpha_of = [&](std::size_t i, std::size_t j) {
        return alphas(static_cast<Eigen::Index>(k.labels()[i].coset), static_cast<Eigen::Index>(k.labels()[j].coset));
    };
    for (std::size_t i = 0; i < k.size(); ++i) {
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (i != j && !k.same_coset(i, j)) {
                acc += alpha_of(i, j);
                ++cnt;
            }
        }
    }
    return detail::deviation_stats(k, cnt ? acc / static_cast<double>(cnt) : 0.0, alpha_of);
}

}  // namespace covk
