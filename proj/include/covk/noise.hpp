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
 * Coherent-noise samplers with operator-norm budgets, and the worst-case
 * envelopes those budgets imply for kernel entries.
 *
 * Budgets (all in operator norm):
 *   fiducial:  W = CZ-chain * (x)_j R_y(pi/2 - theta_j),  |theta_j| <= 2 eps / N
 *              => ||V - W|| = ||I - (x)_j R_y(-theta_j)|| <= eps
 *   selection: D_e = (x)_j R_x R_z R_x,  |theta_{j,i}| <= 2 eps / (sqrt(5) N)
 *              => ||D_e - I|| <= eps
 */
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covk/group.hpp"

namespace covk {

enum class NoiseVariant { None, FiducialError, SelectionError, RepresentationError };

inline std::string to_string(NoiseVariant v) {
    switch (v) {
    case NoiseVariant::FiducialError: return "fiducial";
    case NoiseVariant::SelectionError: return "selection";
    case NoiseVariant::RepresentationError: return "representation";
    default: return "none";
    }
}

inline NoiseVariant parse_noise_variant(std::string_view s) {
    if (s == "none") return NoiseVariant::None;
    if (s == "fiducial") return NoiseVariant::FiducialError;
    if (s == "selection") return NoiseVariant::SelectionError;
    if (s == "representation") return NoiseVariant::RepresentationError;
    throw std::invalid_argument("unknown noise variant '" + std::string(s) + "'");
}

struct NoiseConfig {
    NoiseVariant variant = NoiseVariant::None;
    double epsilon = 0.0;

    void validate() const {
        require(std::isfinite(epsilon) && epsilon >= 0.0, "NoiseConfig: epsilon must be finite and >= 0");
    }
};

struct FiducialOffsets {
    std::vector<double> thetas;

    static double max_angle(std::size_t num_qubits, double epsilon) {
        return 2.0 * epsilon / static_cast<double>(num_qubits);
    }
    FiducialPreparation preparation() const { return FiducialPreparation::chain_with_offsets(thetas); }
};

struct ElementPerturbation {
    std::vector<EulerTriple> triples;

    static double max_angle(std::size_t num_qubits, double epsilon) {
        return 2.0 * epsilon / (std::sqrt(5.0) * static_cast<double>(num_qubits));
    }
    GroupElement element() const { return from_euler(triples); }
};

namespace detail {

/// Uniform on [-b, b]. Always consumes exactly one draw so streams stay aligned for b = 0.
inline double symmetric_uniform(Rng &rng, double b) {
    const double u = std::generate_canonical<double, 53>(rng);
    return b * (2.0 * u - 1.0);
}

}  // namespace detail

inline FiducialOffsets sample_fiducial_offsets(std::size_t num_qubits, double epsilon, Rng &rng) {
    require(num_qubits >= 1, "sample_fiducial_offsets: need N >= 1");
    require(std::isfinite(epsilon) && epsilon >= 0.0, "sample_fiducial_offsets: epsilon must be >= 0");
    const double b = FiducialOffsets::max_angle(num_qubits, epsilon);
    FiducialOffsets out;
    out.thetas.reserve(num_qubits);
    for (std::size_t j = 0; j < num_qubits; ++j) {
        out.thetas.push_back(detail::symmetric_uniform(rng, b));
    }
    return out;
}

inline ElementPerturbation sample_element_perturbation(std::size_t num_qubits, double epsilon, Rng &rng) {
    require(num_qubits >= 1, "sample_element_perturbation: need N >= 1");
    require(std::isfinite(epsilon) && epsilon >= 0.0, "sample_element_perturbation: epsilon must be >= 0");
    const double b = ElementPerturbation::max_angle(num_qubits, epsilon);
    ElementPerturbation out;
    out.triples.reserve(num_qubits);
    for (std::size_t j = 0; j < num_qubits; ++j) {
        EulerTriple t{};
        for (double &a : t) {
            a = detail::symmetric_uniform(rng, b);
        }
        out.triples.push_back(t);
    }
    return out;
}

/// ||(x)_j U_j - I|| from the spectrum: the product's eigenvalues are products of the
/// factors' eigenvalues, and for unitary A each singular value of A - I is
/// sqrt(2 - 2 Re lambda). Enumerates all 2^N eigenvalue combinations.
inline double identity_distance_via_spectrum(const GroupElement &g) {
    require(g.num_qubits() <= 20, "identity_distance_via_spectrum: too many qubits");
    std::vector<std::array<Complex, 2>> eig;
    for (const auto &f : g.factors()) {
        const Complex tr = f(0, 0) + f(1, 1);
        const Complex disc = std::sqrt(tr * tr - 4.0 * f.determinant());
        eig.push_back({(tr + disc) / 2.0, (tr - disc) / 2.0});
    }
    double best = 0.0;
    const std::size_t combos = std::size_t{1} << g.num_qubits();
    for (std::size_t k = 0; k < combos; ++k) {
        Complex lam{1};
        for (std::size_t q = 0; q < eig.size(); ++q) {
            lam *= eig[q][(k >> q) & 1];
        }
        best = std::max(best, std::sqrt(std::max(0.0, 2.0 - 2.0 * lam.real())));
    }
    return best;
}

/// Envelope for a noisy kernel entry given the ideal value (1 within a coset, alpha across).
struct NoiseBounds {
    double same_coset_lower = 1.0;
    double cross_coset_lower = 0.0;
    double cross_coset_upper = 1.0;

    bool admits(bool same_coset, double kappa, double tol = 1e-10) const {
        if (same_coset) {
            return kappa >= same_coset_lower - tol && kappa <= 1.0 + tol;
        }
        return kappa >= cross_coset_lower - tol && kappa <= cross_coset_upper + tol;
    }
};

namespace detail {

inline void check_alpha_eps(double alpha, double epsilon, const char *who) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument(std::string(who) + ": alpha must lie in [0, 1]");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument(std::string(who) + ": epsilon must be finite and >= 0");
    }
}

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace detail

/// Amplitude deviation at most 2 eps + eps^2, squared out:
///   same:  1 - 4e + 2e^2 + 4e^3 + e^4
///   cross: a -/+ 4 sqrt(a) e + 2 (2 -/+ sqrt(a)) e^2 + 4 e^3 + e^4
/// A lower bound whose amplitude form sqrt(a) - 2e - e^2 is negative is replaced by 0.
inline NoiseBounds bounds_fiducial(double alpha, double epsilon) {
    detail::check_alpha_eps(alpha, epsilon, "bounds_fiducial");
    const double e = epsilon, e2 = e * e, e3 = e2 * e, e4 = e2 * e2;
    const double ra = std::sqrt(alpha);
    const double dev = 2 * e + e2;
    NoiseBounds b;
    b.same_coset_lower = (1.0 - dev >= 0.0) ? detail::clamp01(1 - 4 * e + 2 * e2 + 4 * e3 + e4) : 0.0;
    b.cross_coset_lower =
        (ra - dev >= 0.0) ? detail::clamp01(alpha - 4 * ra * e + 2 * (2 - ra) * e2 + 4 * e3 + e4) : 0.0;
    b.cross_coset_upper = detail::clamp01(alpha + 4 * ra * e + 2 * (2 + ra) * e2 + 4 * e3 + e4);
    return b;
}

/// Same inequalities as the fiducial case.
inline NoiseBounds bounds_representation(double alpha, double epsilon) {
    detail::check_alpha_eps(alpha, epsilon, "bounds_representation");
    return bounds_fiducial(alpha, epsilon);
}

///   same:  1 - e^2 + e^4 / 4
///   cross: a -/+ 4 sqrt(a) e + 4 e^2
inline NoiseBounds bounds_selection(double alpha, double epsilon) {
    detail::check_alpha_eps(alpha, epsilon, "bounds_selection");
    const double e = epsilon, e2 = e * e;
    const double ra = std::sqrt(alpha);
    NoiseBounds b;
    b.same_coset_lower = (1.0 - e2 / 2 >= 0.0) ? detail::clamp01(1 - e2 + e2 * e2 / 4) : 0.0;
    b.cross_coset_lower = (ra - 2 * e >= 0.0) ? detail::clamp01(alpha - 4 * ra * e + 4 * e2) : 0.0;
    b.cross_coset_upper = detail::clamp01(alpha + 4 * ra * e + 4 * e2);
    return b;
}

inline NoiseBounds bounds_for(NoiseVariant v, double alpha, double epsilon) {
    switch (v) {
    case NoiseVariant::FiducialError: return bounds_fiducial(alpha, epsilon);
    case NoiseVariant::SelectionError: return bounds_selection(alpha, epsilon);
    case NoiseVariant::RepresentationError: return bounds_representation(alpha, epsilon);
    default: return bounds_selection(alpha, 0.0);
    }
}

}  // namespace covk
