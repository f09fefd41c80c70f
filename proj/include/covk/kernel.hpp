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
 * Covariant kernel evaluation.
 *
 *   kappa(x, x') = |<0| V_l^dag D_x^dag D_e^dag  D_e' D_x' V_r |0>|^2
 *
 * Ideal: V_l = V_r = V and no D_e. Fiducial error: V_l = W_1, V_r = W_2 for the
 * whole matrix. Selection / representation error: one D_e per point.
 */
#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "covk/dataset.hpp"
#include "covk/noise.hpp"

namespace covk {

enum class EvalPath { GateLevel, DenseOracle };

/// Largest register the dense-oracle path will build full matrices for.
inline constexpr std::size_t kMaxDenseQubits = 8;

struct PointLabel {
    std::size_t coset = 0;
    std::size_t index = 0;

    std::string str() const { return "c" + std::to_string(coset) + "s" + std::to_string(index); }
    friend bool operator==(const PointLabel &, const PointLabel &) = default;
};

/// Everything needed to evaluate a kernel matrix. All randomness is already drawn.
struct KernelJob {
    std::vector<DataPoint> points;
    FiducialPreparation left_prep = FiducialPreparation::chain(2);
    FiducialPreparation right_prep = FiducialPreparation::chain(2);
    /// Empty, or one perturbation per point (applied after the point's element).
    std::vector<GroupElement> perturbations;
    EvalPath path = EvalPath::GateLevel;

    std::size_t num_qubits() const { return left_prep.num_qubits(); }

    void validate() const {
        const std::size_t n = left_prep.num_qubits();
        require(right_prep.num_qubits() == n, "KernelJob: fiducial preparations differ in size");
        for (const auto &p : points) {
            require(p.element.num_qubits() == n, "KernelJob: point size mismatch");
        }
        require(perturbations.empty() || perturbations.size() == points.size(),
                "KernelJob: need exactly one perturbation per point");
        for (const auto &e : perturbations) {
            require(e.num_qubits() == n, "KernelJob: perturbation size mismatch");
        }
        if (path == EvalPath::DenseOracle && n > kMaxDenseQubits) {
            throw CapacityError("KernelJob: dense oracle path limited to " + std::to_string(kMaxDenseQubits) +
                                " qubits");
        }
    }
};

/// Noise realisation for one trial, indexed like the dataset's points.
struct NoiseDraws {
    NoiseConfig config;
    std::optional<std::pair<FiducialOffsets, FiducialOffsets>> fiducial;
    std::vector<ElementPerturbation> per_point;
};

/// Fiducial error: one (W_1, W_2) pair per trial. Selection and representation error:
/// one D_e per data point, reused by every entry touching that point.
inline NoiseDraws sample_noise_draws(const NoiseConfig &cfg, std::size_t num_qubits, std::size_t num_points,
                                     Rng &rng) {
    cfg.validate();
    NoiseDraws d;
    d.config = cfg;
    switch (cfg.variant) {
    case NoiseVariant::FiducialError: {
        auto w1 = sample_fiducial_offsets(num_qubits, cfg.epsilon, rng);
        auto w2 = sample_fiducial_offsets(num_qubits, cfg.epsilon, rng);
        d.fiducial = std::make_pair(std::move(w1), std::move(w2));
        break;
    }
    case NoiseVariant::SelectionError:
    case NoiseVariant::RepresentationError:
        for (std::size_t i = 0; i < num_points; ++i) {
            d.per_point.push_back(sample_element_perturbation(num_qubits, cfg.epsilon, rng));
        }
        break;
    default: break;
    }
    return d;
}

/// Job over the dataset points listed in `indices`.
inline KernelJob make_job(const CosetDataset &ds, const std::vector<std::size_t> &indices,
                          const NoiseDraws &draws, EvalPath path = EvalPath::GateLevel) {
    KernelJob job;
    job.path = path;
    if (draws.fiducial) {
        job.left_prep = draws.fiducial->first.preparation();
        job.right_prep = draws.fiducial->second.preparation();
    } else {
        job.left_prep = FiducialPreparation::chain(ds.num_qubits);
        job.right_prep = job.left_prep;
    }
    const bool perturbed = !draws.per_point.empty();
    if (perturbed) {
        require(draws.per_point.size() == ds.points.size(), "make_job: perturbation count mismatch");
    }
    for (auto i : indices) {
        job.points.push_back(ds.point(i));
        if (perturbed) {
            job.perturbations.push_back(draws.per_point[i].element());
        }
    }
    job.validate();
    return job;
}

inline std::vector<std::size_t> all_indices(const CosetDataset &ds) {
    std::vector<std::size_t> idx(ds.points.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = i;
    }
    return idx;
}

/// Symmetric matrix of kernel values with coset labels per row.
class KernelMatrix {
  public:
    KernelMatrix(Eigen::MatrixXd entries, std::vector<PointLabel> labels)
        : entries_(std::move(entries)), labels_(std::move(labels)) {
        require(entries_.rows() == entries_.cols(), "KernelMatrix: not square");
        require(static_cast<std::size_t>(entries_.rows()) == labels_.size(), "KernelMatrix: label count mismatch");
    }

    std::size_t size() const { return labels_.size(); }
    double operator()(std::size_t i, std::size_t j) const {
        return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const Eigen::MatrixXd &entries() const { return entries_; }
    const std::vector<PointLabel> &labels() const { return labels_; }
    bool same_coset(std::size_t i, std::size_t j) const { return labels_[i].coset == labels_[j].coset; }

  private:
    Eigen::MatrixXd entries_;
    std::vector<PointLabel> labels_;
};

namespace detail {

inline StateVector feature_state(const KernelJob &job, std::size_t i, const StateVector &fiducial) {
    StateVector s = apply(job.points[i].element, fiducial);
    if (!job.perturbations.empty()) {
        s = apply(job.perturbations[i], std::move(s));
    }
    return s;
}

/// D_e D_x V as a full matrix.
inline DenseOperator feature_operator(const KernelJob &job, std::size_t i, const DenseOperator &prep) {
    DenseOperator a = dense_compose(job.points[i].element.to_dense(), prep);
    if (!job.perturbations.empty()) {
        a = dense_compose(job.perturbations[i].to_dense(), a);
    }
    return a;
}

inline double dense_entry(const DenseOperator &left, const DenseOperator &right) {
    const DenseOperator m = dense_compose(left.adjoint(), right);
    return std::norm(m(0, 0));
}

}  // namespace detail

/// Single entry kappa(points[i], points[j]) of the job.
inline double kernel_entry(const KernelJob &job, std::size_t i, std::size_t j) {
    job.validate();
    require(i < job.points.size() && j < job.points.size(), "kernel_entry: index out of range");
    if (job.path == EvalPath::DenseOracle) {
        const DenseOperator vl = job.left_prep.to_dense();
        const DenseOperator vr = job.right_prep.to_dense();
        return detail::dense_entry(detail::feature_operator(job, i, vl), detail::feature_operator(job, j, vr));
    }
    const StateVector psi_l = prepare_fiducial(job.left_prep);
    const StateVector psi_r = prepare_fiducial(job.right_prep);
    return fidelity(detail::feature_state(job, i, psi_l), detail::feature_state(job, j, psi_r));
}

/// All entries; the upper triangle is evaluated and mirrored.
inline KernelMatrix kernel_matrix(const KernelJob &job) {
    job.validate();
    const std::size_t n = job.points.size();
    Eigen::MatrixXd k(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    auto set = [&](std::size_t i, std::size_t j, double v) {
        k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    };
    if (job.path == EvalPath::DenseOracle) {
        const DenseOperator vl = job.left_prep.to_dense();
        const DenseOperator vr = job.right_prep.to_dense();
        std::vector<DenseOperator> left, right;
        for (std::size_t i = 0; i < n; ++i) {
            left.push_back(detail::feature_operator(job, i, vl));
            right.push_back(detail::feature_operator(job, i, vr));
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                set(i, j, detail::dense_entry(left[i], right[j]));
            }
        }
    } else {
        const StateVector psi_l = prepare_fiducial(job.left_prep);
        const bool same_prep = job.left_prep.offsets() == job.right_prep.offsets();
        const StateVector psi_r = same_prep ? psi_l : prepare_fiducial(job.right_prep);
        std::vector<StateVector> left, right;
        left.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            left.push_back(detail::feature_state(job, i, psi_l));
        }
        if (!same_prep) {
            for (std::size_t i = 0; i < n; ++i) {
                right.push_back(detail::feature_state(job, i, psi_r));
            }
        }
        const auto &rhs = same_prep ? left : right;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                set(i, j, fidelity(left[i], rhs[j]));
            }
        }
    }
    std::vector<PointLabel> labels;
    labels.reserve(n);
    for (const auto &p : job.points) {
        labels.push_back({p.coset_label, p.subgroup_index});
    }
    return KernelMatrix(std::move(k), std::move(labels));
}

/// alpha_{i,j} = |<psi| D_{c_i}^dag D_{c_j} |psi>|^2 with unit diagonal.
inline Eigen::MatrixXd alpha_estimate(const CosetDataset &ds, const StateVector &fiducial) {
    require(fiducial.num_qubits() == ds.num_qubits, "alpha_estimate: fiducial size mismatch");
    const std::size_t m = ds.num_cosets;
    std::vector<StateVector> phi;
    phi.reserve(m);
    for (const auto &c : ds.representatives) {
        phi.push_back(apply(c, fiducial));
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double v = fidelity(phi[i], phi[j]);
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return a;
}

inline Eigen::MatrixXd alpha_estimate(const CosetDataset &ds) {
    return alpha_estimate(ds, prepare_fiducial(FiducialPreparation::chain(ds.num_qubits)));
}

/// Heat-map CSV: header row and first column carry "c{i}s{a}" labels; values are
/// written with 17 significant digits.
inline void write_heatmap_csv(const KernelMatrix &k, std::ostream &out) {
    out << "label";
    for (const auto &l : k.labels()) {
        out << ',' << l.str();
    }
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < k.size(); ++i) {
        out << k.labels()[i].str();
        for (std::size_t j = 0; j < k.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.16e", k(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
}

}  // namespace covk
