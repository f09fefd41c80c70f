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

#include "covk/kernel.hpp"

#include <sstream>

#include "gtest/gtest.h"
#include "support/oracles.hpp"

using namespace covk;
namespace ct = covk::testing;

namespace {

KernelMatrix ideal_full(const CosetDataset &ds, EvalPath path = EvalPath::GateLevel) {
    return kernel_matrix(make_job(ds, all_indices(ds), NoiseDraws{}, path));
}

NoiseDraws draws_for(NoiseVariant v, double eps, const CosetDataset &ds, std::uint64_t seed) {
    Rng rng(seed);
    return sample_noise_draws({v, eps}, ds.num_qubits, ds.points.size(), rng);
}

/// Kernel entry from index-formula matrices only.
double oracle_entry(const KernelJob &job, std::size_t i, std::size_t j) {
    auto side = [&](std::size_t k, const FiducialPreparation &p) {
        Eigen::MatrixXcd m = ct::element_by_index(job.points[k].element) * ct::chain_prep_by_index(p.offsets());
        if (!job.perturbations.empty()) m = ct::element_by_index(job.perturbations[k]) * m;
        return m;
    };
    const Eigen::MatrixXcd l = side(i, job.left_prep), r = side(j, job.right_prep);
    return std::norm((l.adjoint() * r)(0, 0));
}

}  // namespace

TEST(kernel, diagonal_and_same_coset_ideal) {
    auto ds = generate_seeded(5, 3, 1);
    auto job = make_job(ds, all_indices(ds), NoiseDraws{});
    ASSERT_NEAR(kernel_entry(job, 4, 4), 1.0, 1e-12);
    ASSERT_NEAR(kernel_entry(job, 0, 3), 1.0, 1e-10);
}

TEST(kernel, cross_coset_mean_six_qubits) {
    Rng rng(54);
    const int samples = 1000;
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < samples; ++k) {
        auto ds = covk::generate(6, 2, rng);
        auto job = make_job(ds, all_indices(ds), NoiseDraws{});
        const double v = kernel_entry(job, 0, 6);
        s += v;
        s2 += v * v;
    }
    const double mean = s / samples;
    const double se = std::sqrt((s2 / samples - mean * mean) / samples);
    ASSERT_LT(std::abs(mean - 1.0 / 64), 3 * se);
}

TEST(kernel, two_qubit_counts) {
    auto ds = generate_seeded(2, 2, 3);
    auto k = ideal_full(ds);
    std::size_t ones = 0, cross = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (i == j) continue;
            if (std::abs(k(i, j) - 1) < 1e-9) ++ones;
            if (!k.same_coset(i, j)) ++cross;
        }
    }
    ASSERT_EQ(ones, 4u);
    ASSERT_EQ(cross, 8u);
}

TEST(kernel, block_structure_and_bounds) {
    Rng rng(51);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 7), m = 2 + static_cast<std::size_t>(t % 4);
        auto ds = covk::generate(n, m, rng);
        auto k = ideal_full(ds);
        auto a = alpha_estimate(ds);
        for (std::size_t i = 0; i < k.size(); ++i) {
            for (std::size_t j = 0; j < k.size(); ++j) {
                ASSERT_EQ(k(i, j), k(j, i));
                ASSERT_GE(k(i, j), -1e-10);
                ASSERT_LE(k(i, j), 1 + 1e-10);
                const auto ci = static_cast<Eigen::Index>(k.labels()[i].coset);
                const auto cj = static_cast<Eigen::Index>(k.labels()[j].coset);
                ASSERT_NEAR(k(i, j), a(ci, cj), 1e-10);
            }
        }
    }
}

TEST(kernel, train_restriction) {
    auto ds = generate_seeded(6, 3, 4);
    Rng rng(5);
    auto s = split(ds, rng);
    auto full = ideal_full(ds);
    auto train = kernel_matrix(make_job(ds, s.train, NoiseDraws{}));
    ASSERT_EQ(train.size(), s.train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        ASSERT_EQ(train.labels()[i], (PointLabel{ds.points[s.train[i]].coset_label, ds.points[s.train[i]].subgroup_index}));
        for (std::size_t j = 0; j < train.size(); ++j) {
            ASSERT_NEAR(train(i, j), full(s.train[i], s.train[j]), 1e-14);
        }
    }
}

TEST(kernel, dense_path_matches_gate_path) {
    Rng rng(52);
    const NoiseVariant variants[] = {NoiseVariant::None, NoiseVariant::FiducialError, NoiseVariant::SelectionError,
                                     NoiseVariant::RepresentationError};
    std::uniform_int_distribution<std::size_t> pick(0, 1000);
    for (int c = 0; c < 100; ++c) {
        const std::size_t n = 2 + static_cast<std::size_t>(c % 5);
        auto ds = covk::generate(n, 2 + static_cast<std::size_t>(c % 3), rng);
        auto draws = draws_for(variants[c % 4], 0.3, ds, static_cast<std::uint64_t>(c));
        auto gate = make_job(ds, all_indices(ds), draws, EvalPath::GateLevel);
        auto dense = make_job(ds, all_indices(ds), draws, EvalPath::DenseOracle);
        const std::size_t i = pick(rng) % ds.points.size(), j = pick(rng) % ds.points.size();
        const double g = kernel_entry(gate, i, j);
        ASSERT_NEAR(g, kernel_entry(dense, i, j), 1e-10);
        ASSERT_NEAR(g, oracle_entry(gate, i, j), 1e-10);
    }
}

TEST(kernel, dense_matrix_matches_gate_matrix) {
    auto ds = generate_seeded(4, 3, 9);
    for (auto v : {NoiseVariant::None, NoiseVariant::FiducialError, NoiseVariant::SelectionError}) {
        auto draws = draws_for(v, 0.2, ds, 10);
        auto a = kernel_matrix(make_job(ds, all_indices(ds), draws, EvalPath::GateLevel));
        auto b = kernel_matrix(make_job(ds, all_indices(ds), draws, EvalPath::DenseOracle));
        ASSERT_LT((a.entries() - b.entries()).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(kernel, dense_path_capacity_guard) {
    auto ds = generate_seeded(kMaxDenseQubits + 1, 2, 1);
    ASSERT_THROW(make_job(ds, all_indices(ds), NoiseDraws{}, EvalPath::DenseOracle), CapacityError);
}

TEST(kernel, job_validation) {
    auto ds = generate_seeded(3, 2, 1);
    auto job = make_job(ds, all_indices(ds), NoiseDraws{});
    job.right_prep = FiducialPreparation::chain(4);
    ASSERT_THROW(kernel_matrix(job), std::invalid_argument);
    job.right_prep = job.left_prep;
    job.perturbations.push_back(GroupElement::identity(3));
    ASSERT_THROW(kernel_entry(job, 0, 1), std::invalid_argument);
    job.perturbations.clear();
    ASSERT_THROW(kernel_entry(job, 0, 6), std::invalid_argument);
}

TEST(kernel, selection_diagonal_is_one) {
    auto ds = generate_seeded(6, 3, 11);
    auto k = kernel_matrix(make_job(ds, all_indices(ds), draws_for(NoiseVariant::SelectionError, 0.9, ds, 12)));
    for (std::size_t i = 0; i < k.size(); ++i) {
        ASSERT_NEAR(k(i, i), 1.0, 1e-12);
    }
}

TEST(kernel, fiducial_diagonal_not_forced) {
    auto ds = generate_seeded(6, 2, 13);
    auto k = kernel_matrix(make_job(ds, all_indices(ds), draws_for(NoiseVariant::FiducialError, 0.9, ds, 14)));
    double lo = 1.0;
    for (std::size_t i = 0; i < k.size(); ++i) lo = std::min(lo, k(i, i));
    ASSERT_LT(lo, 1.0 - 1e-6);
}

TEST(kernel, zero_epsilon_reproduces_ideal) {
    auto ds = generate_seeded(7, 3, 15);
    auto ideal = ideal_full(ds);
    for (auto v : {NoiseVariant::FiducialError, NoiseVariant::SelectionError, NoiseVariant::RepresentationError}) {
        auto k = kernel_matrix(make_job(ds, all_indices(ds), draws_for(v, 0.0, ds, 16)));
        ASSERT_LT((k.entries() - ideal.entries()).cwiseAbs().maxCoeff(), 1e-12) << to_string(v);
    }
}

TEST(kernel, alpha_mean_eight_qubits) {
    Rng rng(53);
    const int samples = 200;
    std::vector<double> v;
    for (int k = 0; k < samples; ++k) {
        auto a = alpha_estimate(covk::generate(8, 3, rng));
        ASSERT_EQ(a(1, 1), 1.0);
        for (Eigen::Index i = 0; i < 3; ++i) {
            for (Eigen::Index j = 0; j < 3; ++j) {
                ASSERT_GE(a(i, j), 0.0);
                ASSERT_LE(a(i, j), 1.0 + 1e-12);
                ASSERT_EQ(a(i, j), a(j, i));
            }
        }
        // Mean off-diagonal alpha of this dataset.
        v.push_back((a(0, 1) + a(0, 2) + a(1, 2)) / 3);
    }
    auto [mean, var] = ct::brute_mean_var(v);
    ASSERT_LT(std::abs(mean - 1.0 / 256), 3 * std::sqrt(var / samples));
}

TEST(kernel, heatmap_csv_layout) {
    auto ds = generate_seeded(10, 2, 17);
    auto k = ideal_full(ds);
    std::ostringstream os;
    write_heatmap_csv(k, os);
    std::istringstream is(os.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(is, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 21u);
    ASSERT_EQ(lines[0].substr(0, 16), "label,c0s0,c0s1,");
    for (std::size_t r = 1; r < lines.size(); ++r) {
        ASSERT_EQ(std::count(lines[r].begin(), lines[r].end(), ','), 20);
    }
    ASSERT_EQ(lines[11].substr(0, 5), "c1s0,");
    // 17 significant digits round-trip.
    const auto first = lines[1].substr(lines[1].find(',') + 1, lines[1].find(',', 5) - lines[1].find(',') - 1);
    ASSERT_EQ(std::stod(first), k(0, 0));
}
