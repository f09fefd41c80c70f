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
 * Labeled coset data: m hidden representatives c_i, the chain generators s_a,
 * and the m*n points c_i s_a in coset-major order.
 */
#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "covk/group.hpp"
#include "covk/haar.hpp"
#include "json.hpp"

namespace covk {

struct DataPoint {
    GroupElement element;
    std::size_t coset_label = 0;
    std::size_t subgroup_index = 0;

    /// "c{i}s{a}", used as heat-map row/column header.
    std::string label() const {
        return "c" + std::to_string(coset_label) + "s" + std::to_string(subgroup_index);
    }
};

struct CosetDataset {
    std::size_t num_qubits = 0;
    std::size_t num_cosets = 0;
    std::size_t subgroup_size = 0;
    std::vector<GroupElement> representatives;
    std::vector<PauliString> generators;
    std::vector<GroupElement> subgroup_elems;
    std::vector<DataPoint> points;
    std::optional<std::uint64_t> seed;

    const DataPoint &point(std::size_t i) const { return points.at(i); }
};

inline CosetDataset generate(std::size_t num_qubits, std::size_t num_cosets, Rng &rng) {
    require(num_qubits >= 2, "generate: need N >= 2");
    require(num_qubits <= kMaxQubits, "generate: N exceeds simulator capacity");
    require(num_cosets >= 2, "generate: need m >= 2");

    CosetDataset ds;
    ds.num_qubits = num_qubits;
    ds.num_cosets = num_cosets;
    ds.generators = chain_generators(num_qubits);
    ds.subgroup_size = ds.generators.size();
    for (const auto &p : ds.generators) {
        ds.subgroup_elems.push_back(from_pauli(p));
    }
    for (std::size_t i = 0; i < num_cosets; ++i) {
        std::vector<SingleQubitGate> f;
        f.reserve(num_qubits);
        for (std::size_t q = 0; q < num_qubits; ++q) {
            f.push_back(haar_random_su2(rng));
        }
        ds.representatives.push_back(GroupElement::from_factors(std::move(f)));
    }
    ds.points.reserve(num_cosets * ds.subgroup_size);
    for (std::size_t i = 0; i < num_cosets; ++i) {
        for (std::size_t a = 0; a < ds.subgroup_size; ++a) {
            ds.points.push_back({compose(ds.representatives[i], ds.subgroup_elems[a]), i, a});
        }
    }
    return ds;
}

inline CosetDataset generate_seeded(std::size_t num_qubits, std::size_t num_cosets, std::uint64_t seed) {
    Rng rng(seed);
    CosetDataset ds = generate(num_qubits, num_cosets, rng);
    ds.seed = seed;
    return ds;
}

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Uniformly random half of the points (floor(m n / 2)) conditioned on every coset
/// appearing in the training half. Conditioning is by rejection.
inline SplitIndices split(const CosetDataset &ds, Rng &rng) {
    const std::size_t total = ds.points.size();
    const std::size_t train_size = total / 2;
    if (ds.num_cosets > train_size) {
        throw std::invalid_argument("split: cannot cover " + std::to_string(ds.num_cosets) +
                                    " cosets with " + std::to_string(train_size) + " training points");
    }
    std::vector<std::size_t> order(total);
    std::vector<char> seen(ds.num_cosets);
    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        std::fill(seen.begin(), seen.end(), 0);
        std::size_t covered = 0;
        for (std::size_t k = 0; k < train_size; ++k) {
            auto &s = seen[ds.points[order[k]].coset_label];
            if (!s) {
                s = 1;
                ++covered;
            }
        }
        if (covered == ds.num_cosets) {
            break;
        }
    }
    SplitIndices out;
    out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_size));
    out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_size), order.end());
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

namespace detail {

inline nlohmann::json gate_to_json(const SingleQubitGate &g) {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            j.push_back({g(r, c).real(), g(r, c).imag()});
        }
    }
    return j;
}

inline SingleQubitGate gate_from_json(const nlohmann::json &j) {
    require(j.is_array() && j.size() == 4, "dataset json: gate must have 4 entries");
    auto e = [&](std::size_t k) { return Complex(j[k].at(0).get<double>(), j[k].at(1).get<double>()); };
    // Decimal round trip can leave ~1e-16 residue, well inside the 1e-12 unitarity tolerance.
    return SingleQubitGate::from_entries(e(0), e(1), e(2), e(3));
}

inline nlohmann::json element_to_json(const GroupElement &g) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto &f : g.factors()) {
        j.push_back(gate_to_json(f));
    }
    return j;
}

inline GroupElement element_from_json(const nlohmann::json &j) {
    std::vector<SingleQubitGate> f;
    for (const auto &g : j) {
        f.push_back(gate_from_json(g));
    }
    return GroupElement::from_factors(std::move(f));
}

}  // namespace detail

/// Factors are written as 2x2 matrices of [re, im] pairs, row-major.
inline nlohmann::json dataset_to_json(const CosetDataset &ds) {
    nlohmann::json j;
    j["num_qubits"] = ds.num_qubits;
    j["num_cosets"] = ds.num_cosets;
    j["subgroup_size"] = ds.subgroup_size;
    j["seed"] = ds.seed ? nlohmann::json(*ds.seed) : nlohmann::json(nullptr);
    j["generators"] = nlohmann::json::array();
    for (const auto &p : ds.generators) {
        j["generators"].push_back(p.str());
    }
    j["representatives"] = nlohmann::json::array();
    for (const auto &c : ds.representatives) {
        j["representatives"].push_back(detail::element_to_json(c));
    }
    j["points"] = nlohmann::json::array();
    for (const auto &p : ds.points) {
        j["points"].push_back({{"coset", p.coset_label},
                               {"index", p.subgroup_index},
                               {"factors", detail::element_to_json(p.element)}});
    }
    return j;
}

inline CosetDataset dataset_from_json(const nlohmann::json &j) {
    CosetDataset ds;
    ds.num_qubits = j.at("num_qubits").get<std::size_t>();
    ds.num_cosets = j.at("num_cosets").get<std::size_t>();
    ds.subgroup_size = j.at("subgroup_size").get<std::size_t>();
    if (!j.at("seed").is_null()) {
        ds.seed = j.at("seed").get<std::uint64_t>();
    }
    for (const auto &g : j.at("generators")) {
        ds.generators.push_back(PauliString::parse(g.get<std::string>()));
        ds.subgroup_elems.push_back(from_pauli(ds.generators.back()));
    }
    for (const auto &c : j.at("representatives")) {
        ds.representatives.push_back(detail::element_from_json(c));
    }
    for (const auto &p : j.at("points")) {
        ds.points.push_back({detail::element_from_json(p.at("factors")), p.at("coset").get<std::size_t>(),
                             p.at("index").get<std::size_t>()});
    }
    require(ds.generators.size() == ds.subgroup_size, "dataset json: generator count mismatch");
    require(ds.representatives.size() == ds.num_cosets, "dataset json: representative count mismatch");
    require(ds.points.size() == ds.num_cosets * ds.subgroup_size, "dataset json: point count mismatch");
    for (const auto &p : ds.points) {
        require(p.element.num_qubits() == ds.num_qubits, "dataset json: point size mismatch");
        require(p.coset_label < ds.num_cosets && p.subgroup_index < ds.subgroup_size,
                "dataset json: label out of range");
    }
    return ds;
}

}  // namespace covk
