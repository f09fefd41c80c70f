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
 * Elements of SU(2)^N, Pauli strings, chain-graph stabilizer generators and the
 * graph-state preparation circuit.
 */
#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "covk/dense.hpp"
#include "covk/statevector.hpp"

namespace covk {

using EulerTriple = std::array<double, 3>;

/// One 2x2 unitary per qubit. Stored as matrices; Euler angles are only a constructor.
class GroupElement {
  public:
    static GroupElement identity(std::size_t num_qubits) {
        require(num_qubits >= 1, "GroupElement: need at least one qubit");
        return GroupElement(std::vector<SingleQubitGate>(num_qubits, gates::identity()));
    }

    static GroupElement from_factors(std::vector<SingleQubitGate> factors) {
        require(!factors.empty(), "GroupElement: need at least one factor");
        for (const auto &f : factors) {
            require(f.is_unitary(1e-12), "GroupElement: factor is not unitary");
        }
        return GroupElement(std::move(factors));
    }

    std::size_t num_qubits() const { return factors_.size(); }
    const std::vector<SingleQubitGate> &factors() const { return factors_; }
    const SingleQubitGate &factor(std::size_t q) const { return factors_.at(q); }

    GroupElement inverse() const {
        std::vector<SingleQubitGate> inv;
        inv.reserve(factors_.size());
        for (const auto &f : factors_) {
            inv.push_back(f.adjoint());
        }
        return GroupElement(std::move(inv));
    }

    /// Full 2^N x 2^N Kronecker form, for the oracle path.
    DenseOperator to_dense() const { return DenseOperator::tensor(factors_); }

  private:
    explicit GroupElement(std::vector<SingleQubitGate> f) : factors_(std::move(f)) {}
    friend GroupElement compose(const GroupElement &, const GroupElement &);

    std::vector<SingleQubitGate> factors_;
};

/// Per-qubit factor R_x(t1) R_z(t2) R_x(t3).
inline SingleQubitGate euler_xzx(const EulerTriple &t) {
    return gates::rx(t[0]) * gates::rz(t[1]) * gates::rx(t[2]);
}

inline GroupElement from_euler(const std::vector<EulerTriple> &triples) {
    require(!triples.empty(), "from_euler: need at least one triple");
    std::vector<SingleQubitGate> f;
    f.reserve(triples.size());
    for (const auto &t : triples) {
        for (double a : t) {
            require(std::isfinite(a), "from_euler: non-finite angle");
        }
        f.push_back(euler_xzx(t));
    }
    return GroupElement::from_factors(std::move(f));
}

/// Factor-wise product: (g h)_j = g_j h_j, so h acts first.
inline GroupElement compose(const GroupElement &g, const GroupElement &h) {
    require(g.num_qubits() == h.num_qubits(), "compose: size mismatch");
    std::vector<SingleQubitGate> f;
    f.reserve(g.num_qubits());
    for (std::size_t q = 0; q < g.num_qubits(); ++q) {
        f.push_back(g.factors_[q] * h.factors_[q]);
    }
    return GroupElement(std::move(f));
}

inline StateVector apply(const GroupElement &g, StateVector state) {
    require(g.num_qubits() == state.num_qubits(), "apply: size mismatch");
    for (std::size_t q = 0; q < g.num_qubits(); ++q) {
        state = apply_single_qubit(std::move(state), g.factor(q), q);
    }
    return state;
}

enum class Pauli : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

/// Labels indexed by qubit: labels()[q] acts on qubit q.
class PauliString {
  public:
    explicit PauliString(std::vector<Pauli> labels) : labels_(std::move(labels)) {
        require(!labels_.empty(), "PauliString: empty");
        for (auto p : labels_) {
            require(p == Pauli::I || p == Pauli::X || p == Pauli::Y || p == Pauli::Z,
                    "PauliString: invalid label");
        }
    }

    /// Parses e.g. "XZI"; character k is the label of qubit k.
    static PauliString parse(std::string_view s) {
        std::vector<Pauli> labels;
        for (char c : s) {
            switch (c) {
            case 'I': labels.push_back(Pauli::I); break;
            case 'X': labels.push_back(Pauli::X); break;
            case 'Y': labels.push_back(Pauli::Y); break;
            case 'Z': labels.push_back(Pauli::Z); break;
            default: throw std::invalid_argument(std::string("PauliString: invalid label '") + c + "'");
            }
        }
        return PauliString(std::move(labels));
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<Pauli> &labels() const { return labels_; }

    std::string str() const {
        std::string s;
        for (auto p : labels_) {
            s.push_back(static_cast<char>(p));
        }
        return s;
    }

    friend bool operator==(const PauliString &, const PauliString &) = default;

  private:
    std::vector<Pauli> labels_;
};

inline SingleQubitGate pauli_matrix(Pauli p) {
    switch (p) {
    case Pauli::X: return gates::pauli_x();
    case Pauli::Y: return gates::pauli_y();
    case Pauli::Z: return gates::pauli_z();
    default: return gates::identity();
    }
}

/// Embeds a Pauli string as a group element. The Hermitian Paulis have determinant -1;
/// they match the SU(2) elements iX, iY, iZ up to a global phase, which no kernel
/// value can see.
inline GroupElement from_pauli(const PauliString &p) {
    std::vector<SingleQubitGate> f;
    f.reserve(p.size());
    for (auto l : p.labels()) {
        f.push_back(pauli_matrix(l));
    }
    return GroupElement::from_factors(std::move(f));
}

/// Stabilizer generators of the chain graph 0-1-...-(N-1): X on vertex j, Z on its neighbours.
inline std::vector<PauliString> chain_generators(std::size_t num_qubits) {
    require(num_qubits >= 2, "chain_generators: need N >= 2");
    std::vector<PauliString> out;
    out.reserve(num_qubits);
    for (std::size_t j = 0; j < num_qubits; ++j) {
        std::vector<Pauli> labels(num_qubits, Pauli::I);
        labels[j] = Pauli::X;
        if (j > 0) {
            labels[j - 1] = Pauli::Z;
        }
        if (j + 1 < num_qubits) {
            labels[j + 1] = Pauli::Z;
        }
        out.emplace_back(std::move(labels));
    }
    return out;
}

/// R_y(pi/2 - theta_q) on every qubit, then CZ on each edge in list order.
/// All-zero offsets give the ideal graph-state preparation.
class FiducialPreparation {
  public:
    static FiducialPreparation chain(std::size_t num_qubits) {
        return chain_with_offsets(std::vector<double>(num_qubits, 0.0));
    }

    static FiducialPreparation chain_with_offsets(std::vector<double> offsets) {
        const std::size_t n = offsets.size();
        require(n >= 1, "FiducialPreparation: need at least one qubit");
        for (double t : offsets) {
            require(std::isfinite(t), "FiducialPreparation: non-finite offset");
        }
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            edges.emplace_back(j, j + 1);
        }
        return FiducialPreparation(std::move(offsets), std::move(edges));
    }

    std::size_t num_qubits() const { return offsets_.size(); }
    const std::vector<double> &offsets() const { return offsets_; }
    const std::vector<std::pair<std::size_t, std::size_t>> &edges() const { return edges_; }

    bool is_ideal() const {
        for (double t : offsets_) {
            if (t != 0.0) {
                return false;
            }
        }
        return true;
    }

    SingleQubitGate rotation(std::size_t q) const { return gates::ry(kPi / 2 - offsets_.at(q)); }

    /// Dense V (or W), assembled from explicit layer matrices.
    DenseOperator to_dense() const {
        std::vector<SingleQubitGate> layer;
        for (std::size_t q = 0; q < num_qubits(); ++q) {
            layer.push_back(rotation(q));
        }
        Eigen::MatrixXcd m = DenseOperator::tensor(layer).matrix();
        // The CZ layer is diagonal with entries +-1: flip the rows it negates.
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const auto bits = static_cast<std::size_t>(i);
            int parity = 0;
            for (const auto &[a, b] : edges_) {
                parity ^= static_cast<int>((bits >> a) & (bits >> b) & 1);
            }
            if (parity) {
                m.row(i) *= -1.0;
            }
        }
        return DenseOperator(std::move(m));
    }

  private:
    FiducialPreparation(std::vector<double> offsets, std::vector<std::pair<std::size_t, std::size_t>> edges)
        : offsets_(std::move(offsets)), edges_(std::move(edges)) {}

    std::vector<double> offsets_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

inline StateVector prepare_fiducial(const FiducialPreparation &prep) {
    StateVector s = StateVector::zero(prep.num_qubits());
    for (std::size_t q = 0; q < prep.num_qubits(); ++q) {
        s = apply_single_qubit(std::move(s), prep.rotation(q), q);
    }
    for (const auto &[a, b] : prep.edges()) {
        s = apply_cz(std::move(s), a, b);
    }
    return s;
}

}  // namespace covk
