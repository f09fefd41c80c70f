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
 * Dense statevector and single-qubit gate primitives.
 *
 * Qubit q addresses bit q of the computational-basis index (little endian),
 * so qubit 0 is the least significant bit.
 */
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "covk/common.hpp"

namespace covk {

/// Largest register the dense simulator accepts.
inline constexpr std::size_t kMaxQubits = 24;

/// 2x2 complex matrix stored row-major.
class SingleQubitGate {
  public:
    SingleQubitGate() : m_{Complex{1}, Complex{0}, Complex{0}, Complex{1}} {}

    /// Builds a gate from explicit entries, rejecting non-unitary input.
    static SingleQubitGate from_entries(Complex a00, Complex a01, Complex a10, Complex a11) {
        SingleQubitGate g(a00, a01, a10, a11);
        if (!g.is_unitary(1e-12)) {
            throw std::invalid_argument("SingleQubitGate: entries are not unitary");
        }
        return g;
    }

    Complex operator()(std::size_t row, std::size_t col) const { return m_[2 * row + col]; }

    SingleQubitGate adjoint() const {
        return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
    }

    Complex determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

    bool is_unitary(double tol) const {
        // G^dagger G
        for (std::size_t r = 0; r < 2; ++r) {
            for (std::size_t c = 0; c < 2; ++c) {
                Complex acc = std::conj(m_[r]) * m_[c] + std::conj(m_[2 + r]) * m_[2 + c];
                Complex expect = (r == c) ? Complex{1} : Complex{0};
                if (std::abs(acc - expect) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

    friend SingleQubitGate operator*(const SingleQubitGate &a, const SingleQubitGate &b) {
        return {a.m_[0] * b.m_[0] + a.m_[1] * b.m_[2], a.m_[0] * b.m_[1] + a.m_[1] * b.m_[3],
                a.m_[2] * b.m_[0] + a.m_[3] * b.m_[2], a.m_[2] * b.m_[1] + a.m_[3] * b.m_[3]};
    }

    /// Largest entrywise modulus of the difference.
    friend double max_abs_diff(const SingleQubitGate &a, const SingleQubitGate &b) {
        double d = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            d = std::max(d, std::abs(a.m_[k] - b.m_[k]));
        }
        return d;
    }

  private:
    friend struct GateFactory;
    SingleQubitGate(Complex a00, Complex a01, Complex a10, Complex a11) : m_{a00, a01, a10, a11} {}

    std::array<Complex, 4> m_;
};

/// Trusted constructors for the standard gate set. Every output is unitary by construction.
struct GateFactory {
    static SingleQubitGate raw(Complex a00, Complex a01, Complex a10, Complex a11) {
        return {a00, a01, a10, a11};
    }
};

namespace gates {

inline SingleQubitGate identity() { return {}; }
inline SingleQubitGate pauli_x() { return GateFactory::raw(0, 1, 1, 0); }
inline SingleQubitGate pauli_y() { return GateFactory::raw(0, Complex(0, -1), Complex(0, 1), 0); }
inline SingleQubitGate pauli_z() { return GateFactory::raw(1, 0, 0, -1); }

/// exp(-i theta X / 2)
inline SingleQubitGate rx(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return GateFactory::raw(c, Complex(0, -s), Complex(0, -s), c);
}

/// exp(-i theta Y / 2)
inline SingleQubitGate ry(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return GateFactory::raw(c, -s, s, c);
}

/// exp(-i theta Z / 2)
inline SingleQubitGate rz(double theta) {
    return GateFactory::raw(std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2));
}

}  // namespace gates

/// Normalized amplitude vector of length 2^N. Immutable: every operation returns a new value.
class StateVector {
  public:
    /// |0...0> on `num_qubits` qubits.
    static StateVector zero(std::size_t num_qubits) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw std::invalid_argument("StateVector: num_qubits must be in 1.." +
                                        std::to_string(kMaxQubits));
        }
        std::vector<Complex> amps(std::size_t{1} << num_qubits, Complex{0});
        amps[0] = 1.0;
        return StateVector(num_qubits, std::move(amps));
    }

    /// Validates length (power of two) and unit norm within 1e-10.
    static StateVector from_amplitudes(std::vector<Complex> amps) {
        if (!is_power_of_two(amps.size()) || amps.size() < 2) {
            throw std::invalid_argument("StateVector: length must be a power of two >= 2");
        }
        std::size_t n = 0;
        while ((std::size_t{1} << n) < amps.size()) {
            ++n;
        }
        StateVector s(n, std::move(amps));
        if (std::abs(s.norm() - 1.0) > 1e-10) {
            throw std::invalid_argument("StateVector: amplitudes are not normalized");
        }
        return s;
    }

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[i]; }

    double norm() const {
        double acc = 0.0;
        for (const auto &a : amps_) {
            acc += std::norm(a);
        }
        return std::sqrt(acc);
    }

  private:
    StateVector(std::size_t n, std::vector<Complex> amps) : num_qubits_(n), amps_(std::move(amps)) {}

    friend StateVector apply_single_qubit(StateVector, const SingleQubitGate &, std::size_t);
    friend StateVector apply_cz(StateVector, std::size_t, std::size_t);
    friend StateVector make_state_unchecked(std::size_t, std::vector<Complex>);

    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

/// Builds a state without the normalization check. Only for producers that guarantee norm 1
/// up to rounding (unitary pipelines, explicit renormalization).
inline StateVector make_state_unchecked(std::size_t num_qubits, std::vector<Complex> amps) {
    return StateVector(num_qubits, std::move(amps));
}

/// Applies `gate` to tensor factor `qubit`. Takes the state by value so callers that
/// std::move a temporary reuse its buffer.
inline StateVector apply_single_qubit(StateVector state, const SingleQubitGate &gate, std::size_t qubit) {
    if (qubit >= state.num_qubits_) {
        throw std::out_of_range("apply_single_qubit: qubit " + std::to_string(qubit) +
                                " out of range for " + std::to_string(state.num_qubits_) + " qubits");
    }
    const std::size_t stride = std::size_t{1} << qubit;
    const Complex g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
    auto &a = state.amps_;
    for (std::size_t base = 0; base < a.size(); base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            const Complex v0 = a[k];
            const Complex v1 = a[k + stride];
            a[k] = g00 * v0 + g01 * v1;
            a[k + stride] = g10 * v0 + g11 * v1;
        }
    }
    return state;
}

/// Controlled-Z between q1 and q2: negates amplitudes whose q1 and q2 bits are both set.
inline StateVector apply_cz(StateVector state, std::size_t q1, std::size_t q2) {
    if (q1 >= state.num_qubits_ || q2 >= state.num_qubits_) {
        throw std::out_of_range("apply_cz: qubit index out of range");
    }
    if (q1 == q2) {
        throw std::invalid_argument("apply_cz: control and target must differ");
    }
    const std::size_t mask = (std::size_t{1} << q1) | (std::size_t{1} << q2);
    auto &a = state.amps_;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((i & mask) == mask) {
            a[i] = -a[i];
        }
    }
    return state;
}

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner_product: dimension mismatch");
    }
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    Complex acc{0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

/// |<a|b>|^2
inline double fidelity(const StateVector &a, const StateVector &b) { return std::norm(inner_product(a, b)); }

}  // namespace covk
