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
 * Full-matrix operators. This is the oracle path: it shares no code with the
 * strided gate kernels in statevector.hpp, so agreement between the two is a
 * meaningful check.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "covk/statevector.hpp"

namespace covk {

/// Square complex matrix whose dimension is a power of two.
class DenseOperator {
  public:
    explicit DenseOperator(Eigen::MatrixXcd m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) {
            throw std::invalid_argument("DenseOperator: matrix must be square");
        }
        if (!is_power_of_two(static_cast<std::size_t>(m_.rows()))) {
            throw std::invalid_argument("DenseOperator: dimension must be a power of two");
        }
    }

    static DenseOperator identity(std::size_t num_qubits) {
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
        return DenseOperator(Eigen::MatrixXcd::Identity(d, d));
    }

    static DenseOperator zero(std::size_t num_qubits) {
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
        return DenseOperator(Eigen::MatrixXcd::Zero(d, d));
    }

    /// Kronecker product with factors[q] acting on qubit q, i.e. factors[N-1] (x) ... (x) factors[0].
    static DenseOperator tensor(std::span<const SingleQubitGate> factors) {
        if (factors.empty()) {
            throw std::invalid_argument("DenseOperator::tensor: no factors");
        }
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
        for (std::size_t q = 0; q < factors.size(); ++q) {
            acc = kron(to_matrix(factors[q]), acc);
        }
        return DenseOperator(std::move(acc));
    }

    /// `gate` on `qubit`, identity elsewhere.
    static DenseOperator single_qubit(const SingleQubitGate &gate, std::size_t qubit, std::size_t num_qubits) {
        if (qubit >= num_qubits) {
            throw std::out_of_range("DenseOperator::single_qubit: qubit out of range");
        }
        std::vector<SingleQubitGate> factors(num_qubits, gates::identity());
        factors[qubit] = gate;
        return tensor(factors);
    }

    static DenseOperator cz(std::size_t q1, std::size_t q2, std::size_t num_qubits) {
        if (q1 >= num_qubits || q2 >= num_qubits) {
            throw std::out_of_range("DenseOperator::cz: qubit out of range");
        }
        if (q1 == q2) {
            throw std::invalid_argument("DenseOperator::cz: qubits must differ");
        }
        // CZ = I - 2 |11><11| on (q1, q2)
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
        Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(2, 2);
        proj(1, 1) = 1.0;
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
        for (std::size_t q = 0; q < num_qubits; ++q) {
            acc = kron((q == q1 || q == q2) ? proj : Eigen::MatrixXcd::Identity(2, 2), acc);
        }
        return DenseOperator(Eigen::MatrixXcd::Identity(d, d) - 2.0 * acc);
    }

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    std::size_t num_qubits() const {
        std::size_t n = 0;
        while ((std::size_t{1} << n) < dim()) {
            ++n;
        }
        return n;
    }
    const Eigen::MatrixXcd &matrix() const { return m_; }
    Complex operator()(std::size_t r, std::size_t c) const {
        return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    DenseOperator adjoint() const { return DenseOperator(m_.adjoint()); }

    bool is_unitary(double tol = 1e-10) const {
        const Eigen::MatrixXcd prod = m_.adjoint() * m_;
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
        return (prod - id).cwiseAbs().maxCoeff() <= tol;
    }

    friend DenseOperator operator-(const DenseOperator &a, const DenseOperator &b) {
        check_same(a, b, "operator-");
        return DenseOperator(a.m_ - b.m_);
    }
    friend DenseOperator operator+(const DenseOperator &a, const DenseOperator &b) {
        check_same(a, b, "operator+");
        return DenseOperator(a.m_ + b.m_);
    }
    friend DenseOperator operator*(Complex s, const DenseOperator &a) { return DenseOperator(s * a.m_); }

    static Eigen::MatrixXcd to_matrix(const SingleQubitGate &g) {
        Eigen::MatrixXcd m(2, 2);
        m << g(0, 0), g(0, 1), g(1, 0), g(1, 1);
        return m;
    }

  private:
    static Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
        Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            }
        }
        return out;
    }

    static void check_same(const DenseOperator &a, const DenseOperator &b, const char *what) {
        if (a.dim() != b.dim()) {
            throw std::invalid_argument(std::string("DenseOperator ") + what + ": dimension mismatch");
        }
    }

    Eigen::MatrixXcd m_;
};

/// Exact matrix-vector product. The operator must map unit vectors to unit vectors
/// (the result is validated as a StateVector).
inline StateVector dense_apply(const DenseOperator &a, const StateVector &state) {
    if (a.dim() != state.dim()) {
        throw std::invalid_argument("dense_apply: dimension mismatch");
    }
    const auto amps = state.amplitudes();
    const Eigen::Map<const Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
    const Eigen::VectorXcd out = a.matrix() * v;
    return StateVector::from_amplitudes(std::vector<Complex>(out.data(), out.data() + out.size()));
}

/// A * B (B acts first).
inline DenseOperator dense_compose(const DenseOperator &a, const DenseOperator &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("dense_compose: dimension mismatch");
    }
    return DenseOperator(a.matrix() * b.matrix());
}

/// Largest singular value, from a full SVD.
inline double operator_norm(const Eigen::MatrixXcd &m) {
    if (!m.allFinite()) {
        throw std::invalid_argument("operator_norm: non-finite entries");
    }
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

inline double operator_norm(const DenseOperator &a) { return operator_norm(a.matrix()); }

}  // namespace covk
