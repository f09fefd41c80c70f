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

#pragma once

#include <Eigen/QR>
#include <vector>

#include "covk/dense.hpp"
#include "covk/statevector.hpp"

namespace covk {

/// Haar-random SU(2) element. A uniform point (a, b, c, d) on the 3-sphere maps to
/// [[a + id, -c + ib], [c + ib, a - id]], which is Haar distributed on SU(2).
inline SingleQubitGate haar_random_su2(Rng &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double q[4];
    double r2 = 0.0;
    do {
        r2 = 0.0;
        for (double &x : q) {
            x = gauss(rng);
            r2 += x * x;
        }
    } while (r2 < 1e-300);
    const double r = std::sqrt(r2);
    const Complex alpha(q[0] / r, q[3] / r);
    const Complex beta(q[2] / r, q[1] / r);
    return GateFactory::raw(alpha, -std::conj(beta), beta, std::conj(alpha));
}

/// Uniformly random unit vector in C^(2^N): a normalized complex Gaussian vector.
inline StateVector haar_random_state(std::size_t num_qubits, Rng &rng) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("haar_random_state: num_qubits out of range");
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    double acc = 0.0;
    do {
        acc = 0.0;
        for (auto &a : amps) {
            a = Complex(gauss(rng), gauss(rng));
            acc += std::norm(a);
        }
    } while (acc < 1e-300);
    const double inv = 1.0 / std::sqrt(acc);
    for (auto &a : amps) {
        a *= inv;
    }
    return make_state_unchecked(num_qubits, std::move(amps));
}

/// Haar-random U(2^N) via QR of a complex Ginibre matrix, with the phases of R's
/// diagonal moved into Q so the distribution is exactly Haar.
inline DenseOperator haar_random_unitary(std::size_t num_qubits, Rng &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    Eigen::MatrixXcd g(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            g(r, c) = Complex(gauss(rng), gauss(rng));
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < d; ++k) {
        const double mag = std::abs(r(k, k));
        const Complex phase = mag > 0 ? r(k, k) / mag : Complex{1};
        q.col(k) *= phase;
    }
    return DenseOperator(std::move(q));
}

}  // namespace covk
