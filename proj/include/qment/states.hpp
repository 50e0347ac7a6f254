// Copyright 2026 The qment Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Constructors for the state families used throughout the library, plus
// seeded random states and unitaries.

#pragma once

#include "qment/tensor_core.hpp"

#include <Eigen/QR>

#include <array>
#include <numbers>
#include <random>

namespace qment {

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Single-factor operators

inline ComplexMatrix pauli(int which) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (which) {
    case 0: m(0, 0) = 1; m(1, 1) = 1; break;
    case 1: m(0, 1) = 1; m(1, 0) = 1; break;
    case 2: m(0, 1) = Complex(0, -1); m(1, 0) = Complex(0, 1); break;
    case 3: m(0, 0) = 1; m(1, 1) = -1; break;
    default: throw std::invalid_argument("pauli: index must be 0..3");
  }
  return m;
}

inline ComplexMatrix tensor_power(const ComplexMatrix& m, std::size_t n) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < n; ++i) out = kron(out, m);
  return out;
}

/// Weyl shift-and-phase operator W_{k,l}|s> = w^{k(s-l)} |s-l>, w = exp(2 pi i / d).
inline ComplexMatrix weyl_operator(std::size_t d, std::size_t k, std::size_t l) {
  if (d < 2) throw std::invalid_argument("weyl_operator: d must be >= 2");
  if (k >= d || l >= d) throw std::out_of_range("weyl_operator: indices must lie in [0, d)");
  ComplexMatrix w = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const double two_pi_over_d = 2.0 * std::numbers::pi / static_cast<double>(d);
  for (std::size_t s = 0; s < d; ++s) {
    const std::size_t target = (s + d - l) % d;
    // Phase exponent k(s-l) is taken mod d so the phase is exact for k = 0.
    const auto exponent = static_cast<double>((k * ((s + d - l) % d)) % d);
    w(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(s)) = std::polar(1.0, two_pi_over_d * exponent);
  }
  return w;
}

inline ComplexVector basis_vector(std::size_t dim, std::size_t i) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

// ---------------------------------------------------------------------------
// Pure families

/// (1/sqrt d) sum_s |s>|s>.
inline MultiState bell_phi_plus(std::size_t d = 2) {
  if (d < 2) throw std::invalid_argument("bell_phi_plus: d must be >= 2");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t s = 0; s < d; ++s) v(static_cast<Eigen::Index>(s * d + s)) = 1.0 / std::sqrt(static_cast<double>(d));
  return MultiState::pure_normalized(HilbertShape{d, d}, std::move(v));
}

/// Omega_{k,l} = (W_{k,l} (x) 1) Omega_{0,0}.
inline MultiState generalized_bell(std::size_t d, std::size_t k, std::size_t l) {
  const ComplexMatrix w = weyl_operator(d, k, l);
  const auto id = ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  return MultiState::pure_normalized(HilbertShape{d, d}, kron(w, ComplexMatrix(id)) * bell_phi_plus(d).amplitudes());
}

inline ComplexMatrix generalized_bell_projector(std::size_t d, std::size_t k, std::size_t l) {
  return generalized_bell(d, k, l).density_matrix();
}

inline MultiState ghz(std::size_t n, std::size_t d = 2) {
  if (n < 2) throw std::invalid_argument("ghz: need at least two factors");
  const auto shape = HilbertShape::uniform(n, d);
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(shape.total()));
  for (std::size_t s = 0; s < d; ++s)
    v(static_cast<Eigen::Index>(shape.index(std::vector<std::size_t>(n, s)))) = 1.0 / std::sqrt(static_cast<double>(d));
  return MultiState::pure_normalized(shape, std::move(v));
}

/// Uniform superposition of the n single-excitation qubit basis states.
inline MultiState w_state(std::size_t n) {
  if (n < 2) throw std::invalid_argument("w_state: need at least two factors");
  const auto shape = HilbertShape::uniform(n, 2);
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(shape.total()));
  for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(shape.stride(k))) = 1.0;
  return MultiState::pure_normalized(shape, std::move(v));
}

/// Normalized p|GHZ_3> + (1-p) |phi+> (x) (cos a |0> + sin a |1>).
inline MultiState ghz_phi_mix(double p, double alpha) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ghz_phi_mix: p must lie in [0, 1]");
  ComplexVector single(2);
  single << std::cos(alpha), std::sin(alpha);
  const ComplexVector v = p * ghz(3).amplitudes() + (1.0 - p) * kron(bell_phi_plus(2).amplitudes(), single);
  if (v.norm() < 1e-14) throw std::domain_error("ghz_phi_mix: superposition has zero norm");
  return MultiState::pure_normalized(HilbertShape::uniform(3, 2), v);
}

/// Product of computational basis states, e.g. product_basis({2,2}, {0,1}) = |01>.
inline MultiState product_basis(const HilbertShape& shape, const std::vector<std::size_t>& digits) {
  return MultiState::pure(shape, basis_vector(shape.total(), shape.index(digits)));
}

// ---------------------------------------------------------------------------
// Mixed families

/// cos^2(a) |GHZ_4><GHZ_4| + sin^2(a) |Phi+><Phi+| (x) |Phi+><Phi+|.
inline MultiState ghz_epr_mix(double alpha) {
  const ComplexMatrix g = ghz(4).density_matrix();
  const ComplexMatrix bell = bell_phi_plus(2).density_matrix();
  const double c = std::cos(alpha), s = std::sin(alpha);
  return MultiState::density_trusted(HilbertShape::uniform(4, 2), c * c * g + s * s * kron(bell, bell));
}

/// (1/2^n)(1 + sum_i c_i sigma_i^{(x) n}) for even n. Rejects non-PSD c.
inline MultiState smolin(std::size_t n, const std::array<double, 3>& c) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("smolin: n must be even and >= 2");
  const auto shape = HilbertShape::uniform(n, 2);
  ComplexMatrix rho = ComplexMatrix::Identity(static_cast<Eigen::Index>(shape.total()), static_cast<Eigen::Index>(shape.total()));
  for (int i = 0; i < 3; ++i)
    if (c[static_cast<std::size_t>(i)] != 0.0) rho += c[static_cast<std::size_t>(i)] * tensor_power(pauli(i + 1), n);
  rho /= static_cast<double>(shape.total());
  return MultiState::density(shape, hermitian_part(rho));
}

namespace detail {
inline MultiState line_state(std::size_t d, double alpha, double beta, bool three_bell) {
  if (d < 3) throw std::invalid_argument("line state: d must be >= 3");
  const auto dd = static_cast<Eigen::Index>(d * d);
  ComplexMatrix rho = ComplexMatrix::Identity(dd, dd) * ((1.0 - alpha - beta) / static_cast<double>(d * d));
  rho += alpha * generalized_bell_projector(d, 0, 0);
  if (three_bell)
    rho += 0.5 * beta * (generalized_bell_projector(d, 0, 1) + generalized_bell_projector(d, 0, 2));
  else
    rho += beta * generalized_bell_projector(d, 0, 1);
  return MultiState::density(HilbertShape{d, d}, hermitian_part(rho));
}
}  // namespace detail

/// (1-a-b)/d^2 1 + a P_00 + b P_01.
inline MultiState line_state_2(double alpha, double beta, std::size_t d = 3) {
  return detail::line_state(d, alpha, beta, false);
}

/// (1-a-b)/d^2 1 + a P_00 + (b/2)(P_01 + P_02).
inline MultiState line_state_3(double alpha, double beta, std::size_t d = 3) {
  return detail::line_state(d, alpha, beta, true);
}

/// p rho1 + (1-p) rho2 on the same shape.
inline MultiState mixture(const MultiState& a, const MultiState& b, double p) {
  if (!(a.shape() == b.shape())) throw std::invalid_argument("mixture: shapes differ");
  return MultiState::density_trusted(a.shape(), p * a.density_matrix() + (1.0 - p) * b.density_matrix());
}

// ---------------------------------------------------------------------------
// Random states

inline ComplexVector random_gaussian_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

/// Haar-random pure state (normalized complex Gaussian amplitudes).
inline MultiState random_pure(const HilbertShape& shape, Rng& rng) {
  return MultiState::pure_normalized(shape, random_gaussian_vector(shape.total(), rng));
}

/// Reduction of a random pure state on shape (x) C^rank; rank bounds the
/// numerical rank of the result.
inline MultiState random_density(const HilbertShape& shape, std::size_t rank, Rng& rng) {
  if (rank < 1) throw std::invalid_argument("random_density: rank must be >= 1");
  const ComplexVector v = random_gaussian_vector(shape.total() * rank, rng).normalized();
  ComplexMatrix m(static_cast<Eigen::Index>(shape.total()), static_cast<Eigen::Index>(rank));
  for (std::size_t i = 0; i < shape.total(); ++i)
    for (std::size_t r = 0; r < rank; ++r)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) = v(static_cast<Eigen::Index>(i * rank + r));
  return MultiState::density_trusted(shape, m * m.adjoint());
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal moved into Q.
inline ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix g(n, n);
  const ComplexVector flat = random_gaussian_vector(d * d, rng);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = flat(i * n + j);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Independent Haar unitaries on every factor, as one full-space operator.
inline ComplexMatrix random_local_unitary(const HilbertShape& shape, Rng& rng) {
  std::vector<ComplexMatrix> ops;
  for (auto d : shape.dims()) ops.push_back(random_unitary(d, rng));
  return local_operator(shape, ops);
}

}  // namespace qment
