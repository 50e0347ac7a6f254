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

#pragma once

#include "qment/tensor_core.hpp"

namespace qment {

/// Tr(rho^2).
inline double purity(const ComplexMatrix& rho) {
  // Tr(rho rho) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
  return rho.cwiseAbs2().sum();
}

inline double purity(const MultiState& s) {
  if (s.is_pure_vector()) return 1.0;
  return purity(s.density_matrix());
}

/// Tr(rho^r) from the spectrum; r need not be an integer.
inline double trace_power(const ComplexMatrix& rho, double r) {
  const RealVector ev = hermitian_eigenvalues(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0.0) s += std::pow(ev(i), r);
  return s;
}

/// Normalised linear entropy d^{r-1}/(d^{r-1}-1) (1 - Tr rho^r), d = dim(rho).
inline double linear_entropy(const ComplexMatrix& rho, int r = 2) {
  if (r < 2) throw std::invalid_argument("linear_entropy: r must be >= 2");
  const double d = static_cast<double>(rho.rows());
  const double dr = std::pow(d, r - 1);
  const double tr = (r == 2) ? purity(rho) : trace_power(rho, r);
  return dr / (dr - 1.0) * (1.0 - tr);
}

/// Renyi entropy 1/(1-alpha) log_q Tr(rho^alpha).
inline double renyi_entropy(const ComplexMatrix& rho, double alpha, double q = 2.0) {
  if (!(alpha > 0.0) || alpha == 1.0) throw std::invalid_argument("renyi_entropy: alpha must be > 0 and != 1");
  if (!(q > 1.0)) throw std::invalid_argument("renyi_entropy: log base must be > 1");
  const double tr = (alpha == 2.0) ? purity(rho) : trace_power(rho, alpha);
  return std::max(0.0, std::log(tr) / std::log(q) / (1.0 - alpha));
}

/// Converts a normalised linear entropy S_alpha into the Renyi entropy with
/// the same alpha for a d-dimensional state.
inline double renyi_from_linear(double s_linear, double alpha, double q, double d) {
  if (!(alpha > 0.0) || alpha == 1.0) throw std::invalid_argument("renyi_from_linear: alpha must be > 0 and != 1");
  const double da = std::pow(d, alpha - 1.0);
  const double arg = 1.0 - (da - 1.0) / da * s_linear;
  if (!(arg > 0.0)) throw std::domain_error("renyi_from_linear: logarithm of a non-positive value");
  return std::log(arg) / std::log(q) / (1.0 - alpha);
}

/// The entropy used by every measure: Renyi alpha = 2, base 2, i.e.
/// -log2 Tr(rho^2).
inline double canonical_entropy(const ComplexMatrix& rho) {
  return std::max(0.0, -std::log2(purity(rho)));
}

inline double canonical_entropy(const MultiState& s) {
  if (s.is_pure_vector()) return 0.0;
  return canonical_entropy(s.density_matrix());
}

/// -Tr rho log2 rho. Diagnostic only; the measures use canonical_entropy.
inline double von_neumann_entropy(const ComplexMatrix& rho) {
  const RealVector ev = hermitian_eigenvalues(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-300) s -= ev(i) * std::log2(ev(i));
  return std::max(0.0, s);
}

/// Purity of the single-factor marginal of a pure vector on factor k.
inline double marginal_purity(const ComplexVector& psi, const HilbertShape& shape, std::size_t k) {
  return purity(reduce_pure(psi, shape, {k}));
}

/// Canonical entropy of the reduction of a pure vector onto `keep`.
inline double marginal_entropy(const ComplexVector& psi, const HilbertShape& shape,
                               const std::vector<std::size_t>& keep) {
  return canonical_entropy(reduce_pure(psi, shape, keep));
}

/// Sum over single factors of the canonical entropy of the marginal: the
/// total entanglement of a pure state.
inline double subsystem_entropy_sum(const MultiState& psi) {
  if (!psi.is_pure_vector()) throw NotPureError("subsystem_entropy_sum: pure state required");
  double total = 0.0;
  for (std::size_t k = 0; k < psi.shape().factors(); ++k)
    total += marginal_entropy(psi.amplitudes(), psi.shape(), {k});
  return total;
}

}  // namespace qment
