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

// Dense complex linear algebra over multipartite Hilbert spaces.
//
// Factor 0 is the most significant digit of a computational basis index, so
// |i_1 i_2 ... i_n> maps to the usual Kronecker ordering. Factor indices are
// 0-based in the API; SubsystemSet converts from/to the 1-based notation used
// in all text input and output.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qment {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kNorm = 1e-12;       // unit norm / unit trace
inline constexpr double kHermitian = 1e-12;  // claimed Hermiticity
inline constexpr double kEigInput = 1e-10;   // eigensolver input Hermiticity
inline constexpr double kPsdClip = 1e-10;    // negative eigenvalues treated as noise
}  // namespace tol

/// Raised when a matrix that must be positive semidefinite is not.
class PositivityError : public std::domain_error {
 public:
  PositivityError(const std::string& what, double min_eigenvalue)
      : std::domain_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Raised when an operation that is only defined for pure states gets a
/// mixed one.
class NotPureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// HilbertShape

class HilbertShape {
 public:
  HilbertShape() = default;
  explicit HilbertShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("HilbertShape: need at least one factor");
    total_ = 1;
    for (auto d : dims_) {
      if (d < 2) throw std::invalid_argument("HilbertShape: every factor dimension must be >= 2");
      total_ *= d;
    }
  }
  HilbertShape(std::initializer_list<std::size_t> dims)
      : HilbertShape(std::vector<std::size_t>(dims)) {}

  static HilbertShape uniform(std::size_t n, std::size_t d) {
    return HilbertShape(std::vector<std::size_t>(n, d));
  }

  std::size_t factors() const noexcept { return dims_.size(); }
  std::size_t total() const noexcept { return total_; }
  std::size_t dim(std::size_t k) const { return dims_.at(k); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }

  /// Stride of factor k in a flat basis index.
  std::size_t stride(std::size_t k) const {
    std::size_t s = 1;
    for (std::size_t j = k + 1; j < dims_.size(); ++j) s *= dims_[j];
    return s;
  }

  std::vector<std::size_t> digits(std::size_t index) const {
    std::vector<std::size_t> out(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
      out[k] = index % dims_[k];
      index /= dims_[k];
    }
    return out;
  }

  std::size_t index(const std::vector<std::size_t>& digits) const {
    std::size_t i = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) i = i * dims_[k] + digits[k];
    return i;
  }

  /// Shape of the tensor product of two shapes (factors of b appended).
  HilbertShape concat(const HilbertShape& b) const {
    auto d = dims_;
    d.insert(d.end(), b.dims_.begin(), b.dims_.end());
    return HilbertShape(std::move(d));
  }

  bool operator==(const HilbertShape& o) const { return dims_ == o.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 0;
};

// ---------------------------------------------------------------------------
// SubsystemSet

/// Strictly increasing, non-empty list of 0-based factor indices.
class SubsystemSet {
 public:
  SubsystemSet() = default;
  explicit SubsystemSet(std::vector<std::size_t> indices) : idx_(std::move(indices)) {
    if (idx_.empty()) throw std::invalid_argument("SubsystemSet: must be non-empty");
    std::sort(idx_.begin(), idx_.end());
    if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end())
      throw std::invalid_argument("SubsystemSet: duplicate factor index");
  }
  SubsystemSet(std::initializer_list<std::size_t> indices)
      : SubsystemSet(std::vector<std::size_t>(indices)) {}

  static SubsystemSet from_one_based(const std::vector<std::size_t>& one_based) {
    std::vector<std::size_t> z;
    z.reserve(one_based.size());
    for (auto i : one_based) {
      if (i == 0) throw std::out_of_range("SubsystemSet: 1-based index must be >= 1");
      z.push_back(i - 1);
    }
    return SubsystemSet(std::move(z));
  }

  static SubsystemSet from_mask(std::uint64_t mask) {
    std::vector<std::size_t> v;
    for (std::size_t k = 0; k < 64; ++k)
      if (mask >> k & 1u) v.push_back(k);
    return SubsystemSet(std::move(v));
  }

  static SubsystemSet all(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return SubsystemSet(std::move(v));
  }

  std::size_t size() const noexcept { return idx_.size(); }
  const std::vector<std::size_t>& indices() const noexcept { return idx_; }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }
  std::size_t operator[](std::size_t i) const { return idx_[i]; }
  bool contains(std::size_t k) const { return std::binary_search(idx_.begin(), idx_.end(), k); }

  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (auto k : idx_) m |= std::uint64_t{1} << k;
    return m;
  }

  std::vector<std::size_t> one_based() const {
    std::vector<std::size_t> v(idx_);
    for (auto& i : v) ++i;
    return v;
  }

  /// Paper-style label, e.g. "134" (factors >= 10 are comma separated).
  std::string label() const {
    const bool wide = !idx_.empty() && idx_.back() >= 9;
    std::string s;
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      if (wide && i) s += ',';
      s += std::to_string(idx_[i] + 1);
    }
    return s;
  }

  void check_within(const HilbertShape& shape) const {
    if (!idx_.empty() && idx_.back() >= shape.factors())
      throw std::out_of_range("SubsystemSet: factor index " + std::to_string(idx_.back() + 1) +
                              " outside a " + std::to_string(shape.factors()) + "-factor shape");
  }

  /// Factors of `shape` not in this set.
  std::vector<std::size_t> complement(std::size_t n) const {
    std::vector<std::size_t> c;
    for (std::size_t k = 0; k < n; ++k)
      if (!contains(k)) c.push_back(k);
    return c;
  }

  bool operator==(const SubsystemSet& o) const { return idx_ == o.idx_; }
  bool operator<(const SubsystemSet& o) const {
    if (idx_.size() != o.idx_.size()) return idx_.size() < o.idx_.size();
    return idx_ < o.idx_;
  }

 private:
  std::vector<std::size_t> idx_;
};

// ---------------------------------------------------------------------------
// Basic matrix helpers

inline double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Embeds single-factor operators into the full space: op_k on factor k,
/// identity elsewhere. `ops[k]` empty means identity.
inline ComplexMatrix local_operator(const HilbertShape& shape, const std::vector<ComplexMatrix>& ops) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t k = 0; k < shape.factors(); ++k) {
    const auto d = static_cast<Eigen::Index>(shape.dim(k));
    if (k < ops.size() && ops[k].size() != 0) {
      if (ops[k].rows() != d || ops[k].cols() != d)
        throw std::invalid_argument("local_operator: operator size does not match factor dimension");
      out = kron(out, ops[k]);
    } else {
      out = kron(out, ComplexMatrix::Identity(d, d));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver (cyclic Jacobi)

struct EigenSystem {
  RealVector values;     // descending
  ComplexMatrix vectors;  // column i belongs to values(i)
};

/// Cyclic Jacobi diagonalisation of a Hermitian matrix. Each rotation first
/// removes the phase of the pivot element, then applies the real symmetric
/// Jacobi rotation. Stops when the off-diagonal Frobenius norm drops below
/// 1e-13 of the matrix norm.
inline EigenSystem hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eig: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermiticity_defect(m) > tol::kEigInput * scale)
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");

  const Eigen::Index n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double norm = a.norm();
  const double target = 1e-13 * std::max(norm, std::numeric_limits<double>::min());

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const Complex phase = apq / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on (p, q).
        const Complex gpp = c, gpq = s;
        const Complex gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {  // a <- a G
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // a <- G^dagger a
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {  // v <- v G
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() > a(y, y).real(); });
  EigenSystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]).real();
    out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) { return hermitian_eig(m).values; }

inline double min_eigenvalue(const ComplexMatrix& m) {
  const auto ev = hermitian_eigenvalues(m);
  return ev.size() ? ev(ev.size() - 1) : 0.0;
}

/// Square root of a PSD matrix. Eigenvalues in [-1e-10, 0) are clipped to 0;
/// anything more negative is an error.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const auto es = hermitian_eig(m);
  RealVector root(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double x = es.values(i);
    if (x < -tol::kPsdClip) throw PositivityError("psd_sqrt: matrix is not positive semidefinite", x);
    root(i) = std::sqrt(std::max(0.0, x));
  }
  return es.vectors * root.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

/// Square roots of the eigenvalues of rho * rhotilde, descending. Computed
/// from the Hermitian matrix sqrt(rho) rhotilde sqrt(rho), which has the same
/// spectrum.
inline std::vector<double> sqrt_eigs_rho_rhotilde(const ComplexMatrix& rho, const ComplexMatrix& rhotilde) {
  if (rho.rows() != rhotilde.rows() || rho.cols() != rhotilde.cols())
    throw std::invalid_argument("sqrt_eigs_rho_rhotilde: size mismatch");
  const double tilde_min = min_eigenvalue(rhotilde);
  if (tilde_min < -tol::kPsdClip)
    throw PositivityError("sqrt_eigs_rho_rhotilde: rhotilde is not positive semidefinite", tilde_min);
  const ComplexMatrix root = psd_sqrt(rho);
  const ComplexMatrix sim = hermitian_part(root * rhotilde * root);
  const RealVector ev = hermitian_eigenvalues(sim);
  std::vector<double> out(static_cast<std::size_t>(ev.size()));
  // Eigenvalues at roundoff level relative to the largest are zeros; their
  // square roots would otherwise inflate 1e-17 noise to 1e-9.
  const double floor = ev.size() ? 1e-14 * std::max(0.0, ev.maxCoeff()) : 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol::kPsdClip)
      throw PositivityError("sqrt_eigs_rho_rhotilde: negative eigenvalue of rho*rhotilde", ev(i));
    out[static_cast<std::size_t>(i)] = ev(i) <= floor ? 0.0 : std::sqrt(ev(i));
  }
  return out;  // already descending
}

// ---------------------------------------------------------------------------
// MultiState

class MultiState {
 public:
  /// Pure state; the vector must have unit norm within 1e-12.
  static MultiState pure(HilbertShape shape, ComplexVector amplitudes) {
    if (static_cast<std::size_t>(amplitudes.size()) != shape.total())
      throw std::invalid_argument("MultiState: amplitude count does not match shape");
    if (std::abs(amplitudes.norm() - 1.0) > tol::kNorm)
      throw std::invalid_argument("MultiState: pure state is not normalized");
    return MultiState(std::move(shape), std::move(amplitudes));
  }

  /// Normalizes a non-zero vector first.
  static MultiState pure_normalized(HilbertShape shape, ComplexVector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0)) throw std::invalid_argument("MultiState: zero-norm amplitude vector");
    amplitudes /= n;
    return pure(std::move(shape), std::move(amplitudes));
  }

  /// Density matrix; checked for Hermiticity, unit trace and positivity.
  static MultiState density(HilbertShape shape, ComplexMatrix rho) {
    validate_density(shape, rho);
    return MultiState(std::move(shape), std::move(rho));
  }

  /// Density matrix that is valid by construction (reductions of valid
  /// states, convex mixtures). Only the cheap invariants are checked.
  static MultiState density_trusted(HilbertShape shape, ComplexMatrix rho) {
    if (static_cast<std::size_t>(rho.rows()) != shape.total() || rho.rows() != rho.cols())
      throw std::invalid_argument("MultiState: matrix size does not match shape");
    return MultiState(std::move(shape), hermitian_part(rho));
  }

  const HilbertShape& shape() const noexcept { return shape_; }
  bool is_pure_vector() const noexcept { return std::holds_alternative<ComplexVector>(body_); }

  const ComplexVector& amplitudes() const {
    if (!is_pure_vector()) throw NotPureError("MultiState: state is stored as a density matrix");
    return std::get<ComplexVector>(body_);
  }

  /// Density matrix view; pure vectors are promoted to projectors.
  ComplexMatrix density_matrix() const {
    if (is_pure_vector()) {
      const auto& v = std::get<ComplexVector>(body_);
      return v * v.adjoint();
    }
    return std::get<ComplexMatrix>(body_);
  }

  MultiState as_density() const { return MultiState(shape_, density_matrix()); }

  static void validate_density(const HilbertShape& shape, const ComplexMatrix& rho) {
    if (static_cast<std::size_t>(rho.rows()) != shape.total() || rho.rows() != rho.cols())
      throw std::invalid_argument("MultiState: matrix size does not match shape");
    if (hermiticity_defect(rho) > tol::kHermitian)
      throw std::invalid_argument("MultiState: density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol::kNorm)
      throw std::invalid_argument("MultiState: density matrix trace is not 1");
    const double lo = min_eigenvalue(rho);
    if (lo < -tol::kPsdClip) {
      std::ostringstream msg;
      msg << "MultiState: density matrix is not positive semidefinite (min eigenvalue " << lo << ")";
      throw PositivityError(msg.str(), lo);
    }
  }

 private:
  MultiState(HilbertShape shape, ComplexVector v) : shape_(std::move(shape)), body_(std::move(v)) {}
  MultiState(HilbertShape shape, ComplexMatrix m) : shape_(std::move(shape)), body_(std::move(m)) {}

  HilbertShape shape_;
  std::variant<ComplexVector, ComplexMatrix> body_;
};

// ---------------------------------------------------------------------------
// Reductions

namespace detail {

/// For a split of the factors into (keep, rest), the flat full-space index of
/// every (keep index, rest index) pair.
struct FactorSplit {
  std::size_t keep_dim = 1;
  std::size_t rest_dim = 1;
  std::vector<std::size_t> full;  // full[kk * rest_dim + rr]

  FactorSplit(const HilbertShape& shape, const std::vector<std::size_t>& keep) {
    std::vector<bool> kept(shape.factors(), false);
    for (auto k : keep) kept[k] = true;
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < shape.factors(); ++k)
      if (!kept[k]) rest.push_back(k);
    for (auto k : keep) keep_dim *= shape.dim(k);
    for (auto k : rest) rest_dim *= shape.dim(k);
    full.resize(keep_dim * rest_dim);
    std::vector<std::size_t> digits(shape.factors());
    for (std::size_t kk = 0; kk < keep_dim; ++kk) {
      std::size_t x = kk;
      for (std::size_t i = keep.size(); i-- > 0;) {
        digits[keep[i]] = x % shape.dim(keep[i]);
        x /= shape.dim(keep[i]);
      }
      for (std::size_t rr = 0; rr < rest_dim; ++rr) {
        std::size_t y = rr;
        for (std::size_t i = rest.size(); i-- > 0;) {
          digits[rest[i]] = y % shape.dim(rest[i]);
          y /= shape.dim(rest[i]);
        }
        full[kk * rest_dim + rr] = shape.index(digits);
      }
    }
  }
};

inline HilbertShape sub_shape(const HilbertShape& shape, const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> d;
  for (auto k : keep) d.push_back(shape.dim(k));
  return HilbertShape(std::move(d));
}

}  // namespace detail

/// Reduced density matrix of a pure vector on the kept factors (in their
/// original order).
inline ComplexMatrix reduce_pure(const ComplexVector& psi, const HilbertShape& shape,
                                 const std::vector<std::size_t>& keep) {
  const detail::FactorSplit split(shape, keep);
  ComplexMatrix m(static_cast<Eigen::Index>(split.keep_dim), static_cast<Eigen::Index>(split.rest_dim));
  for (std::size_t kk = 0; kk < split.keep_dim; ++kk)
    for (std::size_t rr = 0; rr < split.rest_dim; ++rr)
      m(static_cast<Eigen::Index>(kk), static_cast<Eigen::Index>(rr)) =
          psi(static_cast<Eigen::Index>(split.full[kk * split.rest_dim + rr]));
  return m * m.adjoint();
}

inline ComplexMatrix reduce_density(const ComplexMatrix& rho, const HilbertShape& shape,
                                    const std::vector<std::size_t>& keep) {
  const detail::FactorSplit split(shape, keep);
  const auto kd = static_cast<Eigen::Index>(split.keep_dim);
  ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
  for (std::size_t a = 0; a < split.keep_dim; ++a)
    for (std::size_t b = 0; b < split.keep_dim; ++b) {
      Complex s = 0.0;
      for (std::size_t r = 0; r < split.rest_dim; ++r)
        s += rho(static_cast<Eigen::Index>(split.full[a * split.rest_dim + r]),
                 static_cast<Eigen::Index>(split.full[b * split.rest_dim + r]));
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
    }
  return out;
}

/// Reduced state on `keep`. Pure inputs are promoted to projectors; the
/// result is always a density body.
inline MultiState partial_trace(const MultiState& rho, const SubsystemSet& keep) {
  keep.check_within(rho.shape());
  ComplexMatrix reduced = rho.is_pure_vector()
                              ? reduce_pure(rho.amplitudes(), rho.shape(), keep.indices())
                              : reduce_density(rho.density_matrix(), rho.shape(), keep.indices());
  return MultiState::density_trusted(detail::sub_shape(rho.shape(), keep.indices()), std::move(reduced));
}

/// Transpose on the factors in `part` only.
inline ComplexMatrix partial_transpose(const MultiState& rho, const SubsystemSet& part) {
  part.check_within(rho.shape());
  const auto& shape = rho.shape();
  const ComplexMatrix m = rho.density_matrix();
  const auto n = static_cast<Eigen::Index>(shape.total());
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto di = shape.digits(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      auto a = di;
      auto b = shape.digits(static_cast<std::size_t>(j));
      for (auto k : part) std::swap(a[k], b[k]);
      out(static_cast<Eigen::Index>(shape.index(a)), static_cast<Eigen::Index>(shape.index(b))) = m(i, j);
    }
  }
  return out;
}

/// Tensor product of two states; factors of `b` are appended after those of `a`.
inline MultiState tensor(const MultiState& a, const MultiState& b) {
  auto shape = a.shape().concat(b.shape());
  if (a.is_pure_vector() && b.is_pure_vector())
    return MultiState::pure_normalized(std::move(shape), kron(a.amplitudes(), b.amplitudes()));
  return MultiState::density_trusted(std::move(shape), kron(a.density_matrix(), b.density_matrix()));
}

/// Applies a unitary (or any operator) U: |psi> -> U|psi>, rho -> U rho U^dagger.
inline MultiState conjugate_by(const MultiState& s, const ComplexMatrix& u) {
  if (s.is_pure_vector()) return MultiState::pure_normalized(s.shape(), u * s.amplitudes());
  return MultiState::density_trusted(s.shape(), u * s.density_matrix() * u.adjoint());
}

}  // namespace qment
