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

// m-flip concurrences.
//
// For a target factor s inside an index set I (|I| >= 2), a choice of level
// pair (k_K < l_K) on every K in I and a computational basis label |i>, the
// flip operator is
//
//     O_C = A |i><i| - B |i><i| A B
//
// where A applies sigma_{k_K l_K} on every factor of I and B only on s. For a
// pure state the squared m-concurrence is the sum of |<psi|O_C|psi*>|^2 over
// all level pairs and labels, and summing it over every I that contains s
// gives 2 (1 - Tr rho_s^2).
//
// O_C is non-zero only if every digit of i on I lies in its level pair. Its
// four basis states {i, Ai, Bi, ABi} form a "flip class"; the four labels of a
// class give the same Hermitised operator O_C + O_C^dagger up to sign, so the
// mixed-state bound works per class.

#pragma once

#include "qment/entropy.hpp"
#include "qment/tensor_core.hpp"

#include <array>
#include <bit>
#include <map>

namespace qment {

/// sigma_{kl} = |k><l| + |l><k| on a d-level factor.
inline ComplexMatrix flip_sigma(std::size_t d, std::size_t k, std::size_t l) {
  if (!(k < l && l < d)) throw std::out_of_range("flip_sigma: need 0 <= k < l < d");
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = 1.0;
  m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = 1.0;
  return m;
}

using LevelPair = std::pair<std::size_t, std::size_t>;

struct FlipOperatorTerm {
  std::size_t target = 0;
  SubsystemSet index_set;
  std::vector<LevelPair> level_pairs;  // aligned with index_set.indices()
  std::vector<std::size_t> basis_label;  // one digit per factor
};

enum class ValueKind { exact, exact_pure, lower_bound, upper_bound };

inline const char* to_string(ValueKind k) {
  switch (k) {
    case ValueKind::exact: return "exact";
    case ValueKind::exact_pure: return "exact-pure";
    case ValueKind::lower_bound: return "lower-bound";
    case ValueKind::upper_bound: return "upper-bound";
  }
  return "?";
}

struct ConcurrenceValue {
  SubsystemSet index_set;
  std::size_t target = 0;
  double value = 0.0;
  ValueKind kind = ValueKind::exact_pure;
};

namespace detail {

inline void check_index_set(const HilbertShape& shape, const SubsystemSet& index_set, std::size_t target) {
  index_set.check_within(shape);
  if (index_set.size() < 2) throw std::invalid_argument("m-concurrence: index set needs at least two factors");
  if (!index_set.contains(target)) throw std::invalid_argument("m-concurrence: target must belong to the index set");
}

/// All level-pair assignments over the index set (odometer order).
inline std::vector<std::vector<LevelPair>> level_pair_choices(const HilbertShape& shape, const SubsystemSet& index_set) {
  std::vector<std::vector<LevelPair>> per_factor;
  for (auto k : index_set) {
    std::vector<LevelPair> pairs;
    for (std::size_t a = 0; a < shape.dim(k); ++a)
      for (std::size_t b = a + 1; b < shape.dim(k); ++b) pairs.emplace_back(a, b);
    per_factor.push_back(std::move(pairs));
  }
  std::vector<std::vector<LevelPair>> out;
  std::vector<std::size_t> pos(per_factor.size(), 0);
  for (;;) {
    std::vector<LevelPair> choice;
    for (std::size_t i = 0; i < pos.size(); ++i) choice.push_back(per_factor[i][pos[i]]);
    out.push_back(std::move(choice));
    std::size_t i = pos.size();
    while (i-- > 0) {
      if (++pos[i] < per_factor[i].size()) break;
      pos[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

/// Flat index of `index` with the digits of the listed factors swapped
/// inside their level pairs.
inline std::size_t flip_digits(const HilbertShape& shape, std::size_t index, const SubsystemSet& index_set,
                               const std::vector<LevelPair>& pairs, std::uint64_t which_mask) {
  std::size_t out = index;
  for (std::size_t j = 0; j < index_set.size(); ++j) {
    const auto k = index_set[j];
    if (!(which_mask >> k & 1u)) continue;
    const auto stride = shape.stride(k);
    const auto digit = (index / stride) % shape.dim(k);
    const auto [lo, hi] = pairs[j];
    const auto other = digit == lo ? hi : lo;
    out = out - digit * stride + other * stride;
  }
  return out;
}

/// Calls f(label_index) for every basis label whose digits on the index set
/// lie in the given pairs and, on the factors listed in `pinned`, equal the
/// lower level.
template <class F>
void for_each_in_pair_label(const HilbertShape& shape, const SubsystemSet& index_set,
                            const std::vector<LevelPair>& pairs, std::uint64_t pinned, F&& f) {
  const auto n = shape.factors();
  std::vector<std::vector<std::size_t>> options(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (index_set.contains(k)) {
      const auto j = static_cast<std::size_t>(
          std::lower_bound(index_set.begin(), index_set.end(), k) - index_set.begin());
      if (pinned >> k & 1u)
        options[k] = {pairs[j].first};
      else
        options[k] = {pairs[j].first, pairs[j].second};
    } else {
      for (std::size_t v = 0; v < shape.dim(k); ++v) options[k].push_back(v);
    }
  }
  std::vector<std::size_t> pos(n, 0);
  std::vector<std::size_t> digits(n);
  for (;;) {
    for (std::size_t k = 0; k < n; ++k) digits[k] = options[k][pos[k]];
    f(shape.index(digits));
    std::size_t k = n;
    while (k-- > 0) {
      if (++pos[k] < options[k].size()) break;
      pos[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
}

}  // namespace detail

/// Every flip operator term with non-zero O_C for the given index set and
/// target.
inline std::vector<FlipOperatorTerm> enumerate_flip_terms(const HilbertShape& shape, const SubsystemSet& index_set,
                                                          std::size_t target) {
  detail::check_index_set(shape, index_set, target);
  std::vector<FlipOperatorTerm> terms;
  for (const auto& pairs : detail::level_pair_choices(shape, index_set)) {
    detail::for_each_in_pair_label(shape, index_set, pairs, 0, [&](std::size_t label) {
      terms.push_back(FlipOperatorTerm{target, index_set, pairs, shape.digits(label)});
    });
  }
  return terms;
}

inline void validate_term(const FlipOperatorTerm& term, const HilbertShape& shape) {
  detail::check_index_set(shape, term.index_set, term.target);
  if (term.level_pairs.size() != term.index_set.size())
    throw std::invalid_argument("flip term: one level pair per index-set factor required");
  if (term.basis_label.size() != shape.factors())
    throw std::invalid_argument("flip term: basis label must have one digit per factor");
  for (std::size_t j = 0; j < term.index_set.size(); ++j) {
    const auto [k, l] = term.level_pairs[j];
    if (!(k < l && l < shape.dim(term.index_set[j])))
      throw std::invalid_argument("flip term: level pair out of order or out of range");
  }
  for (std::size_t k = 0; k < shape.factors(); ++k)
    if (term.basis_label[k] >= shape.dim(k)) throw std::invalid_argument("flip term: basis label digit out of range");
}

/// Dense O_C = A P - B P A B with P = |i><i|, built from the full operators.
inline ComplexMatrix build_flip_operator(const FlipOperatorTerm& term, const HilbertShape& shape) {
  validate_term(term, shape);
  std::vector<ComplexMatrix> a_ops(shape.factors()), b_ops(shape.factors());
  for (std::size_t j = 0; j < term.index_set.size(); ++j) {
    const auto k = term.index_set[j];
    a_ops[k] = flip_sigma(shape.dim(k), term.level_pairs[j].first, term.level_pairs[j].second);
    if (k == term.target) b_ops[k] = a_ops[k];
  }
  const ComplexMatrix a = local_operator(shape, a_ops);
  const ComplexMatrix b = local_operator(shape, b_ops);
  const auto n = static_cast<Eigen::Index>(shape.total());
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  const auto i = static_cast<Eigen::Index>(shape.index(term.basis_label));
  p(i, i) = 1.0;
  return a * p - b * p * a * b;
}

/// <psi| O_C |psi*> from the index action of A and B (no dense matrices).
inline Complex flip_amplitude(const ComplexVector& psi, const HilbertShape& shape, const FlipOperatorTerm& term) {
  const auto i = shape.index(term.basis_label);
  const auto all = term.index_set.mask();
  const auto s = std::uint64_t{1} << term.target;
  for (std::size_t j = 0; j < term.index_set.size(); ++j) {
    const auto d = term.basis_label[term.index_set[j]];
    if (d != term.level_pairs[j].first && d != term.level_pairs[j].second) return 0.0;
  }
  const auto ai = detail::flip_digits(shape, i, term.index_set, term.level_pairs, all);
  const auto bi = detail::flip_digits(shape, i, term.index_set, term.level_pairs, s);
  const auto abi = detail::flip_digits(shape, i, term.index_set, term.level_pairs, all & ~s);
  auto amp = [&](std::size_t x) { return std::conj(psi(static_cast<Eigen::Index>(x))); };
  return amp(ai) * amp(i) - amp(bi) * amp(abi);
}

// ---------------------------------------------------------------------------
// Flip classes

/// The four basis states touched by one Hermitised flip operator:
/// X = |b><a| + |a><b| - |c><e| - |e><c| with b = Aa, c = Ba, e = ABa.
struct FlipClass {
  std::size_t a, b, c, e;

  std::array<std::size_t, 4> support() const { return {a, b, c, e}; }

  /// X restricted to span{a, b, c, e}, in that order.
  static ComplexMatrix compressed() {
    ComplexMatrix x = ComplexMatrix::Zero(4, 4);
    x(1, 0) = x(0, 1) = 1.0;
    x(2, 3) = x(3, 2) = -1.0;
    return x;
  }

  ComplexMatrix hermitized(std::size_t total) const {
    const auto n = static_cast<Eigen::Index>(total);
    ComplexMatrix x = ComplexMatrix::Zero(n, n);
    const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
    const auto ic = static_cast<Eigen::Index>(c), ie = static_cast<Eigen::Index>(e);
    x(ib, ia) += 1.0;
    x(ia, ib) += 1.0;
    x(ic, ie) -= 1.0;
    x(ie, ic) -= 1.0;
    return x;
  }
};

/// One representative per class: the target digit and the digit of the
/// first other factor of the index set are pinned to their lower level.
inline std::vector<FlipClass> flip_classes(const HilbertShape& shape, const SubsystemSet& index_set, std::size_t target) {
  detail::check_index_set(shape, index_set, target);
  const auto all = index_set.mask();
  const auto s = std::uint64_t{1} << target;
  std::size_t first_other = 0;
  for (auto k : index_set)
    if (k != target) {
      first_other = k;
      break;
    }
  const auto pinned = s | (std::uint64_t{1} << first_other);
  std::vector<FlipClass> out;
  for (const auto& pairs : detail::level_pair_choices(shape, index_set)) {
    detail::for_each_in_pair_label(shape, index_set, pairs, pinned, [&](std::size_t a) {
      out.push_back(FlipClass{a, detail::flip_digits(shape, a, index_set, pairs, all),
                              detail::flip_digits(shape, a, index_set, pairs, s),
                              detail::flip_digits(shape, a, index_set, pairs, all & ~s)});
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pure states

/// m-concurrence of a pure state: sqrt of the sum of |<psi|O_C|psi*>|^2 over
/// every level pair and basis label.
inline ConcurrenceValue pure_m_concurrence(const MultiState& psi, const SubsystemSet& index_set, std::size_t target) {
  if (!psi.is_pure_vector()) throw NotPureError("pure_m_concurrence: pure state required");
  const auto& v = psi.amplitudes();
  double sum = 0.0;
  for (const auto& term : enumerate_flip_terms(psi.shape(), index_set, target))
    sum += std::norm(flip_amplitude(v, psi.shape(), term));
  return ConcurrenceValue{index_set, target, std::sqrt(sum), ValueKind::exact_pure};
}

/// Squared m-concurrence summed per flip class: sum_q |<psi|X_q|psi*>|^2.
/// Equal to pure_m_concurrence^2; cheaper because each class is visited once.
inline double pure_m_concurrence_sq_by_class(const ComplexVector& psi, const HilbertShape& shape,
                                             const SubsystemSet& index_set, std::size_t target) {
  double sum = 0.0;
  for (const auto& q : flip_classes(shape, index_set, target)) {
    auto amp = [&](std::size_t x) { return std::conj(psi(static_cast<Eigen::Index>(x))); };
    sum += std::norm(2.0 * (amp(q.a) * amp(q.b) - amp(q.c) * amp(q.e)));
  }
  return sum;
}

/// Every index set of `n` factors that contains `target` and has >= 2 factors,
/// ordered by size then lexicographically.
inline std::vector<SubsystemSet> index_sets_with(std::size_t n, std::size_t target, std::uint64_t within_mask = ~0ull) {
  std::vector<SubsystemSet> out;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    if (!(m >> target & 1u) || (m & ~within_mask) || std::popcount(m) < 2) continue;
    out.push_back(SubsystemSet::from_mask(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct EntropyDecomposition {
  std::size_t target = 0;
  std::map<SubsystemSet, double> squared;  // index set -> C^2
  double sum = 0.0;                       // sum of all C^2
  double expected = 0.0;                  // 2 (1 - Tr rho_s^2)
  double residual = 0.0;
};

/// All squared m-concurrences with target s, checked against
/// sum C^2 = 2 (1 - Tr rho_s^2).
inline EntropyDecomposition entropy_decomposition(const MultiState& psi, std::size_t target, double tolerance = 1e-10) {
  if (!psi.is_pure_vector()) throw NotPureError("entropy_decomposition: pure state required");
  const auto& shape = psi.shape();
  if (target >= shape.factors()) throw std::out_of_range("entropy_decomposition: target outside shape");
  EntropyDecomposition out;
  out.target = target;
  for (const auto& set : index_sets_with(shape.factors(), target)) {
    const double c = pure_m_concurrence(psi, set, target).value;
    out.squared.emplace(set, c * c);
    out.sum += c * c;
  }
  out.expected = 2.0 * (1.0 - marginal_purity(psi.amplitudes(), shape, target));
  out.residual = std::abs(out.sum - out.expected);
  if (out.residual > tolerance)
    throw std::logic_error("entropy_decomposition: sum of squared m-concurrences does not match the marginal purity");
  return out;
}

// ---------------------------------------------------------------------------
// Mixed states

/// (X) rho* (X) with the conjugate taken in the computational basis.
inline ComplexMatrix flipped_density(const ComplexMatrix& rho, const ComplexMatrix& hermitized_flip) {
  return hermitized_flip * rho.conjugate() * hermitized_flip;
}

/// How the per-class terms 2 max(lambda) - sum(lambda) are combined.
enum class BoundRule {
  /// sqrt(sum_q max(0, t_q)^2). Sound; exact on pure states. Default.
  quadrature,
  /// max(0, sum_q t_q): the grand total floored once.
  summed,
  /// sum_q max(0, t_q).
  summed_floored,
};

struct BoundOptions {
  BoundRule rule = BoundRule::quadrature;
  std::size_t max_dim = 256;
};

/// 2 max(lambda) - sum(lambda) for one class, computed on the four-state
/// support of X where rho * rhotilde has all of its non-zero spectrum.
inline double class_bound_term(const ComplexMatrix& rho, const FlipClass& q) {
  const auto sup = q.support();
  ComplexMatrix r(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r(i, j) = rho(static_cast<Eigen::Index>(sup[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(sup[static_cast<std::size_t>(j)]));
  const ComplexMatrix x = FlipClass::compressed();
  const auto lambda = sqrt_eigs_rho_rhotilde(r, flipped_density(r, x));
  double total = 0.0;
  for (double l : lambda) total += l;
  return 2.0 * lambda.front() - total;
}

/// Same term from the full-space matrices; used to cross-check the
/// compressed route.
inline double class_bound_term_dense(const ComplexMatrix& rho, const FlipClass& q) {
  const ComplexMatrix x = q.hermitized(static_cast<std::size_t>(rho.rows()));
  const auto lambda = sqrt_eigs_rho_rhotilde(rho, flipped_density(rho, x));
  double total = 0.0;
  for (double l : lambda) total += l;
  return 2.0 * lambda.front() - total;
}

inline std::vector<double> class_bound_terms(const ComplexMatrix& rho, const HilbertShape& shape,
                                             const SubsystemSet& index_set, std::size_t target) {
  std::vector<double> terms;
  for (const auto& q : flip_classes(shape, index_set, target)) terms.push_back(class_bound_term(rho, q));
  return terms;
}

inline double combine_bound_terms(const std::vector<double>& terms, BoundRule rule) {
  double acc = 0.0;
  switch (rule) {
    case BoundRule::quadrature:
      for (double t : terms) acc += t > 0.0 ? t * t : 0.0;
      return std::sqrt(acc);
    case BoundRule::summed:
      for (double t : terms) acc += t;
      return std::max(0.0, acc);
    case BoundRule::summed_floored:
      for (double t : terms) acc += std::max(0.0, t);
      return acc;
  }
  return 0.0;
}

/// Lower bound on the m-concurrence of a mixed state.
inline ConcurrenceValue mixed_lower_bound(const MultiState& rho, const SubsystemSet& index_set, std::size_t target,
                                         const BoundOptions& options = {}) {
  if (rho.shape().total() > options.max_dim)
    throw std::length_error("mixed_lower_bound: total dimension exceeds the configured cap");
  const ComplexMatrix m = rho.density_matrix();
  const auto terms = class_bound_terms(m, rho.shape(), index_set, target);
  return ConcurrenceValue{index_set, target, combine_bound_terms(terms, options.rule), ValueKind::lower_bound};
}

}  // namespace qment
