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

// Entanglement measures over subsets of factors.
//
// Separability measure (pure states only). For every subset a of factors,
//
//     E_a = (sum_{s in a} S(rho_s) - sum_{b strictly inside a} E_b) * [S(rho_a) <= eps]
//
// with E = 0 on single factors. The entries sum to sum_s S(rho_s).
//
// Physical measure. With P(rho) the convex roof of the summed single-factor
// entropies,
//
//     F_a = max(0, P(rho_a) - sum_{b strictly inside a, |b| >= 2} F_b).
//
// P is bracketed from below by the m-concurrence bound and from above by the
// roof search; the ladder is built from either side or from both.

#pragma once

#include "qment/concurrence.hpp"
#include "qment/convex_roof.hpp"
#include "qment/entropy.hpp"
#include "qment/states.hpp"
#include "qment/tensor_core.hpp"

#include <optional>

namespace qment {

// ---------------------------------------------------------------------------
// Partitions

struct Partition {
  std::vector<SubsystemSet> blocks;  // sorted by least element

  std::size_t k() const { return blocks.size(); }

  void canonicalize() {
    std::sort(blocks.begin(), blocks.end(),
              [](const SubsystemSet& a, const SubsystemSet& b) { return a[0] < b[0]; });
  }

  /// "{1|2|34}".
  std::string label() const {
    std::string s = "{";
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (i) s += '|';
      s += blocks[i].label();
    }
    return s + "}";
  }

  bool operator==(const Partition& o) const { return blocks == o.blocks; }

  /// Parses "{2|4|13}" or "2|4|13" (single-digit factors only when there
  /// are no commas) into a canonical partition.
  static Partition parse(std::string text) {
    text.erase(std::remove_if(text.begin(), text.end(), [](char c) { return c == '{' || c == '}' || c == ' '; }),
               text.end());
    Partition p;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto bar = text.find('|', start);
      const auto part = text.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
      std::vector<std::size_t> idx;
      if (part.find(',') != std::string::npos) {
        std::size_t a = 0;
        while (a <= part.size()) {
          const auto comma = part.find(',', a);
          idx.push_back(std::stoul(part.substr(a, comma == std::string::npos ? std::string::npos : comma - a)));
          if (comma == std::string::npos) break;
          a = comma + 1;
        }
      } else {
        for (char c : part) {
          if (c < '1' || c > '9') throw std::invalid_argument("Partition::parse: bad block '" + part + "'");
          idx.push_back(static_cast<std::size_t>(c - '0'));
        }
      }
      p.blocks.push_back(SubsystemSet::from_one_based(idx));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    p.canonicalize();
    return p;
  }
};

/// Every subset of `n` factors with at least `min_size` members, ordered by
/// size then lexicographically.
inline std::vector<SubsystemSet> all_subsets(std::size_t n, std::size_t min_size = 1) {
  std::vector<SubsystemSet> out;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m)
    if (static_cast<std::size_t>(std::popcount(m)) >= min_size) out.push_back(SubsystemSet::from_mask(m));
  std::sort(out.begin(), out.end());
  return out;
}

inline double reduced_entropy(const ComplexVector& psi, const HilbertShape& shape, const SubsystemSet& a) {
  if (a.size() == shape.factors()) return 0.0;
  // Both sides of a pure bipartition have the same spectrum; reduce onto the
  // smaller one.
  const auto rest = a.complement(shape.factors());
  std::size_t da = 1, dr = 1;
  for (auto k : a) da *= shape.dim(k);
  for (auto k : rest) dr *= shape.dim(k);
  return da <= dr ? marginal_entropy(psi, shape, a.indices()) : marginal_entropy(psi, shape, rest);
}

/// Finest product structure of a pure state: minimal subsets with zero
/// entropy are split off one at a time.
inline Partition detect_gamma_k(const MultiState& psi, double eps = 1e-9) {
  if (!psi.is_pure_vector()) throw NotPureError("detect_gamma_k: pure state required");
  const auto& shape = psi.shape();
  const auto& v = psi.amplitudes();
  std::vector<std::size_t> remaining(shape.factors());
  std::iota(remaining.begin(), remaining.end(), 0);
  Partition p;
  while (!remaining.empty()) {
    const auto r = remaining.size();
    std::optional<SubsystemSet> found;
    for (std::size_t size = 1; size < r && !found; ++size) {
      // Subsets of `remaining` of this size, lexicographic in position.
      std::vector<std::size_t> pos(size);
      std::iota(pos.begin(), pos.end(), 0);
      for (;;) {
        std::vector<std::size_t> idx;
        for (auto q : pos) idx.push_back(remaining[q]);
        const SubsystemSet a(idx);
        if (reduced_entropy(v, shape, a) <= eps) {
          found = a;
          break;
        }
        std::size_t i = size;
        while (i-- > 0 && pos[i] == r - size + i) {
        }
        if (i == static_cast<std::size_t>(-1)) break;
        ++pos[i];
        for (std::size_t j = i + 1; j < size; ++j) pos[j] = pos[j - 1] + 1;
      }
    }
    if (!found) found = SubsystemSet(remaining);
    p.blocks.push_back(*found);
    std::erase_if(remaining, [&](std::size_t k) { return found->contains(k); });
  }
  p.canonicalize();
  return p;
}

// ---------------------------------------------------------------------------
// Reports

enum class Mode { bound, roof, both };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::bound: return "bound";
    case Mode::roof: return "roof";
    case Mode::both: return "both";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "bound") return Mode::bound;
  if (s == "roof") return Mode::roof;
  if (s == "both") return Mode::both;
  throw std::invalid_argument("unknown mode '" + s + "' (expected bound, roof or both)");
}

struct MeasureEntry {
  SubsystemSet subset;
  double value = 0.0;
  ValueKind kind = ValueKind::exact;
  std::optional<double> lower;    // bracket on the entry itself
  std::optional<double> upper;
  std::optional<double> p_lower;  // bounds on P of the reduced state
  std::optional<double> p_upper;
};

struct MeasureReport {
  std::string measure;  // "separability" or "physical"
  std::optional<Mode> mode;
  std::vector<MeasureEntry> entries;  // subsets of size >= 2, size then lexicographic
  double total = 0.0;
  std::optional<Partition> partition;
  std::vector<std::string> notes;

  const MeasureEntry& at(const SubsystemSet& s) const {
    for (const auto& e : entries)
      if (e.subset == s) return e;
    throw std::out_of_range("MeasureReport: no entry for subset " + s.label());
  }
  double value(const SubsystemSet& s) const { return at(s).value; }
};

struct MeasureOptions {
  double eps = 1e-9;
  std::size_t max_factors = 8;
  std::size_t max_dim = 256;
  std::size_t threads = 1;
  BoundOptions bound;
  RoofOptions roof;
};

namespace detail {

inline double snap(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

inline void check_factor_cap(const HilbertShape& shape, const MeasureOptions& opt) {
  if (shape.factors() > opt.max_factors)
    throw std::length_error("measure: " + std::to_string(shape.factors()) + " factors exceed the cap of " +
                            std::to_string(opt.max_factors));
  if (shape.factors() > 20) throw std::length_error("measure: subset enumeration limited to 20 factors");
}

/// Runs f(i) for i in [0, count) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& f) {
  threads = std::min(std::max<std::size_t>(1, threads), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex lock;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Separability measure

inline MeasureReport separability_measure(const MultiState& psi, const MeasureOptions& opt = {}) {
  if (!psi.is_pure_vector())
    throw NotPureError("separability measure is defined for pure states only; got a mixed state");
  const auto& shape = psi.shape();
  detail::check_factor_cap(shape, opt);
  const auto n = shape.factors();
  const auto& v = psi.amplitudes();

  std::vector<double> single(n);
  for (std::size_t s = 0; s < n; ++s) single[s] = marginal_entropy(v, shape, {s});

  MeasureReport report;
  report.measure = "separability";
  const auto subsets = all_subsets(n, 2);
  std::vector<double> entropy(subsets.size());
  detail::parallel_for(subsets.size(), opt.threads,
                       [&](std::size_t i) { entropy[i] = reduced_entropy(v, shape, subsets[i]); });

  std::map<std::uint64_t, double> value;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    const auto& a = subsets[i];
    const auto mask = a.mask();
    if (entropy[i] > opt.eps && entropy[i] < 100.0 * opt.eps) {
      std::ostringstream note;
      note << "entropy of subset {" << a.label() << "} is " << entropy[i]
           << ", within a factor 100 of the zero threshold " << opt.eps << "; the delta test may be unreliable";
      report.notes.push_back(note.str());
    }
    double e = 0.0;
    if (entropy[i] <= opt.eps) {
      for (auto s : a) e += single[s];
      for (const auto& [m, inner] : value)
        if ((m & mask) == m && m != mask) e -= inner;
    }
    e = detail::snap(e);
    value[mask] = e;
    report.entries.push_back(MeasureEntry{a, e, ValueKind::exact, {}, {}, {}, {}});
    report.total += e;
  }
  double expected = 0.0;
  for (double s : single) expected += s;
  if (std::abs(report.total - expected) > 1e-9) {
    std::ostringstream note;
    note << "entries sum to " << report.total << " but the summed marginal entropies are " << expected;
    report.notes.push_back(note.str());
  }
  for (const auto& e : report.entries)
    if (e.value < 0.0) {
      report.notes.push_back("negative entry for subset {" + e.subset.label() +
                             "}: zero-entropy threshold inconsistent with the state");
      break;
    }
  report.partition = detect_gamma_k(psi, opt.eps);
  return report;
}

// ---------------------------------------------------------------------------
// P bounds

struct PLowerBound {
  double value = 0.0;
  std::vector<double> per_factor;  // entropy lower bound per factor
  std::vector<double> squared_sum;  // sum of squared concurrence bounds per factor
};

/// Lower bound on P(rho): per factor s, x_s = sum over index sets I that
/// contain s of C_b(I, s)^2, mapped through -log2(1 - x_s / 2) and clamped to
/// [0, log2 d_s].
inline PLowerBound p_lower_bound(const MultiState& rho, const BoundOptions& opt = {}) {
  const auto& shape = rho.shape();
  PLowerBound out;
  out.per_factor.assign(shape.factors(), 0.0);
  out.squared_sum.assign(shape.factors(), 0.0);
  if (shape.factors() < 2) return out;
  if (shape.total() > opt.max_dim)
    throw std::length_error("p_lower_bound: total dimension exceeds the configured cap");
  const ComplexMatrix m = rho.density_matrix();
  for (std::size_t s = 0; s < shape.factors(); ++s) {
    double x = 0.0;
    for (const auto& set : index_sets_with(shape.factors(), s)) {
      double c2 = 0.0;
      if (rho.is_pure_vector()) {
        c2 = pure_m_concurrence_sq_by_class(rho.amplitudes(), shape, set, s);
      } else {
        const double c = combine_bound_terms(class_bound_terms(m, shape, set, s), opt.rule);
        c2 = c * c;
      }
      x += c2;
    }
    out.squared_sum[s] = x;
    const double cap = std::log2(static_cast<double>(shape.dim(s)));
    const double arg = 1.0 - 0.5 * x;
    const double h = arg > 0.0 ? -std::log2(arg) : cap;
    out.per_factor[s] = std::clamp(h, 0.0, cap);
    out.value += out.per_factor[s];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Physical measure

namespace detail {

struct SubsetP {
  std::optional<double> lower, upper;
  bool pure = false;
};

inline std::uint64_t subset_seed(std::uint64_t seed, std::uint64_t mask) { return splitmix64(seed ^ (mask * 0x100000001b3ull)); }

}  // namespace detail

inline MeasureReport physical_hierarchy(const MultiState& rho, Mode mode, const MeasureOptions& opt = {}) {
  const auto& shape = rho.shape();
  detail::check_factor_cap(shape, opt);
  if (shape.total() > opt.max_dim)
    throw std::length_error("physical measure: total dimension " + std::to_string(shape.total()) +
                            " exceeds the cap of " + std::to_string(opt.max_dim));
  const auto n = shape.factors();
  const auto subsets = all_subsets(n, 2);
  std::vector<detail::SubsetP> p(subsets.size());

  BoundOptions bopt = opt.bound;
  bopt.max_dim = std::max(bopt.max_dim, opt.max_dim);
  detail::parallel_for(subsets.size(), opt.threads, [&](std::size_t i) {
    const auto& a = subsets[i];
    const MultiState reduced = a.size() == n ? rho : partial_trace(rho, a);
    p[i].pure = reduced.is_pure_vector();
    if (mode != Mode::roof) p[i].lower = p_lower_bound(reduced, bopt).value;
    if (mode != Mode::bound) {
      RoofOptions ropt = opt.roof;
      ropt.seed = detail::subset_seed(opt.roof.seed, a.mask());
      ropt.threads = 1;
      p[i].upper = p_upper(reduced, ropt).value;
    }
  });

  MeasureReport report;
  report.measure = "physical";
  report.mode = mode;
  std::map<std::uint64_t, std::size_t> where;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    const auto& a = subsets[i];
    const auto mask = a.mask();
    double sub_value = 0.0, sub_lower = 0.0, sub_upper = 0.0;
    bool tight = true;
    for (const auto& [m, j] : where) {
      if ((m & mask) != m) continue;
      const auto& e = report.entries[j];
      sub_value += e.value;
      if (e.lower) sub_lower += *e.lower;
      if (e.upper) sub_upper += *e.upper;
      if (e.kind != ValueKind::exact) tight = false;
    }
    MeasureEntry e{a, 0.0, ValueKind::exact, {}, {}, p[i].lower, p[i].upper};
    switch (mode) {
      case Mode::bound:
        e.value = std::max(0.0, *p[i].lower - sub_value);
        e.kind = ValueKind::lower_bound;
        break;
      case Mode::roof:
        e.value = std::max(0.0, *p[i].upper - sub_value);
        e.kind = ValueKind::upper_bound;
        break;
      case Mode::both: {
        // Interval arithmetic: the entry decreases in the inner entries and
        // increases in P.
        e.lower = std::max(0.0, *p[i].lower - sub_upper);
        e.upper = std::max(0.0, *p[i].upper - sub_lower);
        e.value = std::max(0.0, *p[i].upper - sub_value);
        const bool own_tight = *p[i].upper - *p[i].lower <= 1e-6;
        e.kind = (tight && own_tight) ? ValueKind::exact : ValueKind::upper_bound;
        break;
      }
    }
    e.value = detail::snap(e.value);
    where[mask] = report.entries.size();
    report.total += e.value;
    report.entries.push_back(std::move(e));
  }
  if (mode == Mode::bound)
    report.notes.push_back("bound mode: ladder built from lower bounds on P; p_lower values are certified, "
                           "ladder differences are estimates");
  if (mode == Mode::roof)
    report.notes.push_back("roof mode: ladder built from upper bounds on P found by local search");
  if (rho.is_pure_vector()) report.partition = detect_gamma_k(rho, opt.eps);
  return report;
}

// ---------------------------------------------------------------------------
// PPT

struct PptResult {
  double min_eigenvalue = 0.0;
  bool is_npt = false;
};

inline PptResult ppt_check(const MultiState& rho, const SubsystemSet& part) {
  const double lo = min_eigenvalue(partial_transpose(rho, part));
  return PptResult{lo, lo < -tol::kPsdClip};
}

// ---------------------------------------------------------------------------
// Smolin-type states

using Vec3 = std::array<double, 3>;

/// Joint eigenvalue sign patterns of (sx^n, sy^n, sz^n) for even n. The
/// product sx^n sy^n equals i^n sz^n, so the admissible patterns flip sign
/// with n mod 4.
inline std::array<Vec3, 4> smolin_sign_vectors(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("smolin: n must be even and >= 2");
  const double f = (n / 2) % 2 == 1 ? 1.0 : -1.0;  // (-1)^(n/2 + 1)
  return {Vec3{-f, -f, -f}, Vec3{f, f, -f}, Vec3{-f, f, f}, Vec3{f, -f, f}};
}

/// max_i c . v_i; the state is PSD iff every 1 + c . v_i >= 0.
inline double smolin_sign_max(std::size_t n, const Vec3& c) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : smolin_sign_vectors(n)) best = std::max(best, c[0] * v[0] + c[1] * v[1] + c[2] * v[2]);
  return best;
}

inline bool smolin_admissible(std::size_t n, const Vec3& c, double slack = 1e-12) {
  for (const auto& v : smolin_sign_vectors(n))
    if (1.0 + c[0] * v[0] + c[1] * v[1] + c[2] * v[2] < -slack) return false;
  return true;
}

struct SmolinResult {
  bool entangled = false;      // sign test
  double sign_max = 0.0;       // max_i c . v_i
  double bound_value = 0.0;    // n-flip concurrence lower bound
  bool bound_detects = false;  // bound_value > 1e-9
};

inline SmolinResult smolin_closed_form(std::size_t n, const Vec3& c, const BoundOptions& opt = {}) {
  const auto state = smolin(n, c);  // throws on odd n or non-PSD c
  SmolinResult r;
  r.sign_max = smolin_sign_max(n, c);
  r.entangled = r.sign_max > 1.0 + 1e-12;
  BoundOptions b = opt;
  b.max_dim = std::max(b.max_dim, state.shape().total());
  r.bound_value = mixed_lower_bound(state, SubsystemSet::all(n), 0, b).value;
  r.bound_detects = r.bound_value > 1e-9;
  return r;
}

}  // namespace qment
