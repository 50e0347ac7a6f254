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

// Parameter scans over a state family, emitted as CSV.
//
// A scan is written as a list of tokens:
//
//   ghz_epr_mix alpha=0..pi/2 step=pi/64 phys
//   line2 alpha=-0.1..0.9:0.0025 beta=0 bound ppt
//
// Tokens:
//   family or family(p=v,...)   the state family and fixed parameters
//   name=lo..hi[:step]          a swept parameter (inclusive range)
//   name=value                  a fixed parameter
//   step=value / points=N       default resolution for sweeps without ':step'
//   ppt_part=1,2                factors transposed by the ppt quantity (default 1)
//   entropy bound sep phys ppt  quantities to evaluate
//
// Rows run over the grid in row-major order (the first sweep is the outer
// loop). The column set depends only on the quantities and the measure mode.

#pragma once

#include "qment/measures.hpp"
#include "qment/state_spec.hpp"

#include <cstdio>
#include <ostream>

namespace qment {

enum class Quantity { entropy, bound, sep, phys, ppt };

inline const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::entropy: return "entropy";
    case Quantity::bound: return "bound";
    case Quantity::sep: return "sep";
    case Quantity::phys: return "phys";
    case Quantity::ppt: return "ppt";
  }
  return "?";
}

inline std::optional<Quantity> parse_quantity(const std::string& s) {
  if (s == "entropy") return Quantity::entropy;
  if (s == "bound") return Quantity::bound;
  if (s == "sep" || s == "sep-measure") return Quantity::sep;
  if (s == "phys" || s == "phys-measure") return Quantity::phys;
  if (s == "ppt") return Quantity::ppt;
  return std::nullopt;
}

struct SweepAxis {
  std::string name;
  double lo = 0.0, hi = 0.0;
  std::optional<double> step;
  std::optional<std::size_t> points;

  std::vector<double> values() const {
    std::vector<double> out;
    if (points) {
      if (*points == 1) return {lo};
      for (std::size_t i = 0; i < *points; ++i)
        out.push_back(i + 1 == *points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(*points - 1));
      return out;
    }
    const double h = *step;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / h + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      double v = lo + h * static_cast<double>(i);
      if (std::abs(v - hi) <= 1e-9 * h) v = hi;
      out.push_back(v);
    }
    return out;
  }
};

/// Largest number of factors for which per-size ladder columns exist.
inline constexpr std::size_t kScanMaxFactors = 8;

struct ScanSpec {
  StateSpec base;
  std::vector<SweepAxis> axes;
  std::vector<Quantity> quantities;
  std::vector<std::size_t> ppt_part{1};  // 1-based

  bool wants(Quantity q) const { return std::find(quantities.begin(), quantities.end(), q) != quantities.end(); }

  std::size_t grid_size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values().size();
    return n;
  }
};

namespace detail {

inline double eval_expr(const std::string& text) {
  ExprParser p(text, 1, 1);
  return p.parse();
}

}  // namespace detail

inline ScanSpec parse_scan(const std::vector<std::string>& raw_tokens) {
  ScanSpec spec;
  bool have_family = false;
  std::optional<double> default_step;
  std::optional<std::size_t> default_points;
  auto bad = [](const std::string& tok, const std::string& why) {
    return std::invalid_argument("scan: token '" + tok + "': " + why);
  };
  for (const auto& raw : raw_tokens) {
    const auto tok = detail::lower(detail::trim(raw));
    if (tok.empty()) continue;
    if (auto q = parse_quantity(tok)) {
      if (!spec.wants(*q)) spec.quantities.push_back(*q);
      continue;
    }
    const auto eq = tok.find('=');
    const auto paren = tok.find('(');
    if (!have_family && (eq == std::string::npos || (paren != std::string::npos && paren < eq))) {
      spec.base = parse_state_spec(tok);
      have_family = true;
      continue;
    }
    if (eq == std::string::npos) throw bad(tok, "expected name=value, a quantity, or a family");
    const auto name = tok.substr(0, eq);
    const auto value = tok.substr(eq + 1);
    try {
      if (name == "step") {
        default_step = detail::eval_expr(value);
        continue;
      }
      if (name == "points") {
        const double p = detail::eval_expr(value);
        if (!(p >= 1.0) || p != std::floor(p)) throw bad(tok, "points must be a positive integer");
        default_points = static_cast<std::size_t>(p);
        continue;
      }
      if (name == "ppt_part") {
        spec.ppt_part.clear();
        std::istringstream in(value);
        std::string item;
        while (std::getline(in, item, ',')) {
          const double v = detail::eval_expr(item);
          if (!(v >= 1.0) || v != std::floor(v)) throw bad(tok, "ppt_part lists 1-based factor indices");
          spec.ppt_part.push_back(static_cast<std::size_t>(v));
        }
        continue;
      }
      const auto dots = value.find("..");
      if (dots != std::string::npos) {
        SweepAxis axis;
        axis.name = name;
        auto rest = value.substr(dots + 2);
        const auto colon = rest.find(':');
        axis.lo = detail::eval_expr(value.substr(0, dots));
        axis.hi = detail::eval_expr(rest.substr(0, colon));
        if (colon != std::string::npos) axis.step = detail::eval_expr(rest.substr(colon + 1));
        for (const auto& a : spec.axes)
          if (a.name == name) throw bad(tok, "parameter swept twice");
        spec.axes.push_back(axis);
      } else {
        if (!have_family) throw bad(tok, "fixed parameters must follow the family");
        spec.base.set(name, detail::eval_expr(value));
      }
    } catch (const SpecError& e) {
      throw bad(tok, e.what());
    }
  }
  if (!have_family) throw std::invalid_argument("scan: no state family given");
  if (spec.quantities.empty()) throw std::invalid_argument("scan: no quantity requested (entropy, bound, sep, phys, ppt)");
  const auto& info = family_info(spec.base.family);
  for (auto& a : spec.axes) {
    if (std::find(info.params.begin(), info.params.end(), a.name) == info.params.end())
      throw std::invalid_argument("scan: family " + info.name + " has no parameter '" + a.name + "'");
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) throw std::invalid_argument("scan: range of " + a.name + " is not finite");
    if (a.hi < a.lo) throw std::invalid_argument("scan: range of " + a.name + " is reversed");
    if (!a.step) {
      if (default_points)
        a.points = default_points;
      else if (default_step)
        a.step = default_step;
      else
        throw std::invalid_argument("scan: no step or points for " + a.name);
    }
    if (a.step && !(*a.step > 0.0 && std::isfinite(*a.step)))
      throw std::invalid_argument("scan: step for " + a.name + " must be positive");
    if (a.step && (a.hi - a.lo) / *a.step > 1e7) throw std::invalid_argument("scan: grid for " + a.name + " is too fine");
    spec.base.set(a.name, a.lo);
  }
  check_state_spec(spec.base);
  return spec;
}

inline std::vector<std::string> scan_columns(const ScanSpec& spec, Mode mode) {
  std::vector<std::string> cols;
  for (const auto& a : spec.axes) cols.push_back(a.name);
  cols.push_back("status");
  for (auto q : spec.quantities) {
    switch (q) {
      case Quantity::entropy:
        cols.insert(cols.end(), {"entropy_sum", "purity"});
        break;
      case Quantity::bound:
        cols.insert(cols.end(), {"bound_C", "bound_p_lower"});
        break;
      case Quantity::sep:
        cols.insert(cols.end(), {"sep_total", "sep_k", "sep_partition"});
        break;
      case Quantity::phys:
        for (std::size_t k = 2; k <= kScanMaxFactors; ++k) {
          cols.push_back("phys_E" + std::to_string(k));
          if (mode == Mode::both) {
            cols.push_back("phys_E" + std::to_string(k) + "_lower");
            cols.push_back("phys_E" + std::to_string(k) + "_upper");
          }
        }
        cols.push_back("phys_total");
        break;
      case Quantity::ppt:
        cols.insert(cols.end(), {"ppt_min_eig", "npt"});
        break;
    }
  }
  return cols;
}

struct ScanOptions {
  Mode mode = Mode::bound;
  MeasureOptions measure;
  std::size_t threads = 1;
};

struct ScanTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace detail {

inline std::vector<std::string> scan_row(const ScanSpec& spec, const std::vector<double>& point,
                                         const ScanOptions& opt, std::size_t width) {
  std::vector<std::string> row;
  for (double v : point) row.push_back(format_number(v));
  StateSpec s = spec.base;
  for (std::size_t i = 0; i < spec.axes.size(); ++i) s.set(spec.axes[i].name, point[i]);
  std::optional<MultiState> state;
  try {
    state = build_state(s);
  } catch (const PositivityError&) {
  } catch (const SpecError&) {
  }
  if (!state) {
    row.push_back("invalid");
    row.resize(width);
    return row;
  }
  const bool pure = state->is_pure_vector();
  row.push_back(!pure && spec.wants(Quantity::sep) ? "not-pure" : "ok");
  const auto& shape = state->shape();
  const auto n = shape.factors();
  for (auto q : spec.quantities) {
    switch (q) {
      case Quantity::entropy: {
        double total = 0.0;
        for (std::size_t k = 0; k < n; ++k) total += canonical_entropy(partial_trace(*state, SubsystemSet{k}).density_matrix());
        row.push_back(format_number(total));
        row.push_back(format_number(purity(*state)));
        break;
      }
      case Quantity::bound: {
        BoundOptions b = opt.measure.bound;
        b.max_dim = opt.measure.max_dim;
        const double c = n >= 2 ? mixed_lower_bound(state->as_density(), SubsystemSet::all(n), 0, b).value : 0.0;
        row.push_back(format_number(c));
        row.push_back(format_number(p_lower_bound(*state, b).value));
        break;
      }
      case Quantity::sep: {
        if (pure) {
          const auto rep = separability_measure(*state, opt.measure);
          row.push_back(format_number(rep.total));
          row.push_back(std::to_string(rep.partition->k()));
          row.push_back(rep.partition->label());
        } else {
          row.insert(row.end(), {"", "", ""});
        }
        break;
      }
      case Quantity::phys: {
        const auto rep = physical_hierarchy(*state, opt.mode, opt.measure);
        std::vector<double> by_size(kScanMaxFactors + 1, 0.0), lo(kScanMaxFactors + 1, 0.0), hi(kScanMaxFactors + 1, 0.0);
        for (const auto& e : rep.entries) {
          by_size[e.subset.size()] += e.value;
          if (e.lower) lo[e.subset.size()] += *e.lower;
          if (e.upper) hi[e.subset.size()] += *e.upper;
        }
        for (std::size_t k = 2; k <= kScanMaxFactors; ++k) {
          const bool present = k <= n;
          row.push_back(present ? format_number(by_size[k]) : "");
          if (opt.mode == Mode::both) {
            row.push_back(present ? format_number(lo[k]) : "");
            row.push_back(present ? format_number(hi[k]) : "");
          }
        }
        row.push_back(format_number(rep.total));
        break;
      }
      case Quantity::ppt: {
        const auto r = ppt_check(*state, SubsystemSet::from_one_based(spec.ppt_part));
        row.push_back(format_number(r.min_eigenvalue));
        row.push_back(r.is_npt ? "1" : "0");
        break;
      }
    }
  }
  return row;
}

}  // namespace detail

inline ScanTable run_scan(const ScanSpec& spec, const ScanOptions& opt = {}) {
  ScanTable table;
  table.columns = scan_columns(spec, opt.mode);
  std::vector<std::vector<double>> axes;
  for (const auto& a : spec.axes) axes.push_back(a.values());
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> pos(axes.size(), 0);
  for (;;) {
    std::vector<double> p;
    for (std::size_t i = 0; i < axes.size(); ++i) p.push_back(axes[i][pos[i]]);
    points.push_back(std::move(p));
    std::size_t i = axes.size();
    while (i-- > 0) {
      if (++pos[i] < axes[i].size()) break;
      pos[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  ScanOptions inner = opt;
  inner.measure.threads = 1;
  table.rows.resize(points.size());
  detail::parallel_for(points.size(), opt.threads, [&](std::size_t i) {
    table.rows[i] = detail::scan_row(spec, points[i], inner, table.columns.size());
  });
  return table;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv(std::ostream& out, const ScanTable& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << "\n";
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
}

}  // namespace qment
