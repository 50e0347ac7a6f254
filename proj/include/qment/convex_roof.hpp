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

// Upper bounds on convex roofs
//
//     f_roof(rho) = inf_{p_i, psi_i} sum_i p_i f(psi_i)
//
// by local search over ensembles. An ensemble of size m is stored as a D x m
// matrix W whose columns are sqrt(p_i) psi_i, so W W^dagger = rho. Every other
// size-m ensemble of rho is W U for some m x m unitary U; the search applies
// random two-column rotations to W and keeps those that lower the cost.

#pragma once

#include "qment/entropy.hpp"
#include "qment/states.hpp"
#include "qment/tensor_core.hpp"

#include <atomic>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace qment {

struct Decomposition {
  HilbertShape shape;
  std::vector<double> weights;
  std::vector<ComplexVector> states;  // unit vectors

  std::size_t size() const { return weights.size(); }

  ComplexMatrix reconstruct() const {
    const auto n = static_cast<Eigen::Index>(shape.total());
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < size(); ++i) rho += weights[i] * states[i] * states[i].adjoint();
    return rho;
  }

  double residual(const ComplexMatrix& rho) const { return (reconstruct() - rho).norm(); }
};

struct RoofResult {
  double value = 0.0;
  Decomposition decomposition;
  std::size_t iterations = 0;  // functional evaluations of the winning restart
  bool converged = false;
  std::size_t restart = 0;      // index of the winning restart
  std::vector<double> history;  // best value after each accepted step
};

struct RoofOptions {
  std::size_t ensemble_size = 0;  // 0: rank + 2
  std::size_t restarts = 8;
  std::size_t evaluations = 2000;  // per restart
  std::uint64_t seed = 0x5eed;
  std::size_t threads = 1;
  double initial_step = 0.6;
  double min_step = 1e-7;
  double zero_cost = 1e-14;
  double reconstruction_tolerance = 1e-8;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::size_t numerical_rank(const RealVector& eigenvalues) {
  const double scale = std::max(1.0, eigenvalues.size() ? eigenvalues(0) : 0.0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues(i) > 1e-13 * scale) ++r;
  return r;
}

/// Columns sqrt(lambda_j) e_j of the eigen-ensemble, zero-padded to m.
inline ComplexMatrix seed_columns(const ComplexMatrix& rho, std::size_t m, std::size_t* rank_out = nullptr) {
  const auto es = hermitian_eig(rho);
  const auto rank = numerical_rank(es.values);
  if (m < rank) throw std::invalid_argument("seed_decomposition: ensemble size is smaller than the rank");
  ComplexMatrix w = ComplexMatrix::Zero(rho.rows(), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < rank; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    w.col(jj) = std::sqrt(es.values(jj)) * es.vectors.col(jj);
  }
  if (rank_out) *rank_out = rank;
  return w;
}

inline Decomposition columns_to_decomposition(const HilbertShape& shape, const ComplexMatrix& w) {
  Decomposition d{shape, {}, {}};
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const double p = w.col(j).squaredNorm();
    if (!(p > 0.0)) continue;
    d.weights.push_back(p);
    d.states.push_back(w.col(j) / std::sqrt(p));
  }
  return d;
}

template <class F>
double column_cost(const ComplexVector& v, F& f) {
  const double p = v.squaredNorm();
  if (!(p > 1e-300)) return 0.0;
  return p * f(ComplexVector(v / std::sqrt(p)));
}

struct RestartOutcome {
  double value = std::numeric_limits<double>::infinity();
  ComplexMatrix w;
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<double> history;
};

template <class F>
RestartOutcome run_restart(const ComplexMatrix& rho, ComplexMatrix w, F f, const RoofOptions& opt, Rng rng) {
  const auto m = static_cast<std::size_t>(w.cols());
  std::vector<double> cost(m);
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    cost[j] = column_cost(ComplexVector(w.col(static_cast<Eigen::Index>(j))), f);
    total += cost[j];
  }
  RestartOutcome out;
  out.history.push_back(total);
  std::size_t evals = 1;
  double step = opt.initial_step;
  std::size_t failures = 0;
  const std::size_t patience = std::max<std::size_t>(8, m * (m - 1) / 2);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  bool converged = total <= opt.zero_cost;

  while (!converged && evals < opt.evaluations && m >= 2) {
    const auto i = pick(rng);
    auto j = pick(rng);
    while (j == i) j = pick(rng);
    const double theta = step * gauss(rng);
    const Complex e = std::polar(1.0, phase(rng));
    const double c = std::cos(theta), s = std::sin(theta);
    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    const ComplexVector vi = c * w.col(ii) + s * e * w.col(jj);
    const ComplexVector vj = -s * std::conj(e) * w.col(ii) + c * w.col(jj);
    const double ci = column_cost(vi, f), cj = column_cost(vj, f);
    ++evals;
    const double proposed = total - cost[i] - cost[j] + ci + cj;
    if (proposed < total - 1e-15 * std::max(1.0, total)) {
      w.col(ii) = vi;
      w.col(jj) = vj;
      cost[i] = ci;
      cost[j] = cj;
      // Re-sum to keep rounding from accumulating in the running total.
      total = 0.0;
      for (double x : cost) total += x;
      out.history.push_back(std::min(out.history.back(), total));
      const double drift = (w * w.adjoint() - rho).norm();
      if (drift > opt.reconstruction_tolerance)
        throw std::logic_error("roof_minimize: ensemble no longer reconstructs the state");
      step = std::min(step * 1.2, M_PI / 2.0);
      failures = 0;
      if (total <= opt.zero_cost) converged = true;
    } else if (++failures >= patience) {
      step *= 0.7;
      failures = 0;
      if (step < opt.min_step) converged = true;
    }
  }
  out.value = total;
  out.w = std::move(w);
  out.evaluations = evals;
  out.converged = converged;
  return out;
}

}  // namespace detail

/// Eigen-ensemble of rho padded with zero-weight members to m entries.
inline Decomposition seed_decomposition(const MultiState& rho, std::size_t m) {
  if (rho.is_pure_vector()) {
    if (m < 1) throw std::invalid_argument("seed_decomposition: ensemble size is smaller than the rank");
    Decomposition d{rho.shape(), {1.0}, {rho.amplitudes()}};
    for (std::size_t i = 1; i < m; ++i) {
      d.weights.push_back(0.0);
      d.states.push_back(basis_vector(rho.shape().total(), 0));
    }
    return d;
  }
  const ComplexMatrix w = detail::seed_columns(rho.density_matrix(), m);
  Decomposition d{rho.shape(), {}, {}};
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const double p = w.col(j).squaredNorm();
    d.weights.push_back(p);
    d.states.push_back(p > 0.0 ? ComplexVector(w.col(j) / std::sqrt(p))
                               : basis_vector(rho.shape().total(), 0));
  }
  return d;
}

/// Minimizes sum_i p_i f(psi_i) over ensembles of rho. `f` maps a unit vector
/// to a non-negative number and must not keep state between calls.
template <class F>
RoofResult roof_minimize(const MultiState& rho, F f, const RoofOptions& opt = {}) {
  if (rho.is_pure_vector()) {
    const auto& v = rho.amplitudes();
    RoofResult r;
    r.value = f(v);
    r.decomposition = Decomposition{rho.shape(), {1.0}, {v}};
    r.iterations = 1;
    r.converged = true;
    r.history = {r.value};
    return r;
  }
  const ComplexMatrix m = rho.density_matrix();
  std::size_t rank = 0;
  detail::seed_columns(m, m.rows(), &rank);
  if (rank == 1) {
    const auto es = hermitian_eig(m);
    const ComplexVector v = es.vectors.col(0);
    RoofResult r;
    r.value = f(v);
    r.decomposition = Decomposition{rho.shape(), {1.0}, {v}};
    r.iterations = 1;
    r.converged = true;
    r.history = {r.value};
    return r;
  }
  const std::size_t size = opt.ensemble_size ? opt.ensemble_size : rank + 2;
  const ComplexMatrix seed = detail::seed_columns(m, size);
  const std::size_t restarts = std::max<std::size_t>(1, opt.restarts);

  std::vector<detail::RestartOutcome> outcomes(restarts);
  auto run = [&](std::size_t r) {
    Rng rng(detail::splitmix64(opt.seed + 0x9e37ull * (r + 1)));
    ComplexMatrix start = seed;
    if (r > 0) start = seed * random_unitary(size, rng);
    outcomes[r] = detail::run_restart(m, std::move(start), f, opt, std::move(rng));
  };

  const std::size_t threads = std::min(std::max<std::size_t>(1, opt.threads), restarts);
  if (threads == 1) {
    for (std::size_t r = 0; r < restarts; ++r) run(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t r; (r = next.fetch_add(1)) < restarts;) {
          try {
            run(r);
          } catch (...) {
            std::lock_guard<std::mutex> g(failure_lock);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (outcomes[r].value < outcomes[best].value) best = r;
  auto& o = outcomes[best];
  RoofResult result;
  result.value = std::max(0.0, o.value);
  result.decomposition = detail::columns_to_decomposition(rho.shape(), o.w);
  result.iterations = o.evaluations;
  result.converged = o.converged;
  result.restart = best;
  result.history = std::move(o.history);
  return result;
}

/// Sum over factors of the canonical entropy of the single-factor marginals
/// of a pure vector.
inline auto marginal_entropy_functional(const HilbertShape& shape) {
  return [shape](const ComplexVector& psi) {
    double total = 0.0;
    for (std::size_t k = 0; k < shape.factors(); ++k) total += marginal_entropy(psi, shape, {k});
    return total;
  };
}

/// Upper bound on P(rho): the roof of the summed marginal entropies.
inline RoofResult p_upper(const MultiState& rho, const RoofOptions& opt = {}) {
  return roof_minimize(rho, marginal_entropy_functional(rho.shape()), opt);
}

}  // namespace qment
