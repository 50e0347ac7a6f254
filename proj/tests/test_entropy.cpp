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

#include "oracles.hpp"
#include "qment/entropy.hpp"
#include "qment/states.hpp"

#include <catch_amalgamated.hpp>

using namespace qment;

TEST_CASE("purity and canonical entropy", "[entropy]") {
  CHECK(purity(ghz(3)) == 1.0);
  const ComplexMatrix mixed = ComplexMatrix::Identity(4, 4) / 4.0;
  CHECK(purity(mixed) == Catch::Approx(0.25));
  CHECK(canonical_entropy(mixed) == Catch::Approx(2.0));
  CHECK(canonical_entropy(ghz(3)) == 0.0);
  // Single-qubit marginal of a Bell state is maximally mixed.
  CHECK(marginal_entropy(bell_phi_plus(2).amplitudes(), HilbertShape{2, 2}, {0}) == Catch::Approx(1.0));
  CHECK(marginal_entropy(bell_phi_plus(3).amplitudes(), HilbertShape{3, 3}, {1}) == Catch::Approx(std::log2(3.0)));
}

TEST_CASE("linear and Renyi entropies agree through the conversion", "[entropy]") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = 2 + static_cast<std::size_t>(rep % 4);
    const ComplexMatrix rho = oracle::random_density(d, 1 + static_cast<std::size_t>(rep % 3), rng);
    for (int r : {2, 3, 4}) {
      const double lin = linear_entropy(rho, r);
      const double ren = renyi_entropy(rho, r, 2.0);
      CHECK(renyi_from_linear(lin, r, 2.0, static_cast<double>(d)) == Catch::Approx(ren).margin(1e-10));
      CHECK(lin >= -1e-12);
      CHECK(lin <= 1.0 + 1e-12);
    }
    CHECK(renyi_entropy(rho, 2.0) == Catch::Approx(canonical_entropy(rho)).margin(1e-12));
    CHECK(renyi_entropy(rho, 2.0, std::exp(1.0)) == Catch::Approx(canonical_entropy(rho) * std::log(2.0)).margin(1e-12));
  }
  CHECK_THROWS_AS(renyi_entropy(ComplexMatrix::Identity(2, 2) / 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(linear_entropy(ComplexMatrix::Identity(2, 2) / 2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(renyi_from_linear(2.0, 2.0, 2.0, 2.0), std::domain_error);
}

TEST_CASE("linear entropy is 1 on maximally mixed states and 0 on pure", "[entropy]") {
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto n = static_cast<Eigen::Index>(d);
    CHECK(linear_entropy(ComplexMatrix::Identity(n, n) / static_cast<double>(d)) == Catch::Approx(1.0));
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    p(0, 0) = 1.0;
    CHECK(linear_entropy(p, 3) == Catch::Approx(0.0).margin(1e-14));
  }
}

TEST_CASE("entropy is invariant under local unitaries", "[entropy]") {
  Rng rng(31);
  const HilbertShape shape{2, 3, 2};
  for (int rep = 0; rep < 30; ++rep) {
    const auto psi = random_pure(shape, rng);
    const auto u = random_local_unitary(shape, rng);
    const auto moved = conjugate_by(psi, u);
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(std::abs(marginal_entropy(psi.amplitudes(), shape, {k}) - marginal_entropy(moved.amplitudes(), shape, {k})) <= 1e-10);
    CHECK(std::abs(subsystem_entropy_sum(psi) - subsystem_entropy_sum(moved)) <= 1e-10);
    CHECK(subsystem_entropy_sum(psi) == Catch::Approx(oracle::marginal_entropy_sum(psi.amplitudes(), shape.dims())).margin(1e-10));
  }
  CHECK_THROWS_AS(subsystem_entropy_sum(ghz(3).as_density()), NotPureError);
}

TEST_CASE("von Neumann entropy diagnostics", "[entropy]") {
  CHECK(von_neumann_entropy(ComplexMatrix::Identity(4, 4) / 4.0) == Catch::Approx(2.0));
  CHECK(von_neumann_entropy(ghz(2).density_matrix()) == Catch::Approx(0.0).margin(1e-12));
}
