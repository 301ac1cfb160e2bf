#include <doctest.h>

#include <cmath>

#include "qst/states.hpp"
#include "oracles.hpp"

using namespace qst;
namespace oracle = qst::testing;

TEST_CASE("ghz_state amplitudes") {
  const PureState one = ghz_state(1);
  CHECK(one.dim() == 2);
  CHECK(std::abs(one.amplitudes(0) - Complex(M_SQRT1_2, 0)) < 1e-15);
  CHECK(std::abs(one.amplitudes(1) - Complex(M_SQRT1_2, 0)) < 1e-15);

  const PureState three = ghz_state(3);
  CHECK(three.dim() == 8);
  CHECK(std::abs(three.amplitudes(0)) == doctest::Approx(M_SQRT1_2));
  CHECK(std::abs(three.amplitudes(7)) == doctest::Approx(M_SQRT1_2));
  for (Index i = 1; i < 7; ++i) CHECK(std::abs(three.amplitudes(i)) == 0.0);

  CHECK_THROWS_AS(ghz_state(0), std::invalid_argument);
}

TEST_CASE("ghz projector is pure") {
  CHECK(purity(projector(ghz_state(2))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hadamard_state amplitudes") {
  const PureState one = hadamard_state(1);
  CHECK(std::abs(one.amplitudes(0) - Complex(M_SQRT1_2, 0)) < 1e-15);

  const PureState five = hadamard_state(5);
  CHECK(five.dim() == 32);
  for (Index i = 0; i < 32; ++i) {
    CHECK(std::abs(five.amplitudes(i) - Complex(1.0 / std::sqrt(32.0), 0)) <
          1e-15);
  }
  CHECK_THROWS_AS(hadamard_state(0), std::invalid_argument);
}

TEST_CASE("hadamard_state is an XX eigenstate") {
  // <H|sx (x) sx|H> = 1 by direct 4x4 matrix-vector evaluation.
  const PureState h2 = hadamard_state(2);
  const CMatrix xx = oracle::kron(oracle::pauli_x(), oracle::pauli_x());
  const Complex val = h2.amplitudes.adjoint() * (xx * h2.amplitudes);
  CHECK(val.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(val.imag()) < 1e-12);
}

TEST_CASE("random_density basics") {
  SUBCASE("rank-1 is pure") {
    const DensityMatrix rho = random_density(4, 1, 3);
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("deterministic in the seed") {
    const DensityMatrix a = random_density(8, 8, 7);
    const DensityMatrix b = random_density(8, 8, 7);
    CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("rank control") {
    const DensityMatrix rho = random_density(4, 2, 5);
    CHECK(oracle::numerical_rank(rho.entries) == 2);
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(random_density(4, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_density(4, 5, 1), std::invalid_argument);
  }
}

TEST_CASE("random_density rank bound over many seeds") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Index rank = 1 + static_cast<Index>(seed % 8);
    const DensityMatrix rho = random_density(8, rank, seed);
    std::string why;
    CHECK(is_valid_density(rho.entries, &why));
    CHECK(oracle::numerical_rank(rho.entries) <= rank);
  }
}

TEST_CASE("coherent_state") {
  SUBCASE("vacuum at xi = 0") {
    const PureState v = coherent_state(0.0, 8);
    CHECK(std::abs(v.amplitudes(0) - Complex(1, 0)) < 1e-15);
    CHECK(v.amplitudes.tail(7).norm() == 0.0);
  }
  SUBCASE("truncated norm matches the Poisson partial sum") {
    // Independent oracle: sum of e^{-4} 4^n / n! for n < 32.
    double poisson = 0.0;
    double term = std::exp(-4.0);
    for (int n = 0; n < 32; ++n) {
      poisson += term;
      term *= 4.0 / (n + 1);
    }
    const CVector raw = coherent_amplitudes(2.0, 32);
    CHECK(raw.squaredNorm() == doctest::Approx(poisson).epsilon(1e-12));
    CHECK(std::abs(raw.norm() - 1.0) < 1e-6);
  }
  SUBCASE("mean photon number") {
    const PureState c = coherent_state(2.0, 32);
    double nbar = 0.0;
    for (Index n = 0; n < 32; ++n) nbar += n * std::norm(c.amplitudes(n));
    CHECK(nbar == doctest::Approx(4.0).epsilon(1e-4));
  }
}

TEST_CASE("cat_state") {
  SUBCASE("vacuum at xi = 0") {
    const PureState v = cat_state(0.0, 8);
    CHECK(std::abs(v.amplitudes(0) - Complex(1, 0)) < 1e-12);
  }
  SUBCASE("even parity kills odd Fock amplitudes") {
    const PureState c = cat_state(2.0, 32);
    for (Index n = 1; n < 32; n += 2) CHECK(std::abs(c.amplitudes(n)) < 1e-15);
    CHECK(std::abs(c.amplitudes.norm() - 1.0) < 1e-10);
  }
  SUBCASE("parity expectation is +1") {
    for (Complex xi : {Complex(0.5, 0), Complex(1.0, 0.3), Complex(2.0, 0),
                       Complex(0.0, 2.0)}) {
      const PureState c = cat_state(xi, 32);
      double parity = 0.0;
      for (Index n = 0; n < 32; ++n) {
        parity += (n % 2 == 0 ? 1.0 : -1.0) * std::norm(c.amplitudes(n));
      }
      CHECK(parity == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("purity") {
  CMatrix mixed = CMatrix::Identity(4, 4) / 4.0;
  CHECK(purity(DensityMatrix{mixed}) == doctest::Approx(0.25).epsilon(1e-12));

  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 0.75;
  diag(1, 1) = 0.25;
  // 0.75^2 + 0.25^2 = 0.625 by hand.
  CHECK(purity(DensityMatrix{diag}) == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("density validation rejects bad matrices") {
  CMatrix not_herm(2, 2);
  not_herm << 0.5, Complex(0.1, 0.2), Complex(0.1, -0.1), 0.5;
  CHECK_THROWS_AS(make_density(not_herm), ConstraintViolationError);

  CMatrix bad_trace = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(make_density(bad_trace), ConstraintViolationError);

  CMatrix indefinite(2, 2);
  indefinite << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(make_density(indefinite), ConstraintViolationError);

  CVector unnormalized = CVector::Ones(3);
  CHECK_THROWS_AS(make_pure(unnormalized), ConstraintViolationError);
}

TEST_CASE("constructor outputs satisfy the state invariants") {
  std::string why;
  CHECK(is_valid_density(projector(ghz_state(3)).entries, &why));
  CHECK(is_valid_density(projector(hadamard_state(4)).entries, &why));
  CHECK(is_valid_density(projector(coherent_state({1.0, 0.5}, 24)).entries,
                         &why));
  CHECK(is_valid_density(projector(cat_state({0.0, 1.5}, 24)).entries, &why));
  CHECK(std::abs(ghz_state(4).amplitudes.norm() - 1.0) < 1e-10);
  CHECK(std::abs(cat_state(1.0, 16).amplitudes.norm() - 1.0) < 1e-10);
}
