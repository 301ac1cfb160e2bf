#include <doctest.h>

#include <cmath>

#include "qst/ansatz.hpp"
#include "qst/rng.hpp"
#include "oracles.hpp"

using namespace qst;
namespace oracle = qst::testing;

namespace {

StiefelAnsatz random_stiefel(Index rank, Index dim, std::uint64_t seed) {
  return std::get<StiefelAnsatz>(init_ansatz(AnsatzKind::sm, dim, rank, seed));
}

CVector random_cvector(Index n, std::uint64_t seed) {
  Rng rng(seed);
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

// Retraction formula re-derived with an explicit adjugate 2x2 inverse,
// as an independent route for checking sm_retract_step.
CVector retract_oracle(const CVector& w, const CVector& g, double eta) {
  const CVector gh = g / g.norm();
  const Index k = w.size();
  CMatrix a(k, 2), b(k, 2);
  a.col(0) = gh;
  a.col(1) = w;
  b.col(0) = w;
  b.col(1) = -gh;
  const Eigen::Matrix2cd m =
      Eigen::Matrix2cd::Identity() + (eta / 2.0) * (b.adjoint() * a);
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Eigen::Matrix2cd inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  inv /= det;
  return w - eta * (a * (inv * (b.adjoint() * w)));
}

}  // namespace

TEST_CASE("cd_to_density") {
  SUBCASE("identity factor gives the maximally mixed state") {
    CholeskyAnsatz a{4, 4, false, CMatrix::Identity(4, 4)};
    const CMatrix expected = CMatrix::Identity(4, 4) / 4.0;
    CHECK((cd_to_density(a).entries - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("rank-1 factor is scale invariant") {
    CMatrix t(1, 2);
    t << 7.0, 7.0;
    CholeskyAnsatz a{1, 2, false, t};
    CMatrix expected(2, 2);
    expected << 0.5, 0.5, 0.5, 0.5;
    CHECK((cd_to_density(a).entries - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("random factor induces a valid matrix of bounded rank") {
    Rng rng(4);
    CMatrix t(2, 4);
    for (Index i = 0; i < 2; ++i) {
      for (Index j = 0; j < 4; ++j) t(i, j) = rng.complex_normal();
    }
    const DensityMatrix rho = cd_to_density(CholeskyAnsatz{2, 4, false, t});
    CHECK(oracle::numerical_rank(rho.entries) <= 2);
  }
  SUBCASE("zero factor is degenerate") {
    CholeskyAnsatz a{2, 4, false, CMatrix::Zero(2, 4)};
    CHECK_THROWS_AS(cd_to_density(a), DegenerateAnsatzError);
  }
}

TEST_CASE("sm_to_density") {
  SUBCASE("single block is a projector") {
    CVector w = random_cvector(4, 1);
    w /= w.norm();
    const StiefelAnsatz a{1, 4, w};
    CHECK((sm_to_density(a).entries - w * w.adjoint()).cwiseAbs().maxCoeff() <
          1e-12);
  }
  SUBCASE("two balanced basis blocks give diag(1/2, 1/2)") {
    CVector w = CVector::Zero(4);
    w(0) = std::sqrt(0.5);  // block 0 = sqrt(.5)|0>
    w(3) = std::sqrt(0.5);  // block 1 = sqrt(.5)|1>
    const StiefelAnsatz a{2, 2, w};
    CMatrix expected(2, 2);
    expected << 0.5, 0, 0, 0.5;
    CHECK((sm_to_density(a).entries - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("retracted random point is valid with bounded rank") {
    StiefelAnsatz a = random_stiefel(3, 8, 5);
    a = sm_retract_step(a, random_cvector(24, 6), 0.2);
    const DensityMatrix rho = sm_to_density(a);
    CHECK(std::abs(rho.entries.trace() - Complex(1, 0)) < 1e-10);
    CHECK(oracle::numerical_rank(rho.entries) <= 3);
  }
  SUBCASE("norm violation is rejected") {
    StiefelAnsatz a{1, 2, CVector::Ones(2)};  // norm sqrt(2)
    CHECK_THROWS_AS(sm_to_density(a), ConstraintViolationError);
  }
}

TEST_CASE("sm_retract_step") {
  SUBCASE("vanishing step leaves W in place") {
    const StiefelAnsatz a = random_stiefel(2, 4, 7);
    const CVector g = random_cvector(8, 8);
    const StiefelAnsatz out = sm_retract_step(a, g, 1e-8);
    CHECK((out.stacked - a.stacked).norm() < 1e-7);
  }
  SUBCASE("matches the closed-form 2x2 inverse oracle") {
    const StiefelAnsatz a = random_stiefel(2, 4, 9);
    const CVector g = random_cvector(8, 10);
    const StiefelAnsatz out = sm_retract_step(a, g, 0.3);
    CHECK((out.stacked - retract_oracle(a.stacked, g, 0.3)).norm() < 1e-12);
    CHECK(std::abs(out.stacked.norm() - 1.0) < 1e-10);
  }
  SUBCASE("norm is preserved across the eta range") {
    for (double eta : {1e-4, 1e-2, 0.1, 0.5, 1.0}) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const StiefelAnsatz a = random_stiefel(2, 4, 100 + seed);
        const CVector g = random_cvector(8, 200 + seed);
        const StiefelAnsatz out = sm_retract_step(a, g, eta);
        CHECK(std::abs(out.stacked.norm() - 1.0) < 1e-9);
      }
    }
  }
  SUBCASE("cumulative drift over 1000 steps stays below 1e-8") {
    StiefelAnsatz a = random_stiefel(3, 4, 11);
    Rng rng(12);
    for (int t = 0; t < 1000; ++t) {
      CVector g(12);
      for (Index i = 0; i < 12; ++i) g(i) = rng.complex_normal();
      a = sm_retract_step(a, g, 0.1);
    }
    CHECK(std::abs(a.stacked.norm() - 1.0) < 1e-8);
  }
  SUBCASE("zero gradient signals convergence") {
    const StiefelAnsatz a = random_stiefel(1, 4, 13);
    CHECK_THROWS_AS(sm_retract_step(a, CVector::Zero(4), 0.1),
                    std::invalid_argument);
  }
}

TEST_CASE("pn_to_density") {
  SUBCASE("single unit row is a projector") {
    CVector q = random_cvector(4, 14);
    q /= q.norm();
    PNAnsatz a{1, 4, RVector::Ones(1), q.transpose()};
    CHECK((pn_to_density(a).entries - q * q.adjoint()).cwiseAbs().maxCoeff() <
          1e-12);
  }
  SUBCASE("uniform weights on basis rows give I/m padded") {
    PNAnsatz a{2, 4, RVector::Constant(2, 0.5), CMatrix::Zero(2, 4)};
    a.states(0, 0) = 1.0;
    a.states(1, 1) = 1.0;
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = 0.5;
    expected(1, 1) = 0.5;
    CHECK((pn_to_density(a).entries - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("random projected point is valid") {
    const Ansatz a = init_ansatz(AnsatzKind::pn, 8, 4, 15);
    std::string why;
    CHECK(is_valid_density(induced_matrix(a), &why));
    CHECK(oracle::numerical_rank(induced_matrix(a)) <= 4);
  }
  SUBCASE("invariant violations are rejected") {
    PNAnsatz bad{1, 2, RVector::Constant(1, 0.7), CMatrix::Ones(1, 2)};
    CHECK_THROWS_AS(pn_to_density(bad), ConstraintViolationError);
  }
}

TEST_CASE("pn_project") {
  SUBCASE("equal raw weights become uniform") {
    const PNAnsatz a =
        pn_project(RVector::Constant(4, 2.5), CMatrix::Identity(4, 4));
    for (Index i = 0; i < 4; ++i) {
      CHECK(a.weights(i) == doctest::Approx(0.25).epsilon(1e-14));
    }
  }
  SUBCASE("softmax of (0, ln 3) is (0.25, 0.75)") {
    RVector c(2);
    c << 0.0, std::log(3.0);
    const PNAnsatz a = pn_project(c, CMatrix::Identity(2, 2));
    CHECK(a.weights(0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(a.weights(1) == doctest::Approx(0.75).epsilon(1e-14));
  }
  SUBCASE("unit rows are unchanged (norm division is idempotent)") {
    CMatrix q(2, 3);
    q.row(0) = random_cvector(3, 16).transpose();
    q.row(1) = random_cvector(3, 17).transpose();
    q.row(0) /= q.row(0).norm();
    q.row(1) /= q.row(1).norm();
    const PNAnsatz a = pn_project(RVector::Zero(2), q);
    CHECK((a.states - q).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("softmax is not idempotent on the weights (regression guard)") {
    RVector c(2);
    c << 0.0, std::log(3.0);
    const PNAnsatz once = pn_project(c, CMatrix::Identity(2, 2));
    const PNAnsatz twice = pn_project(once.weights, once.states);
    CHECK(std::abs(twice.weights(0) - once.weights(0)) > 1e-3);
  }
  SUBCASE("zero row is degenerate") {
    CMatrix q = CMatrix::Zero(2, 3);
    q.row(0) = random_cvector(3, 18).transpose();
    CHECK_THROWS_AS(pn_project(RVector::Zero(2), q), DegenerateAnsatzError);
  }
  SUBCASE("overflow-safe for large raw weights") {
    RVector c(2);
    c << 900.0, 901.0;
    const PNAnsatz a = pn_project(c, CMatrix::Identity(2, 2));
    CHECK(std::isfinite(a.weights(0)));
    CHECK(a.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("init_ansatz") {
  SUBCASE("sm is normalized") {
    const auto a =
        std::get<StiefelAnsatz>(init_ansatz(AnsatzKind::sm, 8, 3, 1));
    CHECK(std::abs(a.stacked.norm() - 1.0) < 1e-12);
  }
  SUBCASE("deterministic in the seed") {
    const auto a =
        std::get<CholeskyAnsatz>(init_ansatz(AnsatzKind::cd, 8, 3, 2));
    const auto b =
        std::get<CholeskyAnsatz>(init_ansatz(AnsatzKind::cd, 8, 3, 2));
    CHECK((a.factor - b.factor).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("cd rank bound propagates to the density matrix") {
    const Ansatz a = init_ansatz(AnsatzKind::cd, 8, 3, 3);
    CHECK(oracle::numerical_rank(induced_matrix(a)) <= 3);
  }
  SUBCASE("cd_tri is lower triangular with rank forced to dim") {
    const auto a =
        std::get<CholeskyAnsatz>(init_ansatz(AnsatzKind::cd_tri, 4, 1, 4));
    CHECK(a.rank == 4);
    CHECK(a.triangular);
    for (Index i = 0; i < 4; ++i) {
      for (Index j = i + 1; j < 4; ++j) {
        CHECK(a.factor(i, j) == Complex(0, 0));
      }
    }
  }
  SUBCASE("invalid rank") {
    CHECK_THROWS_AS(init_ansatz(AnsatzKind::cd, 4, 0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(init_ansatz(AnsatzKind::sm, 4, 5, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("every parameterization induces valid density matrices") {
  // The central structural claim: all three maps land on physical states at
  // any (projected) parameter point.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Index dim = 2 + static_cast<Index>(seed % 7);
    const Index rank = 1 + static_cast<Index>(seed % dim);
    for (AnsatzKind kind : {AnsatzKind::cd, AnsatzKind::cd_tri, AnsatzKind::sm,
                            AnsatzKind::pn}) {
      const Ansatz a = init_ansatz(kind, dim, rank, seed);
      std::string why;
      const CMatrix rho = induced_matrix(a);
      CHECK_MESSAGE(is_valid_density(rho, &why), why);
      const Index bound = kind == AnsatzKind::cd_tri ? dim : rank;
      CHECK(oracle::numerical_rank(rho) <= bound);
    }
  }
}
