#include <doctest.h>

#include <cmath>

#include "qst/baseline.hpp"
#include "qst/metrics.hpp"
#include "qst/states.hpp"
#include "oracles.hpp"

using namespace qst;
namespace oracle = qst::testing;

TEST_CASE("build_sensing single-qubit rows") {
  const SensingMatrix a = build_sensing(pauli_set(1));
  REQUIRE(a.entries.rows() == 4);
  REQUIRE(a.entries.cols() == 4);
  // Row for I is (1, 0, 0, 1); row for sigma_z is (1, 0, 0, -1), with
  // columns ordered n = i*dim + j (tr of Pi |i><j| worked out by hand).
  CVector row_i(4), row_z(4);
  row_i << 1, 0, 0, 1;
  row_z << 1, 0, 0, -1;
  CHECK((a.entries.row(0).transpose() - row_i).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.entries.row(3).transpose() - row_z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_sensing husimi rows have the rank-1 pattern") {
  const ObservableSet set = husimi_set(1.5, 3, 2);
  const SensingMatrix a = build_sensing(set);
  for (int m = 0; m < set.size(); ++m) {
    const CMatrix p = set.op(m);
    for (Index i = 0; i < 2; ++i) {
      for (Index j = 0; j < 2; ++j) {
        CHECK(std::abs(a.entries(m, i * 2 + j) - p(j, i)) < 1e-15);
      }
    }
  }
}

TEST_CASE("linear_inversion recovers the state from full Pauli data") {
  const DensityMatrix truth = random_density(4, 4, 5);
  const ObservableSet set = pauli_set(2);
  const CMatrix est = linear_inversion(measure(truth, set), set);
  CHECK((est - truth.entries).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("linear_inversion round trip for 1-3 qubits") {
  for (int n : {1, 2, 3}) {
    const ObservableSet set = pauli_set(n);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Index d = Index(1) << n;
      const Index rank = 1 + static_cast<Index>(seed % d);
      const DensityMatrix truth = random_density(d, rank, 100 * n + seed);
      const CMatrix est = linear_inversion(measure(truth, set), set);
      CHECK((est - truth.entries).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("linear_inversion reports informational incompleteness") {
  const ObservableSet set = pauli_set(1);
  DataSet only_identity;
  only_identity.entries = {{0, 1.0}};
  try {
    linear_inversion(only_identity, set);
    FAIL("expected IncompleteDataError");
  } catch (const IncompleteDataError& e) {
    CHECK(e.numerical_rank == 1);
  }
}

TEST_CASE("linear_inversion on noisy data can leave the physical set") {
  // Seeded instance exhibiting a negative eigenvalue; flagged, not rejected.
  const DensityMatrix truth = random_density(4, 1, 3);
  const ObservableSet set = pauli_set(2);
  const DataSet noisy = gaussian_noise(measure(truth, set), 0.2, 8);
  const CMatrix est = linear_inversion(noisy, set);
  CHECK(hermiticity_error(est) < 1e-12);  // Hermitian part returned
  CHECK(min_eigenvalue(est) < 0.0);
  CHECK_FALSE(is_valid_density(est));
}

TEST_CASE("imle fixed point at the true state") {
  // Dense fine grid so the frame acts as a near-identity: one R rho R
  // update from the truth stays put within 1e-6.
  const ObservableSet set = husimi_set(6.0, 96, 8);
  const DensityMatrix truth = random_density(8, 2, 21);
  const DataSet data = measure(truth, set);
  const CMatrix next = imle_iterate(truth.entries, data, set);
  CHECK((next - truth.entries).norm() < 1e-6);
}

TEST_CASE("imle stays at the maximally mixed state on a symmetric frame") {
  // Three mutually unbiased bases on one qubit: sum of projectors is 3I,
  // so equal data values keep I/2 exactly fixed.
  std::vector<CMatrix> mubs;
  auto add_pair = [&](const CVector& v) {
    mubs.push_back(v * v.adjoint() / M_PI);
    CVector w(2);
    w << -std::conj(v(1)), std::conj(v(0));  // orthogonal partner
    mubs.push_back(w * w.adjoint() / M_PI);
  };
  CVector z0(2), x0(2), y0(2);
  z0 << 1, 0;
  x0 << M_SQRT1_2, M_SQRT1_2;
  y0 << M_SQRT1_2, Complex(0, M_SQRT1_2);
  add_pair(z0);
  add_pair(x0);
  add_pair(y0);
  const ObservableSet set = ObservableSet::from_operators(
      ObservableKind::husimi_projector, 2, mubs);
  const DensityMatrix mixed{CMatrix::Identity(2, 2) / 2.0};
  const DataSet data = measure(mixed, set);
  for (const auto& e : data.entries) {
    CHECK(e.value == doctest::Approx(0.5 / M_PI).epsilon(1e-12));
  }
  const DensityMatrix out = imle(data, set, 10, 1e-14);
  CHECK((out.entries - mixed.entries).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("imle reconstructs a small cat state") {
  const Index dim = 16;
  const DensityMatrix truth = projector(cat_state(1.2, dim));
  const ObservableSet set = husimi_set(3.5, 24, dim);
  const DataSet data = measure(truth, set);
  const DensityMatrix est = imle(data, set, 1500, 1e-12);
  std::string why;
  CHECK(is_valid_density(est.entries, &why));
  CHECK(uj_fidelity(est, truth) >= 0.99);
}

TEST_CASE("imle log-likelihood is non-decreasing (external monitor)") {
  const Index dim = 12;
  const DensityMatrix truth = random_density(dim, 3, 2);
  const ObservableSet set = husimi_set(4.0, 16, dim);
  const DataSet data = measure(truth, set);
  CMatrix rho = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  auto loglik = [&](const CMatrix& r) {
    double ll = 0.0;
    for (const auto& e : data.entries) {
      const double p = set.trace_with(e.operator_index, r).real();
      if (e.value > 0.0 && p > 0.0) ll += e.value * std::log(p);
    }
    return ll;
  };
  double prev = loglik(rho);
  for (int t = 0; t < 200; ++t) {
    rho = imle_iterate(rho, data, set);
    const double ll = loglik(rho);
    CHECK(ll >= prev - 1e-9);
    prev = ll;
    std::string why;
    CHECK_MESSAGE(is_valid_density(rho, &why), why);
  }
}

TEST_CASE("imle input validation") {
  const ObservableSet pauli = pauli_set(1);
  DataSet data;
  data.entries = {{0, 1.0}};
  CHECK_THROWS_AS(imle(data, pauli, 10, 1e-6), std::invalid_argument);

  const ObservableSet set = husimi_set(2.0, 4, 4);
  DataSet negative;
  negative.entries = {{0, -0.1}};
  CHECK_THROWS_AS(imle(negative, set, 10, 1e-6), std::invalid_argument);
}
