#include "qst/states.hpp"

#include <cmath>
#include <iostream>

#include "qst/rng.hpp"

namespace qst {

namespace {

Index qubit_dim(int n_qubits, const char* who) {
  if (n_qubits < 1) {
    throw std::invalid_argument(std::string(who) + ": n_qubits must be >= 1");
  }
  if (n_qubits > 30) {
    throw std::invalid_argument(std::string(who) + ": n_qubits too large");
  }
  return Index(1) << n_qubits;
}

}  // namespace

PureState ghz_state(int n_qubits) {
  const Index d = qubit_dim(n_qubits, "ghz_state");
  CVector amps = CVector::Zero(d);
  const double a = 1.0 / std::sqrt(2.0);
  amps(0) = a;
  amps(d - 1) = a;
  return PureState{std::move(amps)};
}

PureState hadamard_state(int n_qubits) {
  const Index d = qubit_dim(n_qubits, "hadamard_state");
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState{CVector::Constant(d, Complex(a, 0.0))};
}

DensityMatrix random_density(Index dim, Index rank, std::uint64_t seed) {
  if (dim < 1) {
    throw std::invalid_argument("random_density: dim must be positive");
  }
  if (rank < 1 || rank > dim) {
    throw std::invalid_argument(
        "random_density: rank must satisfy 1 <= rank <= dim");
  }
  Rng rng(seed);
  CMatrix g(rank, dim);
  for (Index i = 0; i < rank; ++i) {
    for (Index j = 0; j < dim; ++j) {
      g(i, j) = rng.complex_normal();
    }
  }
  CMatrix h = g.adjoint() * g;
  h = (h + h.adjoint()) / 2.0;  // strip rounding asymmetry
  h /= h.trace().real();
  return DensityMatrix{std::move(h)};
}

CVector coherent_amplitudes(Complex xi, Index dim) {
  CVector v(dim);
  v(0) = std::exp(-0.5 * std::norm(xi));
  for (Index n = 1; n < dim; ++n) {
    v(n) = v(n - 1) * xi / std::sqrt(static_cast<double>(n));
  }
  return v;
}

PureState coherent_state(Complex xi, Index dim) {
  if (dim < 2) {
    throw std::invalid_argument("coherent_state: dim must be >= 2");
  }
  const double r = std::abs(xi);
  if (r * r + 5.0 * r > static_cast<double>(dim)) {
    std::cerr << "warning: coherent_state(|xi| = " << r << ", dim = " << dim
              << "): truncation likely inadequate (|xi|^2 + 5|xi| > dim)\n";
  }
  CVector v = coherent_amplitudes(xi, dim);
  v /= v.norm();
  return PureState{std::move(v)};
}

PureState cat_state(Complex xi, Index dim) {
  if (dim < 2) {
    throw std::invalid_argument("cat_state: dim must be >= 2");
  }
  const double r = std::abs(xi);
  if (r * r + 5.0 * r > static_cast<double>(dim)) {
    std::cerr << "warning: cat_state(|xi| = " << r << ", dim = " << dim
              << "): truncation likely inadequate (|xi|^2 + 5|xi| > dim)\n";
  }
  CVector v = coherent_amplitudes(xi, dim) + coherent_amplitudes(-xi, dim);
  v /= v.norm();
  return PureState{std::move(v)};
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = |rho|_F^2 for Hermitian rho.
  return rho.entries.squaredNorm();
}

DensityMatrix projector(const PureState& psi) {
  CMatrix p = psi.amplitudes * psi.amplitudes.adjoint();
  return DensityMatrix{std::move(p)};
}

}  // namespace qst
