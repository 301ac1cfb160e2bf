#include "qst/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qst {

namespace {

// V sqrt(clamp(lambda)) V^dag for Hermitian input; negative dust goes to 0.
CMatrix psd_sqrt(const CMatrix& herm) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  const RVector vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

// Deterministic operand order so F(a, b) and F(b, a) run the identical
// computation (the formula is symmetric; near-null eigenvalue dust is not).
bool canonical_before(const CMatrix& a, const CMatrix& b) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (a(i, j).real() != b(i, j).real()) {
        return a(i, j).real() < b(i, j).real();
      }
      if (a(i, j).imag() != b(i, j).imag()) {
        return a(i, j).imag() < b(i, j).imag();
      }
    }
  }
  return true;
}

}  // namespace

double uj_fidelity(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() ||
      rho.rows() != rho.cols()) {
    throw std::invalid_argument("uj_fidelity: dimension mismatch");
  }
  const bool keep = canonical_before(rho, sigma);
  const CMatrix& a = keep ? rho : sigma;
  const CMatrix& b = keep ? sigma : rho;
  // F = |sqrt(a) sqrt(b)|_tr^2; the singular values of the root product are
  // better conditioned than the eigenvalues of sqrt(a) b sqrt(a).
  const CMatrix root_prod = psd_sqrt((a + a.adjoint()) / 2.0) *
                            psd_sqrt((b + b.adjoint()) / 2.0);
  Eigen::BDCSVD<CMatrix> svd(root_prod);
  const double tr = svd.singularValues().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double uj_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return uj_fidelity(rho.entries, sigma.entries);
}

PhaseGrid wigner(const DensityMatrix& rho, double extent, int steps) {
  if (steps < 2) {
    throw std::invalid_argument("wigner: steps must be >= 2");
  }
  if (!(extent > 0.0)) {
    throw std::invalid_argument("wigner: extent must be positive");
  }
  const Index d = rho.dim();
  // Truncated annihilation operator and parity signs (-1)^n.
  CMatrix lower = CMatrix::Zero(d, d);
  for (Index n = 1; n < d; ++n) {
    lower(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  RVector parity(d);
  for (Index n = 0; n < d; ++n) parity(n) = (n % 2 == 0) ? 1.0 : -1.0;

  PhaseGrid grid;
  grid.extent = extent;
  grid.steps = steps;
  grid.values.resize(steps, steps);
  const Complex im(0.0, 1.0);
  for (int yi = 0; yi < steps; ++yi) {
    const double y = grid.coordinate(yi);
    for (int xi = 0; xi < steps; ++xi) {
      const double x = grid.coordinate(xi);
      const Complex beta(x, y);
      // D(beta) = exp(beta a^dag - conj(beta) a) = exp(iH), H Hermitian.
      const CMatrix h =
          -im * (beta * lower.adjoint() - std::conj(beta) * lower);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
      CVector phases(d);
      for (Index n = 0; n < d; ++n) {
        phases(n) = std::exp(im * es.eigenvalues()(n));
      }
      const CMatrix disp =
          es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
      const CMatrix moved = disp.adjoint() * rho.entries * disp;
      Complex tr(0.0, 0.0);
      for (Index n = 0; n < d; ++n) tr += parity(n) * moved(n, n);
      if (std::abs(tr.imag()) > 1e-10) {
        std::ostringstream os;
        os << "wigner: displaced parity not real (imag " << tr.imag() << ")";
        throw ConstraintViolationError(os.str());
      }
      grid.values(yi, xi) = (2.0 / M_PI) * tr.real();
    }
  }
  return grid;
}

}  // namespace qst
