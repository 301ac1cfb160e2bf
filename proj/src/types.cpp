#include "qst/types.hpp"

#include <cmath>
#include <sstream>

namespace qst {

double hermiticity_error(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_valid_density(const CMatrix& entries, std::string* why) {
  if (entries.rows() == 0 || entries.rows() != entries.cols()) {
    if (why) *why = "not a nonempty square matrix";
    return false;
  }
  const double herm = hermiticity_error(entries);
  if (herm > kHermitianTol) {
    if (why) {
      std::ostringstream os;
      os << "not Hermitian: max |rho - rho^dag| = " << herm;
      *why = os.str();
    }
    return false;
  }
  const double tr_err = std::abs(entries.trace() - Complex(1.0, 0.0));
  if (tr_err > kTraceTol) {
    if (why) {
      std::ostringstream os;
      os << "trace deviates from 1 by " << tr_err;
      *why = os.str();
    }
    return false;
  }
  const double lambda_min = min_eigenvalue((entries + entries.adjoint()) / 2.0);
  if (lambda_min < kMinEigFloor) {
    if (why) {
      std::ostringstream os;
      os << "not PSD: minimum eigenvalue = " << lambda_min;
      *why = os.str();
    }
    return false;
  }
  if (why) why->clear();
  return true;
}

void require_valid_density(const CMatrix& entries) {
  std::string why;
  if (!is_valid_density(entries, &why)) {
    throw ConstraintViolationError("invalid density matrix: " + why);
  }
}

PureState make_pure(CVector amplitudes) {
  if (amplitudes.size() == 0) {
    throw std::invalid_argument("make_pure: empty amplitude vector");
  }
  const double err = std::abs(amplitudes.norm() - 1.0);
  if (err > kNormTol) {
    std::ostringstream os;
    os << "make_pure: norm deviates from 1 by " << err;
    throw ConstraintViolationError(os.str());
  }
  return PureState{std::move(amplitudes)};
}

DensityMatrix make_density(CMatrix entries) {
  require_valid_density(entries);
  return DensityMatrix{std::move(entries)};
}

}  // namespace qst
