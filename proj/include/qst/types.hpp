#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qst {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Shared validity tolerances. Eigensolvers emit O(eps*dim) negative dust on
// PSD matrices, hence the looser floor on the minimum eigenvalue.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kMinEigFloor = -1e-8;
inline constexpr double kNormTol = 1e-10;

struct DegenerateAnsatzError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstraintViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a measurement record does not determine the state; carries the
// numerical rank of the restricted sensing matrix.
struct IncompleteDataError : std::runtime_error {
  IncompleteDataError(const std::string& what, Index rank_found)
      : std::runtime_error(what), numerical_rank(rank_found) {}
  Index numerical_rank;
};

struct NumericalSupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Normalized state vector on a d-dimensional Hilbert space.
struct PureState {
  CVector amplitudes;

  Index dim() const { return amplitudes.size(); }
};

/// Hermitian, unit-trace, positive-semidefinite matrix. Construct through
/// make_density() to get the invariants checked; the aggregate form is for
/// code paths that guarantee validity by construction.
struct DensityMatrix {
  CMatrix entries;

  Index dim() const { return entries.rows(); }
};

double hermiticity_error(const CMatrix& m);
double min_eigenvalue(const CMatrix& m);

/// True when `entries` passes all three density-matrix checks; on failure
/// writes a human-readable reason into `why` when given.
bool is_valid_density(const CMatrix& entries, std::string* why = nullptr);

/// Throws ConstraintViolationError unless `entries` is a valid density matrix.
void require_valid_density(const CMatrix& entries);

PureState make_pure(CVector amplitudes);
DensityMatrix make_density(CMatrix entries);

}  // namespace qst
