#include "qst/ansatz.hpp"

#include <cmath>
#include <sstream>

#include "qst/rng.hpp"

namespace qst {

namespace {

void check_rank_dim(Index dim, Index rank, const char* who) {
  if (dim < 1) {
    throw std::invalid_argument(std::string(who) + ": dim must be positive");
  }
  if (rank < 1 || rank > dim) {
    throw std::invalid_argument(std::string(who) +
                                ": rank must satisfy 1 <= rank <= dim");
  }
}

CMatrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = rng.complex_normal();
    }
  }
  return m;
}

}  // namespace

CMatrix cd_matrix(const CholeskyAnsatz& a) {
  const double s = a.factor.squaredNorm();
  if (s <= 1e-30) {
    throw DegenerateAnsatzError("cd: factor is numerically zero");
  }
  CMatrix rho = (a.factor.adjoint() * a.factor) / s;
  return rho;
}

CMatrix sm_matrix(const StiefelAnsatz& a) {
  if (a.stacked.size() != a.rank * a.dim) {
    throw std::invalid_argument("sm: stacked vector shape mismatch");
  }
  const double norm_err = std::abs(a.stacked.norm() - 1.0);
  if (norm_err > 1e-6) {
    std::ostringstream os;
    os << "sm: |W| deviates from 1 by " << norm_err;
    throw ConstraintViolationError(os.str());
  }
  const Index d = a.dim;
  CMatrix rho = CMatrix::Zero(d, d);
  for (Index b = 0; b < a.rank; ++b) {
    const auto w = a.stacked.segment(b * d, d);
    rho.noalias() += w * w.adjoint();
  }
  return rho;
}

CMatrix pn_matrix(const PNAnsatz& a) {
  if (a.weights.minCoeff() < 0.0 ||
      std::abs(a.weights.sum() - 1.0) > kNormTol) {
    throw ConstraintViolationError("pn: weights are not a probability vector");
  }
  const Index d = a.dim;
  CMatrix rho = CMatrix::Zero(d, d);
  for (Index b = 0; b < a.rank; ++b) {
    const double row_err = std::abs(a.states.row(b).norm() - 1.0);
    if (row_err > kNormTol) {
      throw ConstraintViolationError("pn: state row is not unit norm");
    }
    const auto q = a.states.row(b).transpose();
    rho.noalias() += a.weights(b) * (q * q.adjoint());
  }
  return rho;
}

CMatrix induced_matrix(const Ansatz& a) {
  return std::visit(
      [](const auto& x) -> CMatrix {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CholeskyAnsatz>) return cd_matrix(x);
        if constexpr (std::is_same_v<T, StiefelAnsatz>) return sm_matrix(x);
        if constexpr (std::is_same_v<T, PNAnsatz>) return pn_matrix(x);
      },
      a);
}

DensityMatrix cd_to_density(const CholeskyAnsatz& a) {
  return make_density(cd_matrix(a));
}

DensityMatrix sm_to_density(const StiefelAnsatz& a) {
  return make_density(sm_matrix(a));
}

DensityMatrix pn_to_density(const PNAnsatz& a) {
  return make_density(pn_matrix(a));
}

StiefelAnsatz sm_retract_step(const StiefelAnsatz& a, const CVector& grad,
                              double eta) {
  if (!(eta > 0.0)) {
    throw std::invalid_argument("sm_retract_step: eta must be positive");
  }
  if (grad.size() != a.stacked.size()) {
    throw std::invalid_argument("sm_retract_step: gradient shape mismatch");
  }
  const double gn = grad.norm();
  if (gn <= 1e-30) {
    throw std::invalid_argument(
        "sm_retract_step: zero gradient (caller treats as converged)");
  }
  const Index k = a.stacked.size();
  CMatrix lhs(k, 2);  // A = [Gh W]
  lhs.col(0) = grad / gn;
  lhs.col(1) = a.stacked;
  CMatrix rhs(k, 2);  // B = [W -Gh]
  rhs.col(0) = a.stacked;
  rhs.col(1) = -lhs.col(0);
  const Eigen::Matrix2cd cayley =
      Eigen::Matrix2cd::Identity() + (eta / 2.0) * (rhs.adjoint() * lhs);
  const Eigen::Vector2cd bw = rhs.adjoint() * a.stacked;
  StiefelAnsatz out = a;
  out.stacked.noalias() -= eta * (lhs * cayley.inverse() * bw);
  return out;
}

PNAnsatz pn_project(const RVector& weights_raw, const CMatrix& states_raw) {
  const Index m = weights_raw.size();
  if (m < 1 || states_raw.rows() != m || states_raw.cols() < 1) {
    throw std::invalid_argument("pn_project: shape mismatch");
  }
  PNAnsatz out;
  out.rank = m;
  out.dim = states_raw.cols();
  const double shift = weights_raw.maxCoeff();
  out.weights = (weights_raw.array() - shift).exp();
  out.weights /= out.weights.sum();
  out.states.resize(m, out.dim);
  for (Index b = 0; b < m; ++b) {
    const double n = states_raw.row(b).norm();
    if (n <= 1e-30) {
      throw DegenerateAnsatzError("pn_project: zero state row");
    }
    out.states.row(b) = states_raw.row(b) / n;
  }
  return out;
}

Ansatz init_ansatz(AnsatzKind kind, Index dim, Index rank, std::uint64_t seed) {
  if (kind == AnsatzKind::cd_tri) rank = dim;
  check_rank_dim(dim, rank, "init_ansatz");
  Rng rng(seed);
  switch (kind) {
    case AnsatzKind::cd:
    case AnsatzKind::cd_tri: {
      CholeskyAnsatz a;
      a.rank = rank;
      a.dim = dim;
      a.triangular = (kind == AnsatzKind::cd_tri);
      a.factor = gaussian_matrix(rng, rank, dim);
      if (a.triangular) {
        a.factor.triangularView<Eigen::StrictlyUpper>().setZero();
      }
      return a;
    }
    case AnsatzKind::sm: {
      StiefelAnsatz a;
      a.rank = rank;
      a.dim = dim;
      CMatrix g = gaussian_matrix(rng, rank * dim, 1);
      a.stacked = g.col(0);
      a.stacked /= a.stacked.norm();
      return a;
    }
    case AnsatzKind::pn: {
      RVector c(rank);
      for (Index i = 0; i < rank; ++i) c(i) = rng.normal();
      CMatrix q = gaussian_matrix(rng, rank, dim);
      return pn_project(c, q);
    }
  }
  throw std::invalid_argument("init_ansatz: unknown kind");
}

AnsatzKind kind_of(const Ansatz& a) {
  if (const auto* cd = std::get_if<CholeskyAnsatz>(&a)) {
    return cd->triangular ? AnsatzKind::cd_tri : AnsatzKind::cd;
  }
  if (std::holds_alternative<StiefelAnsatz>(a)) return AnsatzKind::sm;
  return AnsatzKind::pn;
}

Index rank_of(const Ansatz& a) {
  return std::visit([](const auto& x) { return x.rank; }, a);
}

}  // namespace qst
