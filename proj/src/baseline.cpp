#include "qst/baseline.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace qst {

SensingMatrix build_sensing(const ObservableSet& set) {
  const Index d = set.dim();
  CMatrix a(set.size(), d * d);
  for (int m = 0; m < set.size(); ++m) {
    const CMatrix p = set.op(m);
    // A_{m, i*d + j} = tr(Pi_m |i><j|) = <j| Pi_m |i>
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        a(m, i * d + j) = p(j, i);
      }
    }
  }
  return SensingMatrix{std::move(a)};
}

CMatrix linear_inversion(const DataSet& data, const ObservableSet& set) {
  validate_dataset(data, set);
  if (data.entries.empty()) {
    throw std::invalid_argument("linear_inversion: empty dataset");
  }
  const Index d = set.dim();
  const Index rows = data.size();
  CMatrix a(rows, d * d);
  CVector b(rows);
  for (Index r = 0; r < rows; ++r) {
    const auto& e = data.entries[r];
    const CMatrix p = set.op(e.operator_index);
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        a(r, i * d + j) = p(j, i);
      }
    }
    b(r) = Complex(e.value, 0.0);
  }
  Eigen::ColPivHouseholderQR<CMatrix> qr(a);
  if (qr.rank() < d * d) {
    std::ostringstream os;
    os << "linear_inversion: informationally incomplete data (numerical rank "
       << qr.rank() << " of " << d * d << ")";
    throw IncompleteDataError(os.str(), qr.rank());
  }
  const CVector x = qr.solve(b);
  CMatrix rho(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      rho(i, j) = x(i * d + j);
    }
  }
  return (rho + rho.adjoint()) / 2.0;
}

namespace {

// Predicted probabilities tr(P_j rho) for every entry; uses one matrix
// product over the probe-amplitude matrix when available.
RVector predicted_values(const DataSet& data, const ObservableSet& set,
                         const CMatrix& rho) {
  RVector p(data.size());
  if (set.has_probe_amplitudes() && data.size() > 32) {
    const CMatrix& amps = set.probe_amplitudes();
    const CMatrix prod = amps.conjugate() * rho;  // size x dim
    for (Index r = 0; r < data.size(); ++r) {
      const int j = data.entries[r].operator_index;
      p(r) = (prod.row(j) * amps.row(j).transpose())(0, 0).real() / M_PI;
    }
    return p;
  }
  for (Index r = 0; r < data.size(); ++r) {
    p(r) = set.trace_with(data.entries[r].operator_index, rho).real();
  }
  return p;
}

double log_likelihood(const DataSet& data, const RVector& predicted) {
  double ll = 0.0;
  for (Index r = 0; r < data.size(); ++r) {
    const double bj = data.entries[r].value;
    if (bj > 0.0 && predicted(r) > 0.0) {
      ll += bj * std::log(predicted(r));
    }
  }
  return ll;
}

CMatrix iterate_impl(const CMatrix& rho, const DataSet& data,
                     const ObservableSet& set, const RVector& predicted,
                     int* skipped) {
  const Index d = rho.rows();
  CMatrix r_op = CMatrix::Zero(d, d);
  if (set.has_probe_amplitudes()) {
    // R = A^T diag(w/pi) conj(A) over the probe-amplitude matrix.
    const CMatrix& amps = set.probe_amplitudes();
    RVector w = RVector::Zero(set.size());
    for (Index r = 0; r < data.size(); ++r) {
      const auto& e = data.entries[r];
      const double p = predicted(r);
      if (p < 1e-300) {
        if (e.value > 0.0 && skipped) ++(*skipped);
        continue;
      }
      w(e.operator_index) = e.value / p / M_PI;
    }
    const CMatrix scaled = w.asDiagonal() * amps.conjugate();
    r_op.noalias() = amps.transpose() * scaled;
  } else {
    for (Index r = 0; r < data.size(); ++r) {
      const auto& e = data.entries[r];
      const double p = predicted(r);
      if (p < 1e-300) {
        if (e.value > 0.0 && skipped) ++(*skipped);
        continue;
      }
      set.add_scaled(e.operator_index, Complex(e.value / p, 0.0), r_op);
    }
  }
  CMatrix next = r_op * rho * r_op;
  next = (next + next.adjoint()) / 2.0;
  const double tr = next.trace().real();
  if (!(tr > 0.0)) {
    throw NumericalSupportError("imle: update collapsed to zero trace");
  }
  return next / tr;
}

}  // namespace

CMatrix imle_iterate(const CMatrix& rho, const DataSet& data,
                     const ObservableSet& set) {
  const RVector p = predicted_values(data, set, rho);
  int skipped = 0;
  CMatrix next = iterate_impl(rho, data, set, p, &skipped);
  if (skipped > 0) {
    std::cerr << "warning: imle skipped " << skipped
              << " data term(s) with vanishing predicted probability\n";
  }
  return next;
}

DensityMatrix imle(const DataSet& data, const ObservableSet& set,
                   int max_iters, double tol) {
  if (set.kind() != ObservableKind::husimi_projector) {
    throw std::invalid_argument(
        "imle: requires a projector-valued (husimi) operator set");
  }
  if (max_iters < 1 || !(tol > 0.0)) {
    throw std::invalid_argument("imle: need max_iters >= 1 and tol > 0");
  }
  validate_dataset(data, set);
  for (const auto& e : data.entries) {
    if (e.value < 0.0) {
      throw std::invalid_argument("imle: data values must be nonnegative");
    }
  }
  const Index d = set.dim();
  CMatrix rho = CMatrix::Identity(d, d) / static_cast<double>(d);
  double prev_ll = -std::numeric_limits<double>::infinity();
  int skipped = 0;
  for (int t = 0; t < max_iters; ++t) {
    const RVector p = predicted_values(data, set, rho);
    const CMatrix next = iterate_impl(rho, data, set, p, &skipped);
    const double ll = log_likelihood(data, predicted_values(data, set, next));
    if (ll + 1e-9 < prev_ll) {
      std::ostringstream os;
      os << "imle: log-likelihood decreased from " << prev_ll << " to " << ll
         << " at iteration " << t + 1;
      throw NumericalSupportError(os.str());
    }
    prev_ll = ll;
    const double delta = (next - rho).norm();
    rho = next;
    if (delta < tol) break;
  }
  if (skipped > 0) {
    std::cerr << "warning: imle skipped " << skipped
              << " data term(s) with vanishing predicted probability\n";
  }
  return make_density(rho);
}

}  // namespace qst
