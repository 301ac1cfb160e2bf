#include "qst/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "qst/rng.hpp"
#include "qst/states.hpp"

namespace qst {

namespace {

// Dense Pauli matrices are kept only up to this qubit count so that 6- and
// 7-qubit runs never store 4^N matrices; expectation values then run
// operator-free on the permutation-phase structure of Pauli strings.
constexpr int kMaxDenseQubits = 5;

// Single-qubit action of letter a (0=I, 1=X, 2=Y, 3=Z) on basis bit b:
// sigma_a |b> = phase(a, b) |b ^ flips(a)>.
inline bool letter_flips(int a) { return a == 1 || a == 2; }

inline Complex letter_phase(int a, int b) {
  switch (a) {
    case 0:
    case 1:
      return {1.0, 0.0};
    case 2:
      return b ? Complex(0.0, -1.0) : Complex(0.0, 1.0);  // sigma_y
    default:
      return b ? Complex(-1.0, 0.0) : Complex(1.0, 0.0);  // sigma_z
  }
}

}  // namespace

void ObservableSet::pauli_structure(int i, Index& flip, CVector& phase) const {
  const int n = n_qubits_;
  flip = 0;
  phase.resize(1);
  phase(0) = Complex(1.0, 0.0);
  // Qubit 0 is the most significant base-4 digit of i and the most
  // significant bit of the basis index, so the phase vector is extended
  // outermost qubit first.
  Index len = 1;
  for (int q = 0; q < n; ++q) {
    const int a = (i >> (2 * (n - 1 - q))) & 3;
    if (letter_flips(a)) flip |= Index(1) << (n - 1 - q);
    CVector next(2 * len);
    const Complex p0 = letter_phase(a, 0);
    const Complex p1 = letter_phase(a, 1);
    for (Index k = 0; k < len; ++k) {
      next(2 * k) = phase(k) * p0;
      next(2 * k + 1) = phase(k) * p1;
    }
    phase.swap(next);
    len *= 2;
  }
}

CMatrix ObservableSet::op(int i) const {
  if (i < 0 || i >= size_) {
    throw std::invalid_argument("ObservableSet::op: index out of range");
  }
  if (probe_amps_.size() > 0) {
    const auto v = probe_amps_.row(i).transpose();
    return (v * v.adjoint()) / M_PI;
  }
  if (materialized()) return dense_[i];
  // Pauli string as a permutation-phase matrix: Pi |k> = phase(k) |k ^ flip>.
  Index flip = 0;
  CVector phase;
  pauli_structure(i, flip, phase);
  CMatrix m = CMatrix::Zero(dim_, dim_);
  for (Index k = 0; k < dim_; ++k) {
    m(k ^ flip, k) = phase(k);
  }
  return m;
}

Complex ObservableSet::trace_with(int i, const CMatrix& rho) const {
  if (i < 0 || i >= size_) {
    throw std::invalid_argument("ObservableSet::trace_with: index out of range");
  }
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw std::invalid_argument("ObservableSet::trace_with: dimension mismatch");
  }
  if (probe_amps_.size() > 0) {
    // tr((1/pi)|v><v| rho) = <v|rho|v> / pi
    const auto v = probe_amps_.row(i);
    return (v.conjugate() * (rho * v.transpose()))(0, 0) / M_PI;
  }
  if (materialized()) {
    return dense_[i].cwiseProduct(rho.transpose()).sum();
  }
  Index flip = 0;
  CVector phase;
  pauli_structure(i, flip, phase);
  Complex acc(0.0, 0.0);
  for (Index k = 0; k < dim_; ++k) {
    acc += phase(k) * rho(k, k ^ flip);
  }
  return acc;
}

void ObservableSet::add_scaled(int i, Complex w, CMatrix& acc) const {
  if (i < 0 || i >= size_) {
    throw std::invalid_argument("ObservableSet::add_scaled: index out of range");
  }
  if (acc.rows() != dim_ || acc.cols() != dim_) {
    throw std::invalid_argument("ObservableSet::add_scaled: dimension mismatch");
  }
  if (probe_amps_.size() > 0) {
    const auto v = probe_amps_.row(i).transpose();
    acc.noalias() += (w / M_PI) * (v * v.adjoint());
    return;
  }
  if (materialized()) {
    acc.noalias() += w * dense_[i];
    return;
  }
  Index flip = 0;
  CVector phase;
  pauli_structure(i, flip, phase);
  for (Index k = 0; k < dim_; ++k) {
    acc(k ^ flip, k) += w * phase(k);
  }
}

void ObservableSet::apply(int i, const Eigen::Ref<const CMatrix>& m,
                          CMatrix& out) const {
  if (i < 0 || i >= size_) {
    throw std::invalid_argument("ObservableSet::apply: index out of range");
  }
  if (m.rows() != dim_) {
    throw std::invalid_argument("ObservableSet::apply: dimension mismatch");
  }
  out.resize(dim_, m.cols());
  if (probe_amps_.size() > 0) {
    const auto v = probe_amps_.row(i).transpose();
    out.noalias() = v * ((v.adjoint() * m) / M_PI);
    return;
  }
  if (materialized()) {
    out.noalias() = dense_[i] * m;
    return;
  }
  Index flip = 0;
  CVector phase;
  pauli_structure(i, flip, phase);
  for (Index a = 0; a < dim_; ++a) {
    out.row(a) = phase(a ^ flip) * m.row(a ^ flip);
  }
}

const CMatrix& ObservableSet::probe_amplitudes() const {
  if (probe_amps_.size() == 0) {
    throw std::invalid_argument(
        "ObservableSet::probe_amplitudes: not a grid-probe husimi set");
  }
  return probe_amps_;
}

Complex ObservableSet::probe(int i) const {
  if (i < 0 || i >= static_cast<int>(probes_.size())) {
    throw std::invalid_argument("ObservableSet::probe: index out of range");
  }
  return probes_[i];
}

ObservableSet ObservableSet::from_operators(ObservableKind kind, Index dim,
                                            std::vector<CMatrix> ops) {
  if (dim < 1) {
    throw std::invalid_argument("from_operators: dim must be positive");
  }
  if (ops.empty()) {
    throw std::invalid_argument("from_operators: empty operator list");
  }
  for (size_t i = 0; i < ops.size(); ++i) {
    const CMatrix& p = ops[i];
    if (p.rows() != dim || p.cols() != dim) {
      throw std::invalid_argument("from_operators: operator dimension mismatch");
    }
    if (hermiticity_error(p) > 1e-12) {
      throw std::invalid_argument("from_operators: operator not Hermitian");
    }
    if (kind == ObservableKind::husimi_projector) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(p, Eigen::EigenvaluesOnly);
      const RVector& ev = es.eigenvalues();
      const double top = ev(dim - 1);
      if (top <= 0.0 || ev(0) < -1e-10 * std::max(1.0, top)) {
        throw std::invalid_argument("from_operators: projector not PSD");
      }
      if (dim > 1 && ev(dim - 2) > 1e-8 * top) {
        throw std::invalid_argument("from_operators: projector not rank 1");
      }
    }
  }
  ObservableSet set;
  set.kind_ = kind;
  set.dim_ = dim;
  set.size_ = static_cast<int>(ops.size());
  set.dense_ = std::move(ops);
  return set;
}

ObservableSet pauli_set(int n_qubits) {
  if (n_qubits < 1) {
    throw std::invalid_argument("pauli_set: n_qubits must be >= 1");
  }
  if (n_qubits > 14) {
    throw std::invalid_argument("pauli_set: n_qubits too large");
  }
  ObservableSet set;
  set.kind_ = ObservableKind::pauli;
  set.n_qubits_ = n_qubits;
  set.dim_ = Index(1) << n_qubits;
  set.size_ = 1 << (2 * n_qubits);
  if (n_qubits <= kMaxDenseQubits) {
    set.dense_.reserve(set.size_);
    Index flip = 0;
    CVector phase;
    for (int i = 0; i < set.size_; ++i) {
      set.pauli_structure(i, flip, phase);
      CMatrix m = CMatrix::Zero(set.dim_, set.dim_);
      for (Index k = 0; k < set.dim_; ++k) {
        m(k ^ flip, k) = phase(k);
      }
      set.dense_.push_back(std::move(m));
    }
  }
  return set;
}

ObservableSet husimi_set(double extent, int steps, Index dim) {
  if (steps < 2) {
    throw std::invalid_argument("husimi_set: steps must be >= 2");
  }
  if (dim < 2) {
    throw std::invalid_argument("husimi_set: dim must be >= 2");
  }
  if (!(extent > 0.0)) {
    throw std::invalid_argument("husimi_set: extent must be positive");
  }
  ObservableSet set;
  set.kind_ = ObservableKind::husimi_projector;
  set.dim_ = dim;
  set.size_ = steps * steps;
  set.probe_amps_.resize(set.size_, dim);
  set.probes_.reserve(set.size_);
  for (int yi = 0; yi < steps; ++yi) {
    const double y = -extent + 2.0 * extent * yi / (steps - 1);
    for (int xi = 0; xi < steps; ++xi) {
      const double x = -extent + 2.0 * extent * xi / (steps - 1);
      const Complex beta(x, y);
      const int m = yi * steps + xi;
      set.probe_amps_.row(m) = coherent_amplitudes(beta, dim).transpose();
      set.probes_.push_back(beta);
    }
  }
  return set;
}

void validate_dataset(const DataSet& data, const ObservableSet& set) {
  std::set<int> seen;
  for (const auto& e : data.entries) {
    if (e.operator_index < 0 || e.operator_index >= set.size()) {
      throw std::invalid_argument("dataset: operator index out of range");
    }
    if (!seen.insert(e.operator_index).second) {
      throw std::invalid_argument("dataset: duplicate operator index");
    }
  }
}

DataSet measure(const DensityMatrix& rho, const ObservableSet& set) {
  if (rho.dim() != set.dim()) {
    throw std::invalid_argument("measure: dimension mismatch");
  }
  DataSet data;
  data.entries.reserve(set.size());
  for (int i = 0; i < set.size(); ++i) {
    const Complex tr = set.trace_with(i, rho.entries);
    if (std::abs(tr.imag()) > 1e-10) {
      std::ostringstream os;
      os << "measure: imaginary residue " << tr.imag() << " at operator " << i;
      throw ConstraintViolationError(os.str());
    }
    data.entries.push_back({i, tr.real()});
  }
  return data;
}

DensityMatrix depolarize(const DensityMatrix& rho, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("depolarize: eps must be in [0, 1]");
  }
  const Index d = rho.dim();
  CMatrix out = (1.0 - eps) * rho.entries;
  out.diagonal().array() += eps / static_cast<double>(d);
  return DensityMatrix{std::move(out)};
}

DataSet gaussian_noise(const DataSet& data, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("gaussian_noise: sigma must be >= 0");
  }
  Rng rng(seed);
  DataSet out = data;
  for (auto& e : out.entries) {
    e.value += sigma * rng.normal();
  }
  return out;
}

DataSet subsample(const DataSet& data, Index size, std::uint64_t seed,
                  bool keep_identity) {
  if (size < 1 || size > data.size()) {
    throw std::invalid_argument(
        "subsample: size must satisfy 1 <= size <= |data|");
  }
  const Index n = data.size();
  int identity_pos = -1;
  if (keep_identity) {
    for (Index i = 0; i < n; ++i) {
      if (data.entries[i].operator_index == 0) {
        identity_pos = static_cast<int>(i);
        break;
      }
    }
  }
  std::vector<int> pool;
  pool.reserve(n);
  std::vector<int> chosen;
  chosen.reserve(size);
  if (identity_pos >= 0) chosen.push_back(identity_pos);
  for (Index i = 0; i < n; ++i) {
    if (static_cast<int>(i) != identity_pos) pool.push_back(static_cast<int>(i));
  }
  Rng rng(seed);
  const Index want = size - static_cast<Index>(chosen.size());
  for (Index j = 0; j < want; ++j) {
    const Index pick = j + static_cast<Index>(rng.below(pool.size() - j));
    std::swap(pool[j], pool[pick]);
    chosen.push_back(pool[j]);
  }
  std::sort(chosen.begin(), chosen.end());
  DataSet out;
  out.entries.reserve(size);
  for (int pos : chosen) {
    out.entries.push_back(data.entries[pos]);
  }
  return out;
}

}  // namespace qst
