#pragma once

#include <cstdint>
#include <vector>

#include "qst/types.hpp"

namespace qst {

enum class ObservableKind { pauli, husimi_projector };

/// Ordered set of Hermitian measurement operators.
///
/// Pauli sets are ordered lexicographically in the letter string with
/// I < X < Y < Z; the operator index is the base-4 encoding of the string
/// with qubit 0 as the most significant digit, and qubit 0 maps to the most
/// significant bit of the computational-basis index. Dense matrices are
/// materialized up to 5 qubits; beyond that everything runs operator-free
/// on the permutation-phase structure of Pauli strings, so 4^N matrices are
/// never stored.
///
/// Husimi sets hold Pi_m = (1/pi)|beta_m><beta_m| with beta_m on a uniform
/// steps x steps grid (y outer, x inner) and |beta_m> the raw truncated
/// coherent vector, matching the continuum Q function for states supported
/// well inside the truncation.
class ObservableSet {
 public:
  /// Wraps explicit operators; validates Hermiticity (and PSD rank-1 for
  /// husimi_projector kind).
  static ObservableSet from_operators(ObservableKind kind, Index dim,
                                      std::vector<CMatrix> ops);

  Index dim() const { return dim_; }
  int size() const { return size_; }
  ObservableKind kind() const { return kind_; }
  int n_qubits() const { return n_qubits_; }  // pauli sets only, else 0

  bool materialized() const { return !dense_.empty(); }

  /// Dense copy of operator i (synthesized when not materialized).
  CMatrix op(int i) const;

  /// tr(Pi_i rho).
  Complex trace_with(int i, const CMatrix& rho) const;

  /// acc += w * Pi_i.
  void add_scaled(int i, Complex w, CMatrix& acc) const;

  /// out = Pi_i * m (column-wise application); out must not alias m.
  void apply(int i, const Eigen::Ref<const CMatrix>& m, CMatrix& out) const;

  /// True for grid-probe husimi sets built by husimi_set().
  bool has_probe_amplitudes() const { return probe_amps_.size() > 0; }

  /// Probe amplitude matrix (rows = truncated coherent vectors); husimi only.
  const CMatrix& probe_amplitudes() const;
  /// Grid point beta_i; husimi only.
  Complex probe(int i) const;

  friend ObservableSet pauli_set(int n_qubits);
  friend ObservableSet husimi_set(double extent, int steps, Index dim);

 private:
  ObservableSet() = default;

  // Pauli fast path: bit-flip mask and per-index phase vector of string i.
  void pauli_structure(int i, Index& flip, CVector& phase) const;

  ObservableKind kind_ = ObservableKind::pauli;
  Index dim_ = 0;
  int size_ = 0;
  int n_qubits_ = 0;
  std::vector<CMatrix> dense_;
  CMatrix probe_amps_;            // husimi: size x dim
  std::vector<Complex> probes_;   // husimi: grid points
};

/// {I, X, Y, Z}^(tensor n) in lexicographic order, 4^n operators.
ObservableSet pauli_set(int n_qubits);

/// steps^2 scaled coherent-state projectors on [-extent, extent]^2.
ObservableSet husimi_set(double extent, int steps, Index dim);

/// Expectation values paired with operator indices into an ObservableSet.
struct DataSet {
  struct Entry {
    int operator_index;
    double value;
  };
  std::vector<Entry> entries;

  Index size() const { return static_cast<Index>(entries.size()); }
};

/// Checks index uniqueness and range against `set`; throws invalid_argument.
void validate_dataset(const DataSet& data, const ObservableSet& set);

/// B_i = Re tr(Pi_i rho) for every operator in the set.
DataSet measure(const DensityMatrix& rho, const ObservableSet& set);

/// (1 - eps) rho + (eps/d) I.
DensityMatrix depolarize(const DensityMatrix& rho, double eps);

/// Replaces each value by an independent N(value, sigma^2) draw; values are
/// not clipped to physical ranges.
DataSet gaussian_noise(const DataSet& data, double sigma, std::uint64_t seed);

/// Uniform subset without replacement of the requested size. When
/// keep_identity is set and an entry with operator index 0 is present (the
/// all-identity Pauli string), that entry is always included.
DataSet subsample(const DataSet& data, Index size, std::uint64_t seed,
                  bool keep_identity = true);

}  // namespace qst
