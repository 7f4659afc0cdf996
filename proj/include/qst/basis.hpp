#pragma once

#include <vector>

#include "qst/state.hpp"
#include "qst/types.hpp"

namespace qst {

/// Traceless Hermitian operator basis for one d-level site, normalized so
/// that Tr(L_r L_t) = 2 delta_rt, together with the symmetric structure
/// tensor d^{rst} = (d/4) Tr({L_r, L_s} L_t).
///
/// Ordering: symmetric off-diagonal pairs, then antisymmetric pairs, both
/// lexicographic in (row, col), then the d-1 diagonal matrices. For d = 2
/// this is exactly (sigma_x, sigma_y, sigma_z).
class OperatorBasis {
 public:
  static OperatorBasis gellmann(int d);

  int dim() const { return d_; }
  int size() const { return static_cast<int>(ops_.size()); }
  const Matrix& op(int r) const { return ops_.at(static_cast<std::size_t>(r)); }
  const std::vector<Matrix>& ops() const { return ops_; }

  double star(int r, int s, int t) const;
  const std::vector<double>& star_coeffs() const { return star_; }

 private:
  OperatorBasis(int d, std::vector<Matrix> ops, std::vector<double> star);

  int d_;
  std::vector<Matrix> ops_;
  std::vector<double> star_;  // flattened (d^2-1)^3, index ((r*n)+s)*n+t
};

OperatorBasis gellmann_basis(int d);

/// Real expansion coefficients m of rho = (1/d)(I + m . L).
class CoherenceVector {
 public:
  CoherenceVector(int dim, RealVector components);

  int dim() const { return d_; }
  const RealVector& components() const { return m_; }
  double squared_length() const { return m_.squaredNorm(); }

 private:
  int d_;
  RealVector m_;
};

/// m_r = (d/2) Tr(rho L_r).
CoherenceVector bloch_decompose(const DensityMatrix& rho, const OperatorBasis& basis);

/// (1/d)(I + m . L); inverse of bloch_decompose for valid inputs.
Matrix matrix_from_coherence(const CoherenceVector& m, const OperatorBasis& basis);

/// The single-qubit Pauli matrix for c in {'I','X','Y','Z'}.
Matrix pauli_matrix(char c);

/// a (x) b, with a's index the more significant one. Accumulating factors
/// in site order therefore keeps site 0 most significant, matching
/// RegisterShape indexing.
Matrix tensor_product(const Matrix& a, const Matrix& b);

}  // namespace qst
