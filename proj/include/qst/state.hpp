#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qst/types.hpp"

namespace qst {

/// Dimensions of a register of qudits. Site 0 is the most significant
/// mixed-radix digit of a basis index; file formats number the same sites
/// from 1.
class RegisterShape {
 public:
  explicit RegisterShape(std::vector<int> dims,
                         std::size_t amplitude_cap = kDefaultAmplitudeCap);

  int site_count() const { return static_cast<int>(dims_.size()); }
  int dim(int site) const;
  const std::vector<int>& dims() const { return dims_; }
  std::size_t total_dim() const { return total_; }

  /// Stride of a site's digit in the flat index.
  std::size_t stride(int site) const;

  std::size_t index_of(const std::vector<int>& digits) const;
  std::vector<int> digits_of(std::size_t index) const;
  int digit_at(std::size_t index, int site) const;

  /// Shape of the subregister formed by `sites`, in the given order.
  RegisterShape subshape(const std::vector<int>& sites) const;

  bool operator==(const RegisterShape& other) const {
    return dims_ == other.dims_;
  }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

/// Normalized amplitude vector over a register.
class PureState {
 public:
  /// Freshly constructed states are normalized to machine precision; the
  /// constructor only rejects beyond the gate-unitarity slack, since a
  /// circuit built from blocks that are unitary within 1e-10 may drift the
  /// norm by that much.
  static constexpr double kNormTol = 1e-12;
  static constexpr double kNormSlack = 1e-10;

  PureState(RegisterShape shape, Vector amplitudes);

  /// Normalizes the vector first; rejects (near-)zero input.
  static PureState normalized(RegisterShape shape, Vector amplitudes);

  const RegisterShape& shape() const { return shape_; }
  const Vector& amplitudes() const { return amplitudes_; }
  cplx amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }
  int site_count() const { return shape_.site_count(); }

 private:
  RegisterShape shape_;
  Vector amplitudes_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix over a register of
/// retained sites.
class DensityMatrix {
 public:
  static constexpr double kHermTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigFloor = -1e-10;

  DensityMatrix(RegisterShape shape, Matrix matrix);

  static DensityMatrix from_pure(const PureState& state);

  const RegisterShape& shape() const { return shape_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return shape_.total_dim(); }

 private:
  RegisterShape shape_;
  Matrix matrix_;
};

/// Basis state |labels>, one digit character per site ('0'..'9').
PureState basis_state(const RegisterShape& shape, std::string_view labels);

/// Seeded Gaussian-amplitude random state (Haar for a fixed total dimension).
PureState random_state(const RegisterShape& shape, std::uint64_t seed);

/// Reduced density matrix of the kept sites, in the order given.
DensityMatrix partial_trace(const PureState& state, const std::vector<int>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Entropy in bits, -sum p log2 p over the spectrum (0 log 0 := 0).
double von_neumann_entropy(const DensityMatrix& rho);

double purity(const DensityMatrix& rho);

/// (1/2) ||a - b||_1.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Generic full-rank random state on a single d-dimensional site.
DensityMatrix random_density_matrix(int dim, std::uint64_t seed);

}  // namespace qst
