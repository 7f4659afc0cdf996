#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qst/basis.hpp"
#include "qst/state.hpp"
#include "qst/tomography.hpp"
#include "qst/types.hpp"

namespace qst {

/// Homogeneous multilinear polynomial: every monomial picks exactly one
/// symbol per site. Keys are digit strings, one digit per site; for
/// two-symbol sites 'x' and 'y' are accepted as aliases for 0 and 1.
/// Coefficients are normalized to a unit vector on construction and the
/// original norm is recorded as scale().
class MultilinearPolynomial {
 public:
  MultilinearPolynomial(std::vector<int> site_dims, std::map<std::string, cplx> coeffs);

  int variable_count() const { return static_cast<int>(site_dims_.size()); }
  const std::vector<int>& site_dims() const { return site_dims_; }
  const std::map<std::string, cplx>& coefficients() const { return coeffs_; }
  double scale() const { return scale_; }

 private:
  struct PrenormalizedTag {};
  MultilinearPolynomial(std::vector<int> site_dims, std::map<std::string, cplx> unit_coeffs,
                        double scale, PrenormalizedTag);
  friend MultilinearPolynomial state_to_poly(const PureState& state, double scale);

  std::vector<int> site_dims_;
  std::map<std::string, cplx> coeffs_;
  double scale_ = 1.0;
};

/// Amplitudes of the corresponding register state are the normalized
/// monomial coefficients (symbol k at site i -> digit k).
PureState poly_to_state(const MultilinearPolynomial& p);

/// Inverse of poly_to_state; `scale` is recorded verbatim.
MultilinearPolynomial state_to_poly(const PureState& state, double scale = 1.0);

/// ax + by factor on one site; coefficients are unit-normalized, first
/// component above the phase threshold made real non-negative.
struct LinearFactor {
  int site = 0;
  Vector coefficients;
};

struct BlockFactor {
  std::vector<int> sites;
  Vector coefficients;
};

/// Rotates a unit vector so its first non-negligible component is real and
/// non-negative.
Vector phase_normalized(Vector v, double threshold = 1e-7);

/// Entropy test on the single-site marginal; below tolerance the factor is
/// the dominant eigenvector of the marginal. With a sampled budget the
/// marginal comes from reconstruct_rdm and the threshold widens to
/// max(tol, 0.05 bits, 5 x the propagated entropy error).
std::optional<LinearFactor> detect_linear_factor(const PureState& state, int site,
                                                 double tol, const ShotBudget& budget);

/// Same test on a pair or triple marginal; the coefficient tensor is the
/// dominant eigenvector over the joint dimension.
std::optional<BlockFactor> detect_block_factor(const PureState& state,
                                               const std::vector<int>& sites, double tol,
                                               const ShotBudget& budget);

struct SeparabilityReport {
  double length_residual = 0.0;  // | |m|^2 - d(d-1)/2 |
  double star_residual = 0.0;    // || d^{rst} m_r m_s - d(d-2) m ||_inf
  bool star_checked = false;     // skipped for d = 2 where the tensor vanishes
  bool passed = false;
};

/// Coherence-vector purity conditions for one qudit: squared length
/// d(d-1)/2 plus, for d > 2, idempotency of the star product in the scaling
/// that makes both conditions together equivalent to Tr(rho^2) = 1.
SeparabilityReport qudit_separability_conditions(const CoherenceVector& m,
                                                 const OperatorBasis& basis, double tol);

struct FactorReport {
  std::vector<LinearFactor> linear_factors;
  std::vector<BlockFactor> block_factors;
  /// Unfactored remainder over residual_sites, absent when fully factored.
  std::optional<MultilinearPolynomial> residual;
  std::vector<int> residual_sites;
  /// Accumulated scalar from the deflations (modulus ~1); together with
  /// scale() it makes the reconstruction of the input exact.
  cplx carry = 1.0;
  bool fully_factored = false;
  std::vector<double> site_entropies;
  double scale = 1.0;
};

/// Extracts every single-site factor (ascending site order), deflating the
/// state after each one, then scans the remaining sites for pair factors.
/// A factor must be a proper subset of the original variables, so a
/// two-variable polynomial is never swallowed whole.
FactorReport factorize_fully(const MultilinearPolynomial& p, double tol,
                             const ShotBudget& budget, int variable_cap = 12);

/// Rank-one test on the coefficient matrix reshaped as (site symbols) x
/// (remaining monomials); on success returns the phase-normalized left
/// singular vector. Independent of any density-matrix machinery.
std::optional<Vector> classical_factor_oracle(const MultilinearPolynomial& p, int site,
                                              double sv_tol = 1e-8);

/// || normalized input - carry * (tensor of factors and residual) ||_2
/// after optimal global-phase alignment; the recorded scale relates both
/// sides to the raw input coefficients.
double reconstruction_error(const FactorReport& report, const MultilinearPolynomial& input);

}  // namespace qst
