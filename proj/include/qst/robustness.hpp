#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qst/state.hpp"
#include "qst/tomography.hpp"
#include "qst/types.hpp"

namespace qst {

/// Operator-sum map rho -> sum_i A_i rho A_i+, trace-preserving within
/// kCompletenessTol.
class KrausChannel {
 public:
  static constexpr double kCompletenessTol = 1e-10;

  KrausChannel(int dim, std::vector<Matrix> operators);

  static KrausChannel identity(int dim);
  /// {sqrt(1-p) I, sqrt(p) Z}; p = 1/2 kills the off-diagonals entirely.
  static KrausChannel dephasing(double p);
  static KrausChannel bit_flip(double p);
  static KrausChannel depolarizing(double p);
  static KrausChannel unitary(Matrix u);

  int dim() const { return dim_; }
  const std::vector<Matrix>& operators() const { return ops_; }

  /// Lifts each operator onto the given sites of a larger register.
  KrausChannel embedded(const RegisterShape& shape, const std::vector<int>& sites) const;

 private:
  int dim_;
  std::vector<Matrix> ops_;
};

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch);

/// Heisenberg dual: O -> sum_i A_i+ O A_i.
Matrix adjoint_map(const Matrix& obs, const KrausChannel& ch);

/// |Tr(O a(rho)) - Tr(O b(rho))|; zero iff the channels are
/// expectation-equivalent on this (O, rho) pair.
double invariance_defect(const Matrix& obs, const DensityMatrix& rho,
                         const KrausChannel& a, const KrausChannel& b);

struct MarginalInvarianceReport {
  int locality = 1;
  double max_distance = 0.0;
  bool passed = false;
  long constraint_count = 0;
  std::vector<std::pair<std::vector<int>, double>> distances;
};

/// Compares all single-site (locality 1) or pair (locality 2) marginals of
/// the two states by trace distance. The constraint count is the number of
/// independent real components fixed by the comparison: sum(d_i^2 - 1)
/// over sites, or sum(d_i^2 d_j^2 - 1) over pairs.
MarginalInvarianceReport marginal_invariance_check(const DensityMatrix& ideal,
                                                   const DensityMatrix& actual,
                                                   int locality, double tol = 1e-10);

/// Same comparison from finite-shot tomography of both states. Each basis
/// moment of each marginal is estimated on both sides and the check passes
/// when every difference stays within max(tol, 5 x the combined standard
/// error); the trace distances of the reconstructions are reported
/// alongside. Trace distance itself is not smooth at zero, so the
/// moment-wise test is the statistically meaningful one under sampling
/// noise.
MarginalInvarianceReport marginal_invariance_check(const DensityMatrix& ideal,
                                                   const DensityMatrix& actual,
                                                   int locality, const ShotBudget& budget,
                                                   double tol = 1e-10);

/// A = alpha I + a . sigma for a 2x2 operator; alpha and a are complex.
struct PauliAffineForm {
  cplx alpha;
  Eigen::Vector3cd a;

  static PauliAffineForm decompose(const Matrix& op);
  Matrix recompose() const;
};

/// Residuals of the trace-preservation identities in affine form:
/// sum(|alpha|^2 + a.a*) = 1 and sum(alpha a_t* + alpha* a_t + i(a x a*)_t) = 0.
std::pair<double, double> completeness_residuals(const KrausChannel& ch);

/// Expectation-invariance analysis of two qubit channels on O = sigma_z and
/// rho = |0><0|, in affine Kraus coordinates A_i = alpha_i I + a_i . sigma.
///
/// The Heisenberg image sum_i A_i+ sigma_z A_i = c0 I + c . sigma gives
/// <O> = c0 + c3, so the signed defect decomposes exactly into the
/// identity-component difference (c0 = sum i(a x a*)_3 + alpha a3* +
/// alpha* a3, which trace preservation reduces to 2 sum i(a x a*)_3) plus
/// the sigma_z-component difference (c3 = sum |alpha|^2 - |a1|^2 - |a2|^2
/// + |a3|^2). combined = identity_part + z_part therefore reproduces the
/// signed defect, and twice the survival equation (the difference of
/// sum |alpha + a3|^2, the |0> survival probabilities) does as well. The
/// cross equation is reported as displayed; it coincides with the defect
/// exactly when the conjugation asymmetry sum i(a x a*)_3 vanishes, e.g.
/// for channels with real affine coordinates.
struct QubitConditionReport {
  double defect = 0.0;      // |<O>_a - <O>_b|
  double identity_part = 0.0;
  double z_part = 0.0;
  double combined = 0.0;    // identity_part + z_part, signed
  double eq_cross = 0.0;
  double eq_survival = 0.0; // half the signed defect
  bool consistent = false;
};

QubitConditionReport qubit_condition_check(const KrausChannel& a, const KrausChannel& b);

struct LittleGroupReport {
  std::vector<std::pair<double, double>> defects;  // (angle, defect)
  double max_defect = 0.0;
};

/// Probes unitary rotations exp(i theta G / ||G||) against the identity
/// channel; rotations generated by the observable itself leave its
/// expectation invariant for every angle.
LittleGroupReport little_group_probe(const Matrix& obs, const DensityMatrix& rho,
                                     const Matrix& generator,
                                     const std::vector<double>& angles);

/// Two-qubit state p0|00><00| + (1-p0)|11><11| + c|00><11| + c*|11><00|;
/// any admissible c leaves both single-site marginals diag(p0, 1-p0).
DensityMatrix dephased_pair_state(double p0, cplx c);

/// Seeded random trace-preserving channel with `kraus_count` operators.
KrausChannel random_channel(int dim, int kraus_count, std::uint64_t seed);

/// Coherence vectors of three single-subsystem marginals (system under
/// study, rest of system, environment) plus an observable direction on the
/// first; alignment() = n . a is proportional to the expectation of n . L
/// on that subsystem (factor 2/d_A), so equal alignments mean equal
/// expectations.
struct TripartiteBlochForm {
  RealVector a, b, c;
  RealVector n;

  static TripartiteBlochForm extract(const DensityMatrix& rho,
                                     const std::vector<int>& sites_a,
                                     const std::vector<int>& sites_b,
                                     const std::vector<int>& sites_e, RealVector n);
  double alignment() const;
};

}  // namespace qst
