#pragma once

#include <map>
#include <string>
#include <vector>

#include "qst/state.hpp"
#include "qst/types.hpp"

namespace qst {

/// One ladder operator: mode index (0-based; file formats use 1-based) and
/// whether it is the creation operator.
struct LadderOp {
  int mode = 0;
  bool dagger = false;
};

/// A polynomial in fermionic ladder operators: sum of coeff * (ordered
/// product of ladder operators).
class FermionOperator {
 public:
  struct Term {
    cplx coeff;
    std::vector<LadderOp> factors;
  };

  FermionOperator(int mode_count, std::vector<Term> terms);

  int mode_count() const { return mode_count_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  int mode_count_;
  std::vector<Term> terms_;
};

/// Weighted Pauli strings over a qubit register; keys are length-N strings
/// over {I, X, Y, Z}.
using PauliPolynomial = std::map<std::string, cplx>;

/// Ladder-to-string mapping with |1> = occupied: creation on mode j maps to
/// phase * (Z on every earlier mode) * |1><0|_j, where the phase alternates
/// as (-1)^j over 0-based modes. The alternating phase can be switched off;
/// it cancels in any number-conserving product. Products of ladder
/// operators are mapped factor by factor and expanded.
PauliPolynomial jw_map(const FermionOperator& op, bool alternating_phase = true);

/// Dense matrix of a Pauli polynomial on an n-qubit register.
Matrix pauli_polynomial_matrix(const PauliPolynomial& poly, int sites);

struct CarReport {
  int mode_count = 0;
  double max_deviation = 0.0;
  bool passed = false;
};

/// Checks {c_i, c_j+} = delta_ij I and {c_i, c_j} = 0 as dense matrices for
/// all mode pairs (mode_count <= 6).
CarReport validate_car(int mode_count, double tol = 1e-12);

struct OneBodyEnergy {
  std::vector<double> epsilons;
  double value = 0.0;
};

/// sum_i eps_i <n_i> for a qubit register with |1> = occupied. Evaluated
/// through single-site reduced density matrices and, as an internal
/// cross-check, through the direct expectation of sum eps_i (I - Z_i)/2;
/// the two must agree to 1e-12.
OneBodyEnergy onebody_expectation(const PureState& state,
                                  const std::vector<double>& epsilons);

}  // namespace qst
