#pragma once

#include <string>
#include <vector>

#include "qst/circuit.hpp"
#include "qst/state.hpp"
#include "qst/types.hpp"

namespace qst {

/// One weighted Pauli string, e.g. 0.5 * "XIZ".
struct PauliTerm {
  double coeff = 0.0;
  std::string paulis;
};

/// H = sum_k c_k P_k over a qubit register. Term count is validated against
/// a configurable bound so accidental exponential constructions fail fast.
class PauliStringHamiltonian {
 public:
  PauliStringHamiltonian(RegisterShape shape, std::vector<PauliTerm> terms,
                         std::size_t max_terms = 10000);

  const RegisterShape& shape() const { return shape_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

 private:
  RegisterShape shape_;
  std::vector<PauliTerm> terms_;
};

Matrix dense_hamiltonian(const PauliStringHamiltonian& h,
                         std::size_t cap = kDefaultOracleCap);

/// U(t) = exp(+i H t), the sign as used throughout this library; pass
/// negative t for the opposite convention.
Matrix exact_propagator(const PauliStringHamiltonian& h, double t,
                        std::size_t cap = kDefaultOracleCap);

/// First-order product formula: (prod_k exp(i c_k P_k t/steps))^steps, one
/// gate per term per step, each acting on the term's non-identity sites.
Circuit trotterize(const PauliStringHamiltonian& h, double t, int steps);

}  // namespace qst
