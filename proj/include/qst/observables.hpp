#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qst/hamiltonian.hpp"
#include "qst/state.hpp"
#include "qst/tomography.hpp"
#include "qst/types.hpp"

namespace qst {

/// One Hermitian block acting on a sorted tuple of distinct sites.
struct ObservableTerm {
  std::vector<int> sites;
  Matrix block;
};

/// Sparse sum of local terms. Locality is the largest tuple length present.
class LocalObservable {
 public:
  static constexpr double kHermTol = 1e-12;

  LocalObservable(RegisterShape shape, std::vector<ObservableTerm> terms);

  const RegisterShape& shape() const { return shape_; }
  const std::vector<ObservableTerm>& terms() const { return terms_; }
  int locality() const { return locality_; }

 private:
  RegisterShape shape_;
  std::vector<ObservableTerm> terms_;
  int locality_ = 0;
};

struct TermContribution {
  std::vector<int> sites;
  double value = 0.0;
};

struct ExpectationReport {
  double value = 0.0;
  std::vector<TermContribution> per_term;
  std::string method;  // "exact" | "rdm" | "tomographic"
  std::optional<long> shots;
  std::optional<double> std_error;
};

/// Brute-force <psi|O|psi>; the reference the other paths are checked
/// against.
double expectation_direct(const PureState& state, const LocalObservable& obs,
                          std::size_t cap = kDefaultOracleCap);

/// Sum of Tr(O(tuple) rho^tuple) over the stored terms, with exact partial
/// traces.
ExpectationReport expectation_via_rdms(const PureState& state, const LocalObservable& obs,
                                       int locality_cap = kDefaultLocalityCap);
ExpectationReport expectation_via_rdms(const DensityMatrix& rho, const LocalObservable& obs,
                                       int locality_cap = kDefaultLocalityCap);

/// Same contraction against tomographically reconstructed states, one
/// reconstruction per distinct site tuple; the standard error is propagated
/// linearly from the independent moment estimators.
ExpectationReport expectation_tomographic(const PureState& state, const LocalObservable& obs,
                                          const ShotBudget& budget,
                                          int locality_cap = kDefaultLocalityCap);

/// Number of measurement settings the tomographic path uses: the sum of
/// prod(d_i^2) - 1 over distinct site tuples.
long setting_count(const LocalObservable& obs);

/// A Pauli-string Hamiltonian as a term-per-string local observable
/// (identity strings become energy shifts carried on site 0).
LocalObservable observable_from_hamiltonian(const PauliStringHamiltonian& h);

}  // namespace qst
