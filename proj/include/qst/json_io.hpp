#pragma once

#include <string>

#include <json.hpp>

#include "qst/circuit.hpp"
#include "qst/fermions.hpp"
#include "qst/hamiltonian.hpp"
#include "qst/observables.hpp"
#include "qst/polyfactor.hpp"
#include "qst/robustness.hpp"
#include "qst/tomography.hpp"

// File formats. Complex scalars are [re, im] pairs, matrices are row-major
// arrays of such pairs, and site/mode indices are 1-based (site 1 is the
// most significant mixed-radix digit, matching the in-memory site 0).
namespace qst {

using json = nlohmann::json;

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

/// {"dims":[...], "gates":[{"name":"H","sites":[1]} | {"matrix":[[...]],"sites":[1,2]}]}
Circuit circuit_from_json(const json& j);

/// {"dims":[...], "terms":[{"coeff":0.5, "paulis":"XIZ"}]}
PauliStringHamiltonian hamiltonian_from_json(const json& j);

/// Distinguishes the two register inputs by their top-level keys.
bool looks_like_circuit(const json& j);
bool looks_like_hamiltonian(const json& j);

/// {"dims":[...], "terms":[{"sites":[1,2], "matrix":[[...]]}]}
LocalObservable observable_from_json(const json& j);

/// {"dim":2, "kraus":[[[...]], ...]}
KrausChannel channel_from_json(const json& j);

/// {"modes":N, "terms":[{"coeff":[re,im], "ops":[{"mode":1,"dag":true}, ...]}]}
FermionOperator fermion_operator_from_json(const json& j);

/// Named channel specs such as "dephasing:0.25", "depolarizing:0.1",
/// "bitflip:0.5", "identity:2".
KrausChannel channel_from_spec(const std::string& spec);

/// {"n":2, "dims":[2,2], "monomials":[{"symbols":"xy", "coeff":[1,0]}]};
/// dims defaults to all-2 when omitted.
MultilinearPolynomial polynomial_from_json(const json& j);
json polynomial_to_json(const MultilinearPolynomial& p);

json expectation_report_to_json(const ExpectationReport& r);
json tomography_to_json(const std::vector<int>& sites, const TomographyEstimate& est);
json factor_report_to_json(const FactorReport& r);
json scan_to_json(const ScanResult& r);
json marginal_report_to_json(const MarginalInvarianceReport& r);
json qubit_condition_to_json(const QubitConditionReport& r);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace qst
