#include "qst/json_io.hpp"

#include <fstream>

namespace qst {

namespace {

cplx complex_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw ParseError("expected a number or an [re, im] pair");
}

json complex_to_json(const cplx& c) { return json::array({c.real(), c.imag()}); }

std::vector<int> dims_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("\"dims\" must be a non-empty array");
  std::vector<int> dims;
  for (const auto& d : j) {
    if (!d.is_number_integer()) throw ParseError("\"dims\" entries must be integers");
    dims.push_back(d.get<int>());
  }
  return dims;
}

// File formats number sites from 1.
std::vector<int> sites_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("\"sites\" must be a non-empty array");
  std::vector<int> sites;
  for (const auto& s : j) {
    if (!s.is_number_integer() || s.get<int>() < 1)
      throw ParseError("\"sites\" entries must be positive integers");
    sites.push_back(s.get<int>() - 1);
  }
  return sites;
}

json sites_to_json(const std::vector<int>& sites) {
  json out = json::array();
  for (int s : sites) out.push_back(s + 1);
  return out;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw ParseError("matrix rows have inconsistent lengths");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

Circuit circuit_from_json(const json& j) {
  if (!j.contains("dims")) throw ParseError("circuit needs \"dims\"");
  RegisterShape shape(dims_from_json(j.at("dims")));
  std::vector<Gate> gates;
  for (const auto& g : j.value("gates", json::array())) {
    if (!g.contains("sites")) throw ParseError("gate needs \"sites\"");
    std::vector<int> sites = sites_from_json(g.at("sites"));
    Matrix block;
    if (g.contains("name"))
      block = named_gate(g.at("name").get<std::string>());
    else if (g.contains("matrix"))
      block = matrix_from_json(g.at("matrix"));
    else
      throw ParseError("gate needs \"name\" or \"matrix\"");
    gates.push_back({std::move(block), std::move(sites)});
  }
  return Circuit(std::move(shape), std::move(gates));
}

PauliStringHamiltonian hamiltonian_from_json(const json& j) {
  if (!j.contains("dims")) throw ParseError("Hamiltonian needs \"dims\"");
  RegisterShape shape(dims_from_json(j.at("dims")));
  std::vector<PauliTerm> terms;
  for (const auto& t : j.value("terms", json::array())) {
    if (!t.contains("coeff") || !t.contains("paulis"))
      throw ParseError("Hamiltonian term needs \"coeff\" and \"paulis\"");
    terms.push_back({t.at("coeff").get<double>(), t.at("paulis").get<std::string>()});
  }
  return PauliStringHamiltonian(std::move(shape), std::move(terms));
}

bool looks_like_circuit(const json& j) { return j.contains("dims") && j.contains("gates"); }

bool looks_like_hamiltonian(const json& j) {
  return j.contains("dims") && j.contains("terms");
}

LocalObservable observable_from_json(const json& j) {
  if (!j.contains("dims")) throw ParseError("observable needs \"dims\"");
  RegisterShape shape(dims_from_json(j.at("dims")));
  std::vector<ObservableTerm> terms;
  for (const auto& t : j.value("terms", json::array())) {
    if (!t.contains("sites") || !t.contains("matrix"))
      throw ParseError("observable term needs \"sites\" and \"matrix\"");
    terms.push_back({sites_from_json(t.at("sites")), matrix_from_json(t.at("matrix"))});
  }
  return LocalObservable(std::move(shape), std::move(terms));
}

KrausChannel channel_from_json(const json& j) {
  if (!j.contains("dim") || !j.contains("kraus"))
    throw ParseError("channel needs \"dim\" and \"kraus\"");
  const int dim = j.at("dim").get<int>();
  std::vector<Matrix> ops;
  for (const auto& k : j.at("kraus")) ops.push_back(matrix_from_json(k));
  return KrausChannel(dim, std::move(ops));
}

FermionOperator fermion_operator_from_json(const json& j) {
  if (!j.contains("modes")) throw ParseError("fermion operator needs \"modes\"");
  const int modes = j.at("modes").get<int>();
  std::vector<FermionOperator::Term> terms;
  for (const auto& t : j.value("terms", json::array())) {
    if (!t.contains("coeff") || !t.contains("ops"))
      throw ParseError("fermion term needs \"coeff\" and \"ops\"");
    FermionOperator::Term term;
    term.coeff = complex_from_json(t.at("coeff"));
    for (const auto& op : t.at("ops")) {
      if (!op.contains("mode")) throw ParseError("ladder operator needs \"mode\"");
      const int mode = op.at("mode").get<int>();
      if (mode < 1) throw ParseError("mode indices are 1-based");
      term.factors.push_back({mode - 1, op.value("dag", false)});
    }
    terms.push_back(std::move(term));
  }
  return FermionOperator(modes, std::move(terms));
}

KrausChannel channel_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (name == "dephasing") return KrausChannel::dephasing(std::stod(arg));
    if (name == "bitflip") return KrausChannel::bit_flip(std::stod(arg));
    if (name == "depolarizing") return KrausChannel::depolarizing(std::stod(arg));
    if (name == "identity") return KrausChannel::identity(arg.empty() ? 2 : std::stoi(arg));
  } catch (const std::invalid_argument&) {
    throw ParseError("bad channel parameter in '" + spec + "'");
  }
  throw ParseError("unknown channel spec '" + spec + "'");
}

MultilinearPolynomial polynomial_from_json(const json& j) {
  if (!j.contains("monomials")) throw ParseError("polynomial needs \"monomials\"");
  std::vector<int> dims;
  if (j.contains("dims")) {
    dims = dims_from_json(j.at("dims"));
  } else if (j.contains("n")) {
    dims.assign(j.at("n").get<std::size_t>(), 2);
  } else {
    throw ParseError("polynomial needs \"dims\" or \"n\"");
  }
  std::map<std::string, cplx> coeffs;
  for (const auto& m : j.at("monomials")) {
    if (!m.contains("symbols") || !m.contains("coeff"))
      throw ParseError("monomial needs \"symbols\" and \"coeff\"");
    coeffs[m.at("symbols").get<std::string>()] += complex_from_json(m.at("coeff"));
  }
  return MultilinearPolynomial(std::move(dims), std::move(coeffs));
}

json polynomial_to_json(const MultilinearPolynomial& p) {
  const bool qubit_only =
      std::all_of(p.site_dims().begin(), p.site_dims().end(), [](int d) { return d == 2; });
  json monomials = json::array();
  for (const auto& [key, c] : p.coefficients()) {
    std::string symbols = key;
    if (qubit_only)
      for (char& ch : symbols) ch = ch == '0' ? 'x' : 'y';
    monomials.push_back({{"symbols", symbols}, {"coeff", complex_to_json(c)}});
  }
  return {{"n", p.variable_count()},
          {"dims", p.site_dims()},
          {"scale", p.scale()},
          {"monomials", std::move(monomials)}};
}

json expectation_report_to_json(const ExpectationReport& r) {
  json per_term = json::array();
  for (const TermContribution& t : r.per_term)
    per_term.push_back({{"sites", sites_to_json(t.sites)}, {"value", t.value}});
  json out = {{"value", r.value}, {"method", r.method}, {"per_term", std::move(per_term)}};
  if (r.shots) out["shots"] = *r.shots;
  if (r.std_error) out["stderr"] = *r.std_error;
  return out;
}

json tomography_to_json(const std::vector<int>& sites, const TomographyEstimate& est) {
  json moments = json::array();
  for (const MomentEstimate& m : est.raw_moments)
    moments.push_back({{"label", m.label}, {"est", m.estimate}, {"stderr", m.std_error}});
  const long per_setting =
      est.raw_moments.empty() ? 0
                              : est.shots_used / static_cast<long>(est.raw_moments.size());
  return {{"sites", sites_to_json(sites)},
          {"moments", std::move(moments)},
          {"rho_hat", matrix_to_json(est.rho_hat.matrix())},
          {"shots", per_setting},
          {"shots_total", est.shots_used}};
}

json factor_report_to_json(const FactorReport& r) {
  json linear = json::array();
  for (const LinearFactor& f : r.linear_factors) {
    json coeffs = json::array();
    for (Eigen::Index k = 0; k < f.coefficients.size(); ++k)
      coeffs.push_back(complex_to_json(f.coefficients(k)));
    linear.push_back({{"site", f.site + 1}, {"coefficients", std::move(coeffs)}});
  }
  json blocks = json::array();
  for (const BlockFactor& f : r.block_factors) {
    json coeffs = json::array();
    for (Eigen::Index k = 0; k < f.coefficients.size(); ++k)
      coeffs.push_back(complex_to_json(f.coefficients(k)));
    blocks.push_back({{"sites", sites_to_json(f.sites)}, {"coefficients", std::move(coeffs)}});
  }
  json out = {{"linear_factors", std::move(linear)},
              {"block_factors", std::move(blocks)},
              {"fully_factored", r.fully_factored},
              {"entropies", r.site_entropies},
              {"carry", complex_to_json(r.carry)},
              {"scale", r.scale}};
  if (r.residual) {
    out["residual"] = polynomial_to_json(*r.residual);
    out["residual_sites"] = sites_to_json(r.residual_sites);
  } else {
    out["residual"] = "fully factored";
  }
  return out;
}

json scan_to_json(const ScanResult& r) {
  json points = json::array();
  for (const ScanPoint& p : r.points)
    points.push_back({{"shots", p.shots}, {"std", p.empirical_std}});
  json out = {{"points", std::move(points)}};
  if (r.slope)
    out["slope"] = *r.slope;
  else
    out["slope"] = nullptr;
  return out;
}

json marginal_report_to_json(const MarginalInvarianceReport& r) {
  json distances = json::array();
  for (const auto& [sites, d] : r.distances)
    distances.push_back({{"sites", sites_to_json(sites)}, {"distance", d}});
  return {{"locality", r.locality},
          {"max_distance", r.max_distance},
          {"passed", r.passed},
          {"constraints", r.constraint_count},
          {"distances", std::move(distances)}};
}

json qubit_condition_to_json(const QubitConditionReport& r) {
  return {{"defect", r.defect},
          {"identity_part", r.identity_part},
          {"z_part", r.z_part},
          {"combined", r.combined},
          {"eq_cross", r.eq_cross},
          {"eq_survival", r.eq_survival},
          {"consistent", r.consistent}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON in '" + path + "': " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace qst
