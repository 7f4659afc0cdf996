// Command-line front end: loads JSON inputs, runs the expectation,
// tomography, robustness, factoring and error-scaling workflows, and writes
// deterministic JSON reports (plus CSV tables for scans).

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qst/json_io.hpp"

namespace {

using namespace qst;

struct CommonOptions {
  std::string mode = "exact";
  long shots = 10000;
  std::optional<std::uint64_t> seed;
  double tol = 1e-10;
  std::string sign_convention = "paper";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--mode", opt.mode, "exact or sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  cmd->add_option("--shots", opt.shots, "shots per measurement setting");
  cmd->add_option("--seed", opt.seed, "master seed (required in sampled mode)");
  cmd->add_option("--tol", opt.tol, "tolerance for pass/fail style checks");
  cmd->add_option("--sign-convention", opt.sign_convention,
                  "propagator sign: paper = exp(+iHt), physics = exp(-iHt)")
      ->check(CLI::IsMember({"paper", "physics"}));
  cmd->add_option("--out", opt.out, "output report path")->required();
}

ShotBudget budget_of(const CommonOptions& opt) {
  if (opt.mode == "exact") return ShotBudget::exact();
  if (!opt.seed) throw InvalidMode("sampled mode requires --seed");
  return ShotBudget::sampled(opt.shots, *opt.seed);
}

json config_json(const std::string& command, const CommonOptions& opt) {
  json cfg = {{"command", command},
              {"mode", opt.mode},
              {"tol", opt.tol},
              {"sign_convention", opt.sign_convention}};
  if (opt.mode == "sampled") {
    cfg["shots"] = opt.shots;
    cfg["seed"] = *opt.seed;
  }
  return cfg;
}

/// Input registers come either as a circuit or as a Hamiltonian evolved for
/// --time (one exact-propagator gate, or a first-order product formula when
/// --trotter-steps is given).
struct RegisterInput {
  std::string path;
  std::string initial_labels;  // empty = all zeros
  double time = 1.0;
  int trotter_steps = 0;
};

PureState load_state(const RegisterInput& in, const std::string& sign_convention,
                     json* config) {
  const json j = load_json_file(in.path);
  (*config)["inputs"]["register"] = in.path;
  const double sign = sign_convention == "physics" ? -1.0 : 1.0;

  Circuit circuit = [&] {
    if (looks_like_circuit(j)) return circuit_from_json(j);
    if (looks_like_hamiltonian(j)) {
      const PauliStringHamiltonian h = hamiltonian_from_json(j);
      (*config)["inputs"]["time"] = in.time;
      if (in.trotter_steps > 0) {
        (*config)["inputs"]["trotter_steps"] = in.trotter_steps;
        return trotterize(h, sign * in.time, in.trotter_steps);
      }
      std::vector<int> all(static_cast<std::size_t>(h.shape().site_count()));
      for (int s = 0; s < h.shape().site_count(); ++s) all[static_cast<std::size_t>(s)] = s;
      std::vector<Gate> gates;
      gates.push_back({exact_propagator(h, sign * in.time), std::move(all)});
      return Circuit(h.shape(), std::move(gates));
    }
    throw ParseError("input must be a circuit ({dims, gates}) or Hamiltonian ({dims, terms})");
  }();

  std::string labels = in.initial_labels;
  if (labels.empty()) labels.assign(static_cast<std::size_t>(circuit.shape().site_count()), '0');
  (*config)["inputs"]["state"] = labels;
  return apply_circuit(basis_state(circuit.shape(), labels), circuit);
}

std::vector<int> parse_sites(const std::vector<int>& one_based) {
  std::vector<int> sites;
  for (int s : one_based) {
    if (s < 1) throw ParseError("site indices are 1-based");
    sites.push_back(s - 1);
  }
  return sites;
}

int run_expect(const RegisterInput& reg, const std::string& obs_path,
               const std::string& methods, const CommonOptions& opt) {
  json config = config_json("expect", opt);
  const PureState state = load_state(reg, opt.sign_convention, &config);
  config["inputs"]["observable"] = obs_path;
  const LocalObservable obs = observable_from_json(load_json_file(obs_path));

  json results;
  const bool sampled = opt.mode == "sampled";
  auto wants = [&](const std::string& m) {
    return methods == "all" ? (m != "tomo" || sampled) : methods.find(m) != std::string::npos;
  };
  if (wants("direct")) {
    ExpectationReport direct;
    direct.value = expectation_direct(state, obs);
    direct.method = "exact";
    results["direct"] = expectation_report_to_json(direct);
  }
  if (wants("rdm")) results["rdm"] = expectation_report_to_json(expectation_via_rdms(state, obs));
  if (wants("tomo"))
    results["tomographic"] =
        expectation_report_to_json(expectation_tomographic(state, obs, budget_of(opt)));

  write_json_file(opt.out, json{{"config", config}, {"results", results}});
  return 0;
}

int run_tomo(const RegisterInput& reg, const std::vector<int>& sites_one_based,
             const CommonOptions& opt) {
  json config = config_json("tomo", opt);
  const PureState state = load_state(reg, opt.sign_convention, &config);
  const std::vector<int> sites = parse_sites(sites_one_based);
  const TomographyEstimate est = reconstruct_rdm(state, sites, budget_of(opt));
  json report = tomography_to_json(sites, est);
  report["config"] = config;
  write_json_file(opt.out, report);
  return 0;
}

int run_scan(const RegisterInput& reg, const std::vector<int>& sites_one_based,
             const std::string& labels, const std::vector<long>& shot_list, int reps,
             const CommonOptions& opt) {
  json config = config_json("scan", opt);
  if (!opt.seed) throw InvalidMode("scan requires --seed");
  const PureState state = load_state(reg, opt.sign_convention, &config);
  const std::vector<int> sites = parse_sites(sites_one_based);

  std::vector<int> dims;
  for (int s : sites) dims.push_back(state.shape().dim(s));
  if (labels.size() != sites.size()) throw ParseError("--labels needs one character per site");
  SettingLabels setting(labels.size(), 0);
  const std::string alphabet = "IXYZ";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto pos = alphabet.find(labels[i]);
    if (pos == std::string::npos) throw ParseError("labels must be I, X, Y or Z");
    setting[i] = static_cast<int>(pos);
  }

  const ScanResult scan = error_scaling_scan(state, sites, setting_operator(dims, setting),
                                             shot_list, reps, *opt.seed);
  json report = scan_to_json(scan);
  report["config"] = config;
  report["config"]["labels"] = labels;
  report["config"]["repetitions"] = reps;
  write_json_file(opt.out, report);

  std::filesystem::path csv_path(opt.out);
  csv_path.replace_extension(".csv");
  std::ofstream csv(csv_path);
  csv << "shots,std\n";
  for (const ScanPoint& p : scan.points) csv << p.shots << "," << p.empirical_std << "\n";
  return 0;
}

int run_factor(const std::string& poly_path, const std::string& corpus_dir,
               const CommonOptions& opt) {
  json config = config_json("factor", opt);
  const ShotBudget budget = budget_of(opt);
  const double tol = opt.tol;

  if (!corpus_dir.empty()) {
    config["inputs"]["corpus"] = corpus_dir;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir))
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ParseError("no .json polynomials in '" + corpus_dir + "'");

    long checked = 0, agreed = 0;
    json rows = json::array();
    for (const auto& file : files) {
      const MultilinearPolynomial p = polynomial_from_json(load_json_file(file.string()));
      const PureState state = poly_to_state(p);
      json row = {{"file", file.filename().string()}};
      json sites = json::array();
      for (int s = 0; s < p.variable_count(); ++s) {
        const bool detected = detect_linear_factor(state, s, tol, budget).has_value();
        const bool oracle = classical_factor_oracle(p, s).has_value();
        ++checked;
        if (detected == oracle) ++agreed;
        sites.push_back({{"site", s + 1}, {"detected", detected}, {"oracle", oracle}});
      }
      row["sites"] = std::move(sites);
      rows.push_back(std::move(row));
    }
    write_json_file(opt.out, json{{"config", config},
                                  {"instances", files.size()},
                                  {"sites_checked", checked},
                                  {"agreement", static_cast<double>(agreed) / checked},
                                  {"per_instance", rows}});
    return 0;
  }

  if (poly_path.empty()) throw ParseError("factor needs --poly or --corpus");
  config["inputs"]["poly"] = poly_path;
  const MultilinearPolynomial p = polynomial_from_json(load_json_file(poly_path));
  const FactorReport report = factorize_fully(p, tol, budget);
  json out = factor_report_to_json(report);
  out["config"] = config;
  write_json_file(opt.out, out);
  return 0;
}

int run_robust(const std::string& input_path, const std::string& channel_spec,
               const std::vector<int>& on_sites_one_based, const std::string& obs_path,
               const std::string& fixture, double p0, int grid, const CommonOptions& opt) {
  json config = config_json("robust", opt);

  if (!fixture.empty()) {
    if (fixture != "dephasing") throw ParseError("unknown fixture '" + fixture + "'");
    config["inputs"]["fixture"] = fixture;
    config["inputs"]["p0"] = p0;
    config["inputs"]["grid"] = grid;
    const double amp0 = std::sqrt(p0), amp1 = std::sqrt(1.0 - p0);
    Vector ideal_amp = Vector::Zero(4);
    ideal_amp(0) = amp0;
    ideal_amp(3) = amp1;
    const DensityMatrix ideal =
        DensityMatrix::from_pure(PureState(RegisterShape({2, 2}), ideal_amp));
    const double c_max = amp0 * amp1;

    const LocalObservable z_first(RegisterShape({2, 2}), {{{0}, pauli_matrix('Z')}});

    json points = json::array();
    for (int k = 0; k < grid; ++k) {
      const double c = grid == 1 ? 0.0 : c_max * k / (grid - 1);
      const DensityMatrix actual = dephased_pair_state(p0, c);
      const auto marg1 = marginal_invariance_check(ideal, actual, 1, opt.tol);
      const auto rdm = expectation_via_rdms(actual, z_first);
      points.push_back(
          {{"c", c}, {"marginal_distance", marg1.max_distance}, {"sigma_z_site1", rdm.value}});
    }
    write_json_file(opt.out, json{{"config", config}, {"sweep", points}});
    return 0;
  }

  if (input_path.empty() || channel_spec.empty())
    throw ParseError("robust needs --fixture or both --input and --channel");
  const PureState ideal_state = [&] {
    json cfg_probe;
    RegisterInput reg;
    reg.path = input_path;
    return load_state(reg, opt.sign_convention, &cfg_probe);
  }();
  config["inputs"]["register"] = input_path;
  config["inputs"]["channel"] = channel_spec;

  KrausChannel base = [&]() -> KrausChannel {
    if (channel_spec.size() > 5 && channel_spec.ends_with(".json"))
      return channel_from_json(load_json_file(channel_spec));
    return channel_from_spec(channel_spec);
  }();

  const DensityMatrix ideal = DensityMatrix::from_pure(ideal_state);
  DensityMatrix actual = ideal;
  if (static_cast<std::size_t>(base.dim()) == ideal.dim() && on_sites_one_based.empty()) {
    actual = apply_channel(ideal, base);
  } else {
    std::vector<int> sites = parse_sites(on_sites_one_based);
    if (sites.empty()) throw ParseError("a site channel needs --on-sites");
    for (int s : sites) actual = apply_channel(actual, base.embedded(ideal.shape(), {s}));
  }

  const ShotBudget budget = budget_of(opt);
  json report;
  report["marginals"] = {
      {"locality1",
       marginal_report_to_json(marginal_invariance_check(ideal, actual, 1, budget, opt.tol))}};
  if (ideal.shape().site_count() >= 2)
    report["marginals"]["locality2"] =
        marginal_report_to_json(marginal_invariance_check(ideal, actual, 2, budget, opt.tol));

  if (!obs_path.empty()) {
    config["inputs"]["observable"] = obs_path;
    const LocalObservable obs = observable_from_json(load_json_file(obs_path));
    Matrix dense = Matrix::Zero(static_cast<Eigen::Index>(ideal.dim()),
                                static_cast<Eigen::Index>(ideal.dim()));
    for (const ObservableTerm& t : obs.terms())
      dense += embed_block(ideal.shape(), t.block, t.sites);
    const double ideal_value = (dense * ideal.matrix()).trace().real();
    const double actual_value = (dense * actual.matrix()).trace().real();
    report["defect"] = std::abs(ideal_value - actual_value);
  }

  if (base.dim() == 2)
    report["qubit_check"] =
        qubit_condition_to_json(qubit_condition_check(KrausChannel::identity(2), base));

  report["config"] = config;
  write_json_file(opt.out, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Register simulator: expectation values via reduced density matrices, "
               "simulated tomography, channel-invariance checks and polynomial factoring"};
  app.require_subcommand(1);

  // expect
  auto* expect = app.add_subcommand("expect", "expectation value of a local observable");
  RegisterInput expect_reg;
  std::string expect_obs, expect_methods = "all";
  CommonOptions expect_opt;
  expect->add_option("--input", expect_reg.path, "circuit or Hamiltonian JSON")->required();
  expect->add_option("--state", expect_reg.initial_labels, "initial basis labels, default 0...0");
  expect->add_option("--time", expect_reg.time, "evolution time for Hamiltonian input");
  expect->add_option("--trotter-steps", expect_reg.trotter_steps,
                     "use a product formula with this many steps");
  expect->add_option("--observable", expect_obs, "observable JSON")->required();
  expect->add_option("--methods", expect_methods, "comma list of direct,rdm,tomo or all");
  add_common(expect, expect_opt);

  // tomo
  auto* tomo = app.add_subcommand("tomo", "reconstruct a reduced density matrix");
  RegisterInput tomo_reg;
  std::vector<int> tomo_sites;
  CommonOptions tomo_opt;
  tomo->add_option("--input", tomo_reg.path, "circuit or Hamiltonian JSON")->required();
  tomo->add_option("--state", tomo_reg.initial_labels, "initial basis labels");
  tomo->add_option("--time", tomo_reg.time, "evolution time for Hamiltonian input");
  tomo->add_option("--trotter-steps", tomo_reg.trotter_steps, "product-formula steps");
  tomo->add_option("--sites", tomo_sites, "1-based sites to keep")->required()->delimiter(',');
  add_common(tomo, tomo_opt);

  // scan
  auto* scan = app.add_subcommand("scan", "estimator spread vs shot count");
  RegisterInput scan_reg;
  std::vector<int> scan_sites;
  std::vector<long> scan_shots{100, 1000, 10000};
  std::string scan_labels = "Z";
  int scan_reps = 50;
  CommonOptions scan_opt;
  scan->add_option("--input", scan_reg.path, "circuit or Hamiltonian JSON")->required();
  scan->add_option("--state", scan_reg.initial_labels, "initial basis labels");
  scan->add_option("--time", scan_reg.time, "evolution time for Hamiltonian input");
  scan->add_option("--sites", scan_sites, "1-based measured sites")->required()->delimiter(',');
  scan->add_option("--labels", scan_labels, "one Pauli label per site");
  scan->add_option("--shots-list", scan_shots, "ascending shot counts")->delimiter(',');
  scan->add_option("--reps", scan_reps, "repetitions per point");
  add_common(scan, scan_opt);

  // factor
  auto* factor = app.add_subcommand("factor", "detect polynomial factors");
  std::string factor_poly, factor_corpus;
  CommonOptions factor_opt;
  factor->add_option("--poly", factor_poly, "polynomial JSON");
  factor->add_option("--corpus", factor_corpus, "directory of polynomial JSONs");
  add_common(factor, factor_opt);

  // robust
  auto* robust = app.add_subcommand("robust", "channel invariance analysis");
  std::string robust_input, robust_channel, robust_obs, robust_fixture;
  std::vector<int> robust_on_sites;
  double robust_p0 = 0.3;
  int robust_grid = 21;
  CommonOptions robust_opt;
  robust->add_option("--input", robust_input, "ideal circuit or Hamiltonian JSON");
  robust->add_option("--channel", robust_channel, "channel JSON path or name:param spec");
  robust->add_option("--on-sites", robust_on_sites, "apply a site channel on these sites")
      ->delimiter(',');
  robust->add_option("--observable", robust_obs, "observable JSON for the defect");
  robust->add_option("--fixture", robust_fixture, "built-in sweep: dephasing");
  robust->add_option("--p0", robust_p0, "fixture population of |00>");
  robust->add_option("--grid", robust_grid, "fixture sweep points");
  add_common(robust, robust_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (expect->parsed()) return run_expect(expect_reg, expect_obs, expect_methods, expect_opt);
    if (tomo->parsed()) return run_tomo(tomo_reg, tomo_sites, tomo_opt);
    if (scan->parsed())
      return run_scan(scan_reg, scan_sites, scan_labels, scan_shots, scan_reps, scan_opt);
    if (factor->parsed()) return run_factor(factor_poly, factor_corpus, factor_opt);
    if (robust->parsed())
      return run_robust(robust_input, robust_channel, robust_on_sites, robust_obs,
                        robust_fixture, robust_p0, robust_grid, robust_opt);
  } catch (const TooLarge& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return 3;
  } catch (const TooManySites& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return 3;
  } catch (const LocalityCap& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
