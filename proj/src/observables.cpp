#include "qst/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qst/basis.hpp"
#include "qst/circuit.hpp"

namespace qst {

LocalObservable::LocalObservable(RegisterShape shape, std::vector<ObservableTerm> terms)
    : shape_(std::move(shape)), terms_(std::move(terms)) {
  for (const ObservableTerm& t : terms_) {
    if (t.sites.empty()) throw InvalidSites("observable term must act on at least one site");
    if (!std::is_sorted(t.sites.begin(), t.sites.end()) ||
        std::adjacent_find(t.sites.begin(), t.sites.end()) != t.sites.end())
      throw InvalidSites("observable site tuples must be sorted and distinct");
    if (t.sites.front() < 0 || t.sites.back() >= shape_.site_count())
      throw InvalidSites("observable site out of range");
    std::size_t d = 1;
    for (int s : t.sites) d *= static_cast<std::size_t>(shape_.dim(s));
    if (t.block.rows() != static_cast<Eigen::Index>(d) ||
        t.block.cols() != static_cast<Eigen::Index>(d))
      throw ShapeError("observable block dimension does not match its site tuple");
    if ((t.block - t.block.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
      throw ShapeError("observable blocks must be Hermitian");
    locality_ = std::max(locality_, static_cast<int>(t.sites.size()));
  }
}

double expectation_direct(const PureState& state, const LocalObservable& obs,
                          std::size_t cap) {
  if (!(state.shape() == obs.shape()))
    throw ShapeError("state and observable register shapes differ");
  if (state.shape().total_dim() > cap)
    throw TooLarge("register too large for the direct expectation path");
  cplx acc = 0.0;
  for (const ObservableTerm& t : obs.terms()) {
    const Vector image = apply_block(state.shape(), state.amplitudes(), t.block, t.sites);
    acc += state.amplitudes().dot(image);  // dot conjugates the left argument
  }
  if (std::abs(acc.imag()) > 1e-10)
    throw ShapeError("expectation has a non-Hermitian imaginary residue");
  return acc.real();
}

namespace {

template <typename Source>
ExpectationReport rdm_report(const Source& src, const LocalObservable& obs,
                             int locality_cap) {
  if (obs.locality() > locality_cap)
    throw LocalityCap("observable locality " + std::to_string(obs.locality()) +
                      " exceeds the cap of " + std::to_string(locality_cap));
  ExpectationReport report;
  report.method = "rdm";
  for (const ObservableTerm& t : obs.terms()) {
    const DensityMatrix rdm = partial_trace(src, t.sites);
    const double v = (t.block * rdm.matrix()).trace().real();
    report.per_term.push_back({t.sites, v});
    report.value += v;
  }
  return report;
}

}  // namespace

ExpectationReport expectation_via_rdms(const PureState& state, const LocalObservable& obs,
                                       int locality_cap) {
  if (!(state.shape() == obs.shape()))
    throw ShapeError("state and observable register shapes differ");
  return rdm_report(state, obs, locality_cap);
}

ExpectationReport expectation_via_rdms(const DensityMatrix& rho, const LocalObservable& obs,
                                       int locality_cap) {
  if (!(rho.shape() == obs.shape()))
    throw ShapeError("state and observable register shapes differ");
  return rdm_report(rho, obs, locality_cap);
}

ExpectationReport expectation_tomographic(const PureState& state, const LocalObservable& obs,
                                          const ShotBudget& budget, int locality_cap) {
  if (!(state.shape() == obs.shape()))
    throw ShapeError("state and observable register shapes differ");
  if (obs.locality() > locality_cap)
    throw LocalityCap("observable locality " + std::to_string(obs.locality()) +
                      " exceeds the cap of " + std::to_string(locality_cap));

  // One reconstruction per distinct site tuple; terms sharing a tuple are
  // contracted against the same estimate.
  std::map<std::vector<int>, std::vector<const ObservableTerm*>> by_tuple;
  for (const ObservableTerm& t : obs.terms()) by_tuple[t.sites].push_back(&t);

  ExpectationReport report;
  report.method = "tomographic";
  long total_shots = 0;
  double variance = 0.0;
  std::map<const ObservableTerm*, double> term_values;

  for (const auto& [sites, terms] : by_tuple) {
    const TomographyEstimate est = reconstruct_rdm(state, sites, budget);
    total_shots += est.shots_used;
    Matrix combined = Matrix::Zero(est.raw_inversion.rows(), est.raw_inversion.cols());
    for (const ObservableTerm* t : terms) {
      term_values[t] = (t->block * est.raw_inversion).trace().real();
      combined += t->block;
    }
    if (!budget.is_exact()) {
      std::vector<int> dims;
      for (int s : sites) dims.push_back(state.shape().dim(s));
      for (const MomentEstimate& m : est.raw_moments) {
        const Matrix op = setting_operator(dims, m.labels);
        double op_norm = 1.0;
        for (std::size_t i = 0; i < dims.size(); ++i)
          op_norm *= m.labels[i] == 0 ? static_cast<double>(dims[i]) : 2.0;
        const double weight = (combined * op).trace().real() / op_norm;
        variance += weight * weight * m.std_error * m.std_error;
      }
    }
  }

  for (const ObservableTerm& t : obs.terms()) {
    const double v = term_values.at(&t);
    report.per_term.push_back({t.sites, v});
    report.value += v;
  }
  if (!budget.is_exact()) {
    report.shots = total_shots;
    report.std_error = std::sqrt(variance);
  }
  return report;
}

long setting_count(const LocalObservable& obs) {
  std::map<std::vector<int>, bool> tuples;
  for (const ObservableTerm& t : obs.terms()) tuples[t.sites] = true;
  long count = 0;
  for (const auto& [sites, unused] : tuples) {
    (void)unused;
    long prod = 1;
    for (int s : sites) prod *= static_cast<long>(obs.shape().dim(s)) * obs.shape().dim(s);
    count += prod - 1;
  }
  return count;
}

LocalObservable observable_from_hamiltonian(const PauliStringHamiltonian& h) {
  std::vector<ObservableTerm> terms;
  for (const PauliTerm& t : h.terms()) {
    std::vector<int> sites;
    for (int s = 0; s < static_cast<int>(t.paulis.size()); ++s)
      if (t.paulis[static_cast<std::size_t>(s)] != 'I') sites.push_back(s);
    if (sites.empty()) {
      terms.push_back({{0}, t.coeff * Matrix::Identity(2, 2)});
      continue;
    }
    Matrix block = Matrix::Identity(1, 1);
    for (int s : sites)
      block = tensor_product(block, pauli_matrix(t.paulis[static_cast<std::size_t>(s)]));
    terms.push_back({std::move(sites), t.coeff * block});
  }
  return LocalObservable(h.shape(), std::move(terms));
}

}  // namespace qst
