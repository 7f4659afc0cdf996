#include "qst/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qst/basis.hpp"

namespace qst {

namespace {

bool valid_pauli_char(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

// Non-identity sites of a Pauli string.
std::vector<int> support(const std::string& paulis) {
  std::vector<int> sites;
  for (int s = 0; s < static_cast<int>(paulis.size()); ++s)
    if (paulis[static_cast<std::size_t>(s)] != 'I') sites.push_back(s);
  return sites;
}

// Tensor product of the string's Pauli factors on the given sites, first
// site most significant.
Matrix pauli_block(const std::string& paulis, const std::vector<int>& sites) {
  Matrix block = Matrix::Identity(1, 1);
  for (int s : sites)
    block = tensor_product(block, pauli_matrix(paulis[static_cast<std::size_t>(s)]));
  return block;
}

}  // namespace

PauliStringHamiltonian::PauliStringHamiltonian(RegisterShape shape,
                                               std::vector<PauliTerm> terms,
                                               std::size_t max_terms)
    : shape_(std::move(shape)), terms_(std::move(terms)) {
  for (int s = 0; s < shape_.site_count(); ++s)
    if (shape_.dim(s) != 2)
      throw InvalidDimension("Pauli-string Hamiltonians require a qubit register");
  if (terms_.size() > max_terms)
    throw TooLarge("Hamiltonian term count exceeds the configured bound");
  for (const PauliTerm& t : terms_) {
    if (static_cast<int>(t.paulis.size()) != shape_.site_count())
      throw ShapeError("Pauli string length does not match site count");
    for (char c : t.paulis)
      if (!valid_pauli_char(c)) throw InvalidLabel("Pauli labels must be I, X, Y or Z");
  }
}

Matrix dense_hamiltonian(const PauliStringHamiltonian& h, std::size_t cap) {
  const std::size_t dim = h.shape().total_dim();
  if (dim > cap) throw TooLarge("register too large for a dense Hamiltonian");
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix m = Matrix::Zero(n, n);
  for (const PauliTerm& t : h.terms()) {
    const auto sites = support(t.paulis);
    if (sites.empty()) {
      m += t.coeff * Matrix::Identity(n, n);
    } else {
      m += t.coeff * embed_block(h.shape(), pauli_block(t.paulis, sites), sites);
    }
  }
  return m;
}

Matrix exact_propagator(const PauliStringHamiltonian& h, double t, std::size_t cap) {
  const Matrix hm = dense_hamiltonian(h, cap);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hm);
  const auto n = hm.rows();
  Vector phases(n);
  for (Eigen::Index k = 0; k < n; ++k)
    phases(k) = std::polar(1.0, es.eigenvalues()(k) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Circuit trotterize(const PauliStringHamiltonian& h, double t, int steps) {
  if (steps < 1) throw InvalidMode("step count must be >= 1");
  std::vector<Gate> gates;
  gates.reserve(h.terms().size() * static_cast<std::size_t>(steps));
  const double dt = t / steps;
  std::vector<Gate> one_step;
  for (const PauliTerm& term : h.terms()) {
    const double theta = term.coeff * dt;
    auto sites = support(term.paulis);
    if (sites.empty()) {
      // Identity string: a global phase, carried on site 0.
      Matrix g = std::polar(1.0, theta) * Matrix::Identity(2, 2);
      one_step.push_back({std::move(g), {0}});
      continue;
    }
    const Matrix p = pauli_block(term.paulis, sites);
    // P^2 = I, so exp(i theta P) = cos(theta) I + i sin(theta) P.
    Matrix g = std::cos(theta) * Matrix::Identity(p.rows(), p.cols()) +
               cplx(0.0, std::sin(theta)) * p;
    one_step.push_back({std::move(g), std::move(sites)});
  }
  for (int s = 0; s < steps; ++s)
    for (const Gate& g : one_step) gates.push_back(g);
  return Circuit(h.shape(), std::move(gates));
}

}  // namespace qst
