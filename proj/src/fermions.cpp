#include "qst/fermions.hpp"

#include <cmath>

#include "qst/basis.hpp"
#include "qst/observables.hpp"

namespace qst {

namespace {

// Single-qubit Pauli products: returns (phase, label) for left * right.
std::pair<cplx, char> pauli_product(char left, char right) {
  if (left == 'I') return {1.0, right};
  if (right == 'I') return {1.0, left};
  if (left == right) return {1.0, 'I'};
  static const cplx i(0.0, 1.0);
  // Cyclic: XY=iZ, YZ=iX, ZX=iY; reversed order flips the sign.
  auto cyc = [](char a, char b) -> char {
    if ((a == 'X' && b == 'Y') || (a == 'Y' && b == 'X')) return 'Z';
    if ((a == 'Y' && b == 'Z') || (a == 'Z' && b == 'Y')) return 'X';
    return 'Y';
  };
  const bool forward = (left == 'X' && right == 'Y') || (left == 'Y' && right == 'Z') ||
                       (left == 'Z' && right == 'X');
  return {forward ? i : -i, cyc(left, right)};
}

PauliPolynomial multiply(const PauliPolynomial& lhs, const PauliPolynomial& rhs) {
  PauliPolynomial out;
  for (const auto& [ls, lc] : lhs)
    for (const auto& [rs, rc] : rhs) {
      cplx coeff = lc * rc;
      std::string s(ls.size(), 'I');
      for (std::size_t k = 0; k < ls.size(); ++k) {
        const auto [phase, label] = pauli_product(ls[k], rs[k]);
        coeff *= phase;
        s[k] = label;
      }
      out[s] += coeff;
    }
  for (auto it = out.begin(); it != out.end();) {
    if (std::abs(it->second) < 1e-15)
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

// Image of a single ladder operator. |1><0| = (X - iY)/2 raises the
// occupation of its mode; earlier modes carry Z.
PauliPolynomial ladder_image(const LadderOp& op, int modes, bool alternating_phase) {
  const double phase = (alternating_phase && op.mode % 2 == 1) ? -1.0 : 1.0;
  std::string base(static_cast<std::size_t>(modes), 'I');
  for (int l = 0; l < op.mode; ++l) base[static_cast<std::size_t>(l)] = 'Z';
  std::string with_x = base, with_y = base;
  with_x[static_cast<std::size_t>(op.mode)] = 'X';
  with_y[static_cast<std::size_t>(op.mode)] = 'Y';
  const cplx y_coeff = op.dagger ? cplx(0.0, -0.5) : cplx(0.0, 0.5);
  PauliPolynomial poly;
  poly[with_x] = 0.5 * phase;
  poly[with_y] = y_coeff * phase;
  return poly;
}

}  // namespace

FermionOperator::FermionOperator(int mode_count, std::vector<Term> terms)
    : mode_count_(mode_count), terms_(std::move(terms)) {
  if (mode_count_ < 1) throw InvalidDimension("mode count must be >= 1");
  for (const Term& t : terms_)
    for (const LadderOp& f : t.factors)
      if (f.mode < 0 || f.mode >= mode_count_)
        throw InvalidMode("mode index " + std::to_string(f.mode + 1) + " out of range");
}

PauliPolynomial jw_map(const FermionOperator& op, bool alternating_phase) {
  PauliPolynomial out;
  const std::string identity(static_cast<std::size_t>(op.mode_count()), 'I');
  for (const FermionOperator::Term& term : op.terms()) {
    PauliPolynomial acc;
    acc[identity] = term.coeff;
    for (const LadderOp& f : term.factors)
      acc = multiply(acc, ladder_image(f, op.mode_count(), alternating_phase));
    for (const auto& [s, c] : acc) out[s] += c;
  }
  for (auto it = out.begin(); it != out.end();) {
    if (std::abs(it->second) < 1e-15)
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

Matrix pauli_polynomial_matrix(const PauliPolynomial& poly, int sites) {
  const std::size_t dim = std::size_t{1} << sites;
  if (dim > kDefaultOracleCap) throw TooLarge("register too large for a dense operator");
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [s, c] : poly) {
    if (static_cast<int>(s.size()) != sites)
      throw ShapeError("Pauli string length does not match site count");
    Matrix m = Matrix::Identity(1, 1);
    for (char ch : s) m = tensor_product(m, pauli_matrix(ch));
    out += c * m;
  }
  return out;
}

CarReport validate_car(int mode_count, double tol) {
  if (mode_count < 1 || mode_count > 6)
    throw InvalidDimension("dense anticommutator check supports 1..6 modes");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << mode_count);
  std::vector<Matrix> lower, raise;
  for (int j = 0; j < mode_count; ++j) {
    FermionOperator c(mode_count, {{1.0, {{j, false}}}});
    FermionOperator cd(mode_count, {{1.0, {{j, true}}}});
    lower.push_back(pauli_polynomial_matrix(jw_map(c), mode_count));
    raise.push_back(pauli_polynomial_matrix(jw_map(cd), mode_count));
  }
  double dev = 0.0;
  const Matrix id = Matrix::Identity(dim, dim);
  for (int i = 0; i < mode_count; ++i)
    for (int j = 0; j < mode_count; ++j) {
      const Matrix mixed = lower[static_cast<std::size_t>(i)] * raise[static_cast<std::size_t>(j)] +
                           raise[static_cast<std::size_t>(j)] * lower[static_cast<std::size_t>(i)];
      const Matrix target = (i == j) ? id : Matrix(Matrix::Zero(dim, dim));
      dev = std::max(dev, (mixed - target).cwiseAbs().maxCoeff());
      const Matrix plain = lower[static_cast<std::size_t>(i)] * lower[static_cast<std::size_t>(j)] +
                           lower[static_cast<std::size_t>(j)] * lower[static_cast<std::size_t>(i)];
      dev = std::max(dev, plain.cwiseAbs().maxCoeff());
    }
  return CarReport{mode_count, dev, dev <= tol};
}

OneBodyEnergy onebody_expectation(const PureState& state,
                                  const std::vector<double>& epsilons) {
  const RegisterShape& shape = state.shape();
  for (int s = 0; s < shape.site_count(); ++s)
    if (shape.dim(s) != 2) throw ShapeError("occupation numbers require a qubit register");
  if (static_cast<int>(epsilons.size()) != shape.site_count())
    throw ShapeError("one energy per mode required");

  double via_rdm = 0.0;
  for (int s = 0; s < shape.site_count(); ++s) {
    const DensityMatrix rho = partial_trace(state, {s});
    via_rdm += epsilons[static_cast<std::size_t>(s)] * rho.matrix()(1, 1).real();
  }

  std::vector<ObservableTerm> terms;
  const Matrix number_op =
      (Matrix::Identity(2, 2) - pauli_matrix('Z')) / 2.0;
  for (int s = 0; s < shape.site_count(); ++s)
    terms.push_back({{s}, epsilons[static_cast<std::size_t>(s)] * number_op});
  const double direct = expectation_direct(state, LocalObservable(shape, std::move(terms)));

  if (std::abs(via_rdm - direct) > 1e-12)
    throw Error("occupation-number paths disagree: " + std::to_string(via_rdm) + " vs " +
                std::to_string(direct));
  return OneBodyEnergy{epsilons, via_rdm};
}

}  // namespace qst
