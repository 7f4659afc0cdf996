#include "qst/basis.hpp"

#include <cmath>

namespace qst {

OperatorBasis::OperatorBasis(int d, std::vector<Matrix> ops, std::vector<double> star)
    : d_(d), ops_(std::move(ops)), star_(std::move(star)) {}

OperatorBasis OperatorBasis::gellmann(int d) {
  if (d < 2) throw InvalidDimension("operator basis requires dimension >= 2");
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) - 1);

  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      ops.push_back(std::move(m));
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(j, k) = cplx(0.0, -1.0);
      m(k, j) = cplx(0.0, 1.0);
      ops.push_back(std::move(m));
    }
  for (int l = 1; l < d; ++l) {
    Matrix m = Matrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    for (int j = 0; j < l; ++j) m(j, j) = norm;
    m(l, l) = -norm * static_cast<double>(l);
    ops.push_back(std::move(m));
  }

  const int n = static_cast<int>(ops.size());
  std::vector<double> star(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int s = r; s < n; ++s) {
      const Matrix anti = ops[static_cast<std::size_t>(r)] * ops[static_cast<std::size_t>(s)] +
                          ops[static_cast<std::size_t>(s)] * ops[static_cast<std::size_t>(r)];
      for (int t = 0; t < n; ++t) {
        const double v =
            0.25 * d * (anti * ops[static_cast<std::size_t>(t)]).trace().real();
        star[(static_cast<std::size_t>(r) * n + s) * n + t] = v;
        star[(static_cast<std::size_t>(s) * n + r) * n + t] = v;
      }
    }
  return OperatorBasis(d, std::move(ops), std::move(star));
}

double OperatorBasis::star(int r, int s, int t) const {
  const int n = size();
  return star_.at((static_cast<std::size_t>(r) * n + s) * n + t);
}

OperatorBasis gellmann_basis(int d) { return OperatorBasis::gellmann(d); }

CoherenceVector::CoherenceVector(int dim, RealVector components)
    : d_(dim), m_(std::move(components)) {
  if (d_ < 2) throw InvalidDimension("coherence vector requires dimension >= 2");
  if (m_.size() != static_cast<Eigen::Index>(d_) * d_ - 1)
    throw ShapeError("coherence vector must have d^2-1 components");
  const double cap = 0.5 * d_ * (d_ - 1) + 1e-9;
  if (m_.squaredNorm() > cap)
    throw InvalidDensityMatrix("coherence vector length exceeds the pure-state bound");
}

CoherenceVector bloch_decompose(const DensityMatrix& rho, const OperatorBasis& basis) {
  if (static_cast<int>(rho.dim()) != basis.dim())
    throw ShapeError("density matrix and basis dimensions differ");
  RealVector m(basis.size());
  for (int r = 0; r < basis.size(); ++r)
    m(r) = 0.5 * basis.dim() * (rho.matrix() * basis.op(r)).trace().real();
  return CoherenceVector(basis.dim(), std::move(m));
}

Matrix matrix_from_coherence(const CoherenceVector& m, const OperatorBasis& basis) {
  if (m.dim() != basis.dim()) throw ShapeError("coherence vector and basis dimensions differ");
  const int d = basis.dim();
  Matrix rho = Matrix::Identity(d, d);
  for (int r = 0; r < basis.size(); ++r) rho += m.components()(r) * basis.op(r);
  return rho / static_cast<double>(d);
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

Matrix pauli_matrix(char c) {
  Matrix m(2, 2);
  switch (c) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, cplx(0, -1), cplx(0, 1), 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw InvalidLabel(std::string("unknown Pauli label '") + c + "'");
  }
  return m;
}

}  // namespace qst
