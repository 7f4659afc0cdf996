#include "qst/circuit.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include "qst/basis.hpp"

namespace qst {

namespace {

void check_gate_sites(const RegisterShape& shape, const std::vector<int>& sites) {
  if (sites.empty()) throw InvalidSites("gate must act on at least one site");
  std::vector<int> sorted = sites;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidSites("gate site tuple contains repeats");
  if (sorted.front() < 0 || sorted.back() >= shape.site_count())
    throw InvalidSites("gate site out of range");
}

std::size_t gate_dim(const RegisterShape& shape, const std::vector<int>& sites) {
  std::size_t d = 1;
  for (int s : sites) d *= static_cast<std::size_t>(shape.dim(s));
  return d;
}

// Offsets of each subset digit combination within the flat index.
std::vector<std::size_t> subset_offsets(const RegisterShape& shape,
                                        const std::vector<int>& sites) {
  std::size_t count = 1;
  for (int s : sites) count *= static_cast<std::size_t>(shape.dim(s));
  std::vector<std::size_t> offsets(count, 0);
  std::size_t repeat = count;
  for (int s : sites) {
    const auto d = static_cast<std::size_t>(shape.dim(s));
    repeat /= d;
    const std::size_t stride = shape.stride(s);
    for (std::size_t k = 0; k < count; ++k)
      offsets[k] += ((k / repeat) % d) * stride;
  }
  return offsets;
}

std::vector<int> complement_sites(const RegisterShape& shape, const std::vector<int>& sites) {
  std::vector<bool> used(static_cast<std::size_t>(shape.site_count()), false);
  for (int s : sites) used[static_cast<std::size_t>(s)] = true;
  std::vector<int> rest;
  for (int s = 0; s < shape.site_count(); ++s)
    if (!used[static_cast<std::size_t>(s)]) rest.push_back(s);
  return rest;
}

}  // namespace

Circuit::Circuit(RegisterShape shape, std::vector<Gate> gates)
    : shape_(std::move(shape)), gates_(std::move(gates)) {
  for (const Gate& g : gates_) {
    check_gate_sites(shape_, g.sites);
    const auto d = static_cast<Eigen::Index>(gate_dim(shape_, g.sites));
    if (g.block.rows() != d || g.block.cols() != d)
      throw ShapeError("gate block dimension does not match its site tuple");
    const double dev =
        (g.block.adjoint() * g.block - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > kUnitaryTol)
      throw ShapeError("gate block is not unitary, deviation " + std::to_string(dev));
  }
}

Matrix named_gate(const std::string& name) {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix m;
  if (name == "I" || name == "X" || name == "Y" || name == "Z") {
    return pauli_matrix(name[0]);
  }
  if (name == "H") {
    m.resize(2, 2);
    m << s, s, s, -s;
    return m;
  }
  if (name == "S") {
    m.resize(2, 2);
    m << 1, 0, 0, cplx(0, 1);
    return m;
  }
  if (name == "T") {
    m.resize(2, 2);
    m << 1, 0, 0, std::polar(1.0, M_PI / 4);
    return m;
  }
  if (name == "CNOT") {
    m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
  }
  if (name == "CZ") {
    m = Matrix::Identity(4, 4);
    m(3, 3) = -1;
    return m;
  }
  if (name == "SWAP") {
    m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
    return m;
  }
  throw InvalidLabel("unknown gate name '" + name + "'");
}

Vector apply_block(const RegisterShape& shape, const Vector& x, const Matrix& block,
                   const std::vector<int>& sites) {
  check_gate_sites(shape, sites);
  if (static_cast<std::size_t>(x.size()) != shape.total_dim())
    throw ShapeError("vector length does not match register shape");
  const auto dg = gate_dim(shape, sites);
  if (block.rows() != static_cast<Eigen::Index>(dg) ||
      block.cols() != static_cast<Eigen::Index>(dg))
    throw ShapeError("block dimension does not match site tuple");

  const auto target_off = subset_offsets(shape, sites);
  const auto rest_off = subset_offsets(shape, complement_sites(shape, sites));

  Vector y = Vector::Zero(x.size());
  Vector gathered(static_cast<Eigen::Index>(dg));
  for (std::size_t base : rest_off) {
    for (std::size_t k = 0; k < dg; ++k)
      gathered(static_cast<Eigen::Index>(k)) =
          x(static_cast<Eigen::Index>(base + target_off[k]));
    Vector transformed = block * gathered;
    for (std::size_t k = 0; k < dg; ++k)
      y(static_cast<Eigen::Index>(base + target_off[k])) =
          transformed(static_cast<Eigen::Index>(k));
  }
  return y;
}

Matrix embed_block(const RegisterShape& shape, const Matrix& block,
                   const std::vector<int>& sites) {
  check_gate_sites(shape, sites);
  const auto dg = gate_dim(shape, sites);
  if (block.rows() != static_cast<Eigen::Index>(dg) ||
      block.cols() != static_cast<Eigen::Index>(dg))
    throw ShapeError("block dimension does not match site tuple");
  const auto target_off = subset_offsets(shape, sites);
  const auto rest_off = subset_offsets(shape, complement_sites(shape, sites));
  const auto n = static_cast<Eigen::Index>(shape.total_dim());
  Matrix full = Matrix::Zero(n, n);
  for (std::size_t base : rest_off)
    for (std::size_t r = 0; r < dg; ++r)
      for (std::size_t c = 0; c < dg; ++c)
        full(static_cast<Eigen::Index>(base + target_off[r]),
             static_cast<Eigen::Index>(base + target_off[c])) =
            block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return full;
}

PureState apply_circuit(const PureState& state, const Circuit& circuit) {
  if (!(state.shape() == circuit.shape()))
    throw ShapeError("state and circuit register shapes differ");
  Vector amp = state.amplitudes();
  for (const Gate& g : circuit.gates())
    amp = apply_block(circuit.shape(), amp, g.block, g.sites);
  return PureState(circuit.shape(), std::move(amp));
}

Matrix circuit_unitary(const Circuit& circuit, std::size_t cap) {
  const std::size_t n = circuit.shape().total_dim();
  if (n > cap) throw TooLarge("register too large for a dense circuit matrix");
  Matrix u = Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const Gate& g : circuit.gates()) {
    for (Eigen::Index col = 0; col < u.cols(); ++col)
      u.col(col) = apply_block(circuit.shape(), u.col(col), g.block, g.sites);
  }
  return u;
}

Matrix random_unitary(int dim, SplitMix64& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      double re, im;
      rng.next_gaussian_pair(re, im);
      g(r, c) = cplx(re, im);
    }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the R-diagonal phases so the distribution is Haar.
  for (Eigen::Index k = 0; k < dim; ++k) {
    const cplx d = r(k, k);
    q.col(k) *= (std::abs(d) > 0) ? d / std::abs(d) : cplx(1.0, 0.0);
  }
  return q;
}

Circuit random_circuit(const RegisterShape& shape, int depth, std::uint64_t seed) {
  if (depth < 0) throw InvalidMode("circuit depth must be non-negative");
  SplitMix64 rng(derive_seed(seed, {0xC1BCull}));
  const int n = shape.site_count();
  std::vector<Gate> gates;
  gates.reserve(static_cast<std::size_t>(depth));
  for (int layer = 0; layer < depth; ++layer) {
    if (n == 1) {
      gates.push_back({random_unitary(shape.dim(0), rng), {0}});
      continue;
    }
    const int a = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
    int b = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - 1));
    if (b >= a) ++b;
    const int dg = shape.dim(a) * shape.dim(b);
    gates.push_back({random_unitary(dg, rng), {a, b}});
  }
  return Circuit(shape, std::move(gates));
}

}  // namespace qst
