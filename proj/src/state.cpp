#include "qst/state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qst/rng.hpp"

namespace qst {

RegisterShape::RegisterShape(std::vector<int> dims, std::size_t amplitude_cap)
    : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidDimension("register must have at least one site");
  for (int d : dims_) {
    if (d < 2) throw InvalidDimension("site dimension must be >= 2, got " + std::to_string(d));
  }
  for (int d : dims_) {
    if (total_ > amplitude_cap / static_cast<std::size_t>(d))
      throw TooLarge("register exceeds amplitude cap of " + std::to_string(amplitude_cap));
    total_ *= static_cast<std::size_t>(d);
  }
  strides_.assign(dims_.size(), 1);
  for (int s = site_count() - 2; s >= 0; --s)
    strides_[s] = strides_[s + 1] * static_cast<std::size_t>(dims_[s + 1]);
}

int RegisterShape::dim(int site) const {
  if (site < 0 || site >= site_count())
    throw InvalidSites("site index " + std::to_string(site) + " out of range");
  return dims_[static_cast<std::size_t>(site)];
}

std::size_t RegisterShape::stride(int site) const {
  if (site < 0 || site >= site_count())
    throw InvalidSites("site index " + std::to_string(site) + " out of range");
  return strides_[static_cast<std::size_t>(site)];
}

std::size_t RegisterShape::index_of(const std::vector<int>& digits) const {
  if (static_cast<int>(digits.size()) != site_count())
    throw ShapeError("digit count does not match site count");
  std::size_t idx = 0;
  for (int s = 0; s < site_count(); ++s) {
    if (digits[s] < 0 || digits[s] >= dims_[s])
      throw InvalidLabel("digit out of range at site " + std::to_string(s));
    idx += static_cast<std::size_t>(digits[s]) * strides_[s];
  }
  return idx;
}

std::vector<int> RegisterShape::digits_of(std::size_t index) const {
  std::vector<int> digits(dims_.size());
  for (int s = 0; s < site_count(); ++s) {
    digits[s] = static_cast<int>((index / strides_[s]) % static_cast<std::size_t>(dims_[s]));
  }
  return digits;
}

int RegisterShape::digit_at(std::size_t index, int site) const {
  return static_cast<int>((index / stride(site)) % static_cast<std::size_t>(dim(site)));
}

RegisterShape RegisterShape::subshape(const std::vector<int>& sites) const {
  std::vector<int> sub;
  sub.reserve(sites.size());
  for (int s : sites) sub.push_back(dim(s));
  return RegisterShape(sub);
}

PureState::PureState(RegisterShape shape, Vector amplitudes)
    : shape_(std::move(shape)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != shape_.total_dim())
    throw ShapeError("amplitude vector length does not match register dimension");
  const double n2 = amplitudes_.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormSlack)
    throw ShapeError("state is not normalized: |psi|^2 = " + std::to_string(n2));
}

PureState PureState::normalized(RegisterShape shape, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (n < 1e-14) throw ZeroInput("cannot normalize a zero vector");
  return PureState(std::move(shape), amplitudes / n);
}

DensityMatrix::DensityMatrix(RegisterShape shape, Matrix matrix)
    : shape_(std::move(shape)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(shape_.total_dim());
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw ShapeError("density matrix dimension does not match register shape");
  const double herm_dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kHermTol)
    throw InvalidDensityMatrix("matrix not Hermitian, deviation " + std::to_string(herm_dev));
  const double tr_dev = std::abs(matrix_.trace() - cplx(1.0, 0.0));
  if (tr_dev > 1e2 * kTraceTol)
    throw InvalidDensityMatrix("trace differs from 1 by " + std::to_string(tr_dev));
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigFloor)
    throw InvalidDensityMatrix("matrix has eigenvalue " +
                               std::to_string(es.eigenvalues().minCoeff()) +
                               " below the PSD tolerance");
}

DensityMatrix DensityMatrix::from_pure(const PureState& state) {
  Matrix m = state.amplitudes() * state.amplitudes().adjoint();
  return DensityMatrix(state.shape(), std::move(m));
}

PureState basis_state(const RegisterShape& shape, std::string_view labels) {
  if (static_cast<int>(labels.size()) != shape.site_count())
    throw InvalidLabel("label string length does not match site count");
  std::vector<int> digits(labels.size());
  for (std::size_t s = 0; s < labels.size(); ++s) {
    const char c = labels[s];
    if (c < '0' || c > '9') throw InvalidLabel("label characters must be digits");
    digits[s] = c - '0';
    if (digits[s] >= shape.dim(static_cast<int>(s)))
      throw InvalidLabel("digit " + std::string(1, c) + " out of range for site " +
                         std::to_string(s + 1));
  }
  Vector amp = Vector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  amp(static_cast<Eigen::Index>(shape.index_of(digits))) = 1.0;
  return PureState(shape, std::move(amp));
}

PureState random_state(const RegisterShape& shape, std::uint64_t seed) {
  SplitMix64 rng(derive_seed(seed, {0x57A7Eull}));
  Vector amp(static_cast<Eigen::Index>(shape.total_dim()));
  for (Eigen::Index i = 0; i < amp.size(); ++i) {
    double re, im;
    rng.next_gaussian_pair(re, im);
    amp(i) = cplx(re, im);
  }
  return PureState::normalized(shape, std::move(amp));
}

namespace {

void check_keep_sites(const std::vector<int>& keep, int site_count) {
  if (keep.empty()) throw InvalidSites("keep set must be non-empty");
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidSites("keep sites must be distinct");
  if (sorted.front() < 0 || sorted.back() >= site_count)
    throw InvalidSites("keep site out of range");
}

// Complement of `keep` in 0..N-1, ascending.
std::vector<int> traced_sites(const std::vector<int>& keep, int site_count) {
  std::vector<bool> kept(static_cast<std::size_t>(site_count), false);
  for (int s : keep) kept[static_cast<std::size_t>(s)] = true;
  std::vector<int> rest;
  for (int s = 0; s < site_count; ++s)
    if (!kept[static_cast<std::size_t>(s)]) rest.push_back(s);
  return rest;
}

// Enumerates flat indices of a site subset: for subset digit combination k
// (mixed radix over the subset dims), offset(k) = sum digit * stride(site).
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

}  // namespace

DensityMatrix partial_trace(const PureState& state, const std::vector<int>& keep) {
  const RegisterShape& shape = state.shape();
  check_keep_sites(keep, shape.site_count());
  const auto rest = traced_sites(keep, shape.site_count());
  const auto keep_off = subset_offsets(shape, keep);
  const auto rest_off = subset_offsets(shape, rest);
  const auto dk = static_cast<Eigen::Index>(keep_off.size());

  Matrix rho = Matrix::Zero(dk, dk);
  const Vector& psi = state.amplitudes();
  for (std::size_t m : rest_off) {
    for (Eigen::Index r = 0; r < dk; ++r) {
      const cplx ar = psi(static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(r)] + m));
      if (ar == cplx(0.0, 0.0)) continue;
      for (Eigen::Index c = 0; c < dk; ++c) {
        const cplx ac = psi(static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(c)] + m));
        rho(r, c) += ar * std::conj(ac);
      }
    }
  }
  // Symmetrize away fp asymmetry before validation.
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityMatrix(shape.subshape(keep), std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const RegisterShape& shape = rho.shape();
  check_keep_sites(keep, shape.site_count());
  const auto rest = traced_sites(keep, shape.site_count());
  const auto keep_off = subset_offsets(shape, keep);
  const auto rest_off = subset_offsets(shape, rest);
  const auto dk = static_cast<Eigen::Index>(keep_off.size());

  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (std::size_t t : rest_off) {
    for (Eigen::Index r = 0; r < dk; ++r)
      for (Eigen::Index c = 0; c < dk; ++c)
        out(r, c) += m(static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(r)] + t),
                       static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(c)] + t));
  }
  out = ((out + out.adjoint()) / 2.0).eval();
  return DensityMatrix(shape.subshape(keep), std::move(out));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() < DensityMatrix::kEigFloor)
    throw InvalidDensityMatrix("spectrum not PSD within tolerance");
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double p = ev(i);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return std::max(s, 0.0);
}

double purity(const DensityMatrix& rho) {
  // Tr rho^2 = Frobenius norm squared for Hermitian rho.
  return rho.matrix().squaredNorm();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ShapeError("trace distance requires equal dimensions");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DensityMatrix random_density_matrix(int dim, std::uint64_t seed) {
  if (dim < 2) throw InvalidDimension("density matrix dimension must be >= 2");
  SplitMix64 rng(derive_seed(seed, {0xD17Aull}));
  Matrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      double re, im;
      rng.next_gaussian_pair(re, im);
      g(r, c) = cplx(re, im);
    }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityMatrix(RegisterShape({dim}), std::move(rho));
}

}  // namespace qst
