#include "qst/robustness.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qst/basis.hpp"
#include "qst/circuit.hpp"
#include "qst/rng.hpp"

namespace qst {

KrausChannel::KrausChannel(int dim, std::vector<Matrix> operators)
    : dim_(dim), ops_(std::move(operators)) {
  if (dim_ < 2) throw InvalidDimension("channel dimension must be >= 2");
  if (ops_.empty()) throw InvalidChannel("channel needs at least one operator");
  Matrix sum = Matrix::Zero(dim_, dim_);
  for (const Matrix& a : ops_) {
    if (a.rows() != dim_ || a.cols() != dim_)
      throw InvalidChannel("operator dimension does not match the channel dimension");
    sum += a.adjoint() * a;
  }
  const double dev = (sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
  if (dev > kCompletenessTol)
    throw InvalidChannel("channel is not trace-preserving, deviation " + std::to_string(dev));
}

KrausChannel KrausChannel::identity(int dim) {
  return KrausChannel(dim, {Matrix::Identity(dim, dim)});
}

KrausChannel KrausChannel::dephasing(double p) {
  if (p < 0.0 || p > 1.0) throw InvalidChannel("probability must lie in [0, 1]");
  return KrausChannel(2, {std::sqrt(1.0 - p) * Matrix::Identity(2, 2),
                          std::sqrt(p) * pauli_matrix('Z')});
}

KrausChannel KrausChannel::bit_flip(double p) {
  if (p < 0.0 || p > 1.0) throw InvalidChannel("probability must lie in [0, 1]");
  return KrausChannel(2, {std::sqrt(1.0 - p) * Matrix::Identity(2, 2),
                          std::sqrt(p) * pauli_matrix('X')});
}

KrausChannel KrausChannel::depolarizing(double p) {
  if (p < 0.0 || p > 1.0) throw InvalidChannel("probability must lie in [0, 1]");
  return KrausChannel(2, {std::sqrt(1.0 - 0.75 * p) * Matrix::Identity(2, 2),
                          std::sqrt(p / 4.0) * pauli_matrix('X'),
                          std::sqrt(p / 4.0) * pauli_matrix('Y'),
                          std::sqrt(p / 4.0) * pauli_matrix('Z')});
}

KrausChannel KrausChannel::unitary(Matrix u) {
  const auto d = static_cast<int>(u.rows());
  return KrausChannel(d, {std::move(u)});
}

KrausChannel KrausChannel::embedded(const RegisterShape& shape,
                                    const std::vector<int>& sites) const {
  std::vector<Matrix> lifted;
  lifted.reserve(ops_.size());
  for (const Matrix& a : ops_) lifted.push_back(embed_block(shape, a, sites));
  return KrausChannel(static_cast<int>(shape.total_dim()), std::move(lifted));
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch) {
  if (static_cast<int>(rho.dim()) != ch.dim())
    throw ShapeError("channel and state dimensions differ");
  Matrix out = Matrix::Zero(ch.dim(), ch.dim());
  for (const Matrix& a : ch.operators()) out += a * rho.matrix() * a.adjoint();
  out = ((out + out.adjoint()) / 2.0).eval();
  return DensityMatrix(rho.shape(), std::move(out));
}

Matrix adjoint_map(const Matrix& obs, const KrausChannel& ch) {
  if (obs.rows() != ch.dim() || obs.cols() != ch.dim())
    throw ShapeError("observable and channel dimensions differ");
  Matrix out = Matrix::Zero(ch.dim(), ch.dim());
  for (const Matrix& a : ch.operators()) out += a.adjoint() * obs * a;
  return out;
}

double invariance_defect(const Matrix& obs, const DensityMatrix& rho,
                         const KrausChannel& a, const KrausChannel& b) {
  const double va = (adjoint_map(obs, a) * rho.matrix()).trace().real();
  const double vb = (adjoint_map(obs, b) * rho.matrix()).trace().real();
  return std::abs(va - vb);
}

MarginalInvarianceReport marginal_invariance_check(const DensityMatrix& ideal,
                                                   const DensityMatrix& actual,
                                                   int locality, double tol) {
  if (!(ideal.shape() == actual.shape()))
    throw ShapeError("marginal comparison requires identical register shapes");
  if (locality != 1 && locality != 2)
    throw InvalidMode("marginal locality must be 1 or 2");
  const int n = ideal.shape().site_count();
  if (locality == 2 && n < 2)
    throw InvalidMode("pair marginals require at least two sites");

  MarginalInvarianceReport report;
  report.locality = locality;
  if (locality == 1) {
    for (int s = 0; s < n; ++s) {
      const double dist =
          trace_distance(partial_trace(ideal, {s}), partial_trace(actual, {s}));
      report.distances.push_back({{s}, dist});
      report.max_distance = std::max(report.max_distance, dist);
      const long d = ideal.shape().dim(s);
      report.constraint_count += d * d - 1;
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double dist =
            trace_distance(partial_trace(ideal, {i, j}), partial_trace(actual, {i, j}));
        report.distances.push_back({{i, j}, dist});
        report.max_distance = std::max(report.max_distance, dist);
        const long di = ideal.shape().dim(i), dj = ideal.shape().dim(j);
        report.constraint_count += di * di * dj * dj - 1;
      }
  }
  report.passed = report.max_distance <= tol;
  return report;
}

namespace {

// Tuples compared at the given locality, ascending.
std::vector<std::vector<int>> marginal_tuples(const RegisterShape& shape, int locality) {
  if (locality != 1 && locality != 2)
    throw InvalidMode("marginal locality must be 1 or 2");
  const int n = shape.site_count();
  if (locality == 2 && n < 2)
    throw InvalidMode("pair marginals require at least two sites");
  std::vector<std::vector<int>> tuples;
  if (locality == 1) {
    for (int s = 0; s < n; ++s) tuples.push_back({s});
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) tuples.push_back({i, j});
  }
  return tuples;
}

long tuple_constraints(const RegisterShape& shape, const std::vector<int>& tuple) {
  long prod = 1;
  for (int s : tuple) prod *= static_cast<long>(shape.dim(s)) * shape.dim(s);
  return prod - 1;
}

}  // namespace

MarginalInvarianceReport marginal_invariance_check(const DensityMatrix& ideal,
                                                   const DensityMatrix& actual,
                                                   int locality, const ShotBudget& budget,
                                                   double tol) {
  if (!(ideal.shape() == actual.shape()))
    throw ShapeError("marginal comparison requires identical register shapes");
  if (budget.is_exact()) return marginal_invariance_check(ideal, actual, locality, tol);

  MarginalInvarianceReport report;
  report.locality = locality;
  report.passed = true;
  for (const auto& tuple : marginal_tuples(ideal.shape(), locality)) {
    const TomographyEstimate lhs =
        reconstruct_rdm(ideal, tuple, ShotBudget::sampled(
                                          budget.shots(),
                                          derive_seed(budget.seed(), {0x1DEAull})));
    const TomographyEstimate rhs =
        reconstruct_rdm(actual, tuple, ShotBudget::sampled(
                                           budget.shots(),
                                           derive_seed(budget.seed(), {0xAC7ull})));
    for (std::size_t m = 0; m < lhs.raw_moments.size(); ++m) {
      const double diff =
          std::abs(lhs.raw_moments[m].estimate - rhs.raw_moments[m].estimate);
      const double combined = std::hypot(lhs.raw_moments[m].std_error,
                                         rhs.raw_moments[m].std_error);
      if (diff > std::max(tol, 5.0 * combined)) report.passed = false;
    }
    const double dist = trace_distance(lhs.rho_hat, rhs.rho_hat);
    report.distances.push_back({tuple, dist});
    report.max_distance = std::max(report.max_distance, dist);
    report.constraint_count += tuple_constraints(ideal.shape(), tuple);
  }
  return report;
}

PauliAffineForm PauliAffineForm::decompose(const Matrix& op) {
  if (op.rows() != 2 || op.cols() != 2)
    throw InvalidDimension("affine decomposition is defined for 2x2 operators");
  PauliAffineForm f;
  f.alpha = op.trace() / 2.0;
  for (int t = 0; t < 3; ++t)
    f.a(t) = (op * pauli_matrix("XYZ"[t])).trace() / 2.0;
  return f;
}

Matrix PauliAffineForm::recompose() const {
  Matrix out = alpha * Matrix::Identity(2, 2);
  for (int t = 0; t < 3; ++t) out += a(t) * pauli_matrix("XYZ"[t]);
  return out;
}

namespace {

// Plain cross product, no conjugation of either argument.
Eigen::Vector3cd cross3(const Eigen::Vector3cd& u, const Eigen::Vector3cd& v) {
  Eigen::Vector3cd out;
  out(0) = u(1) * v(2) - u(2) * v(1);
  out(1) = u(2) * v(0) - u(0) * v(2);
  out(2) = u(0) * v(1) - u(1) * v(0);
  return out;
}

}  // namespace

std::pair<double, double> completeness_residuals(const KrausChannel& ch) {
  if (ch.dim() != 2) throw InvalidDimension("affine completeness is a qubit identity");
  double scalar = -1.0;
  Eigen::Vector3cd vec = Eigen::Vector3cd::Zero();
  for (const Matrix& op : ch.operators()) {
    const PauliAffineForm f = PauliAffineForm::decompose(op);
    scalar += std::norm(f.alpha) + f.a.squaredNorm();
    // sum over operators of alpha a* + alpha* a + i (a* x a) vanishes when
    // the operators compose to a trace-preserving map.
    vec += f.alpha * f.a.conjugate() + std::conj(f.alpha) * f.a +
           cplx(0, 1) * cross3(f.a.conjugate(), f.a);
  }
  return {std::abs(scalar), vec.cwiseAbs().maxCoeff()};
}

namespace {

struct AffineParts {
  double cross = 0.0;      // sum i(a x a*)_3
  double identity = 0.0;   // I component of the Heisenberg image:
                           // sum i(a x a*)_3 + alpha a3* + alpha* a3
  double zpart = 0.0;      // sigma_z component:
                           // sum |alpha|^2 - |a1|^2 - |a2|^2 + |a3|^2
  double planar = 0.0;     // sum 2(|a1|^2 + |a2|^2)
  double survival = 0.0;   // sum |alpha + a3|^2
};

AffineParts affine_parts(const KrausChannel& ch) {
  AffineParts p;
  for (const Matrix& op : ch.operators()) {
    const PauliAffineForm f = PauliAffineForm::decompose(op);
    const cplx cross_z = f.a(0) * std::conj(f.a(1)) - f.a(1) * std::conj(f.a(0));
    const double i_cross = (cplx(0, 1) * cross_z).real();
    p.cross += i_cross;
    p.identity += i_cross + 2.0 * (f.alpha * std::conj(f.a(2))).real();
    p.zpart += std::norm(f.alpha) - std::norm(f.a(0)) - std::norm(f.a(1)) + std::norm(f.a(2));
    p.planar += 2.0 * (std::norm(f.a(0)) + std::norm(f.a(1)));
    p.survival += std::norm(f.alpha + f.a(2));
  }
  return p;
}

}  // namespace

QubitConditionReport qubit_condition_check(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim() != 2 || b.dim() != 2)
    throw InvalidDimension("qubit condition check requires qubit channels");
  const AffineParts pa = affine_parts(a);
  const AffineParts pb = affine_parts(b);

  QubitConditionReport report;
  report.identity_part = pa.identity - pb.identity;
  report.z_part = pa.zpart - pb.zpart;
  report.combined = report.identity_part + report.z_part;
  report.eq_cross = (pa.cross - pa.planar) - (pb.cross - pb.planar);
  report.eq_survival = pa.survival - pb.survival;

  Matrix plus = (Matrix::Identity(2, 2) + pauli_matrix('Z')) / 2.0;
  const DensityMatrix rho(RegisterShape({2}), std::move(plus));
  report.defect = invariance_defect(pauli_matrix('Z'), rho, a, b);

  report.consistent = std::abs(std::abs(report.combined) - report.defect) <= 1e-10 &&
                      std::abs(2.0 * report.eq_survival - report.combined) <= 1e-10;
  return report;
}

LittleGroupReport little_group_probe(const Matrix& obs, const DensityMatrix& rho,
                                     const Matrix& generator,
                                     const std::vector<double>& angles) {
  if (generator.rows() != generator.cols() ||
      generator.rows() != static_cast<Eigen::Index>(rho.dim()))
    throw ShapeError("generator dimension does not match the state");
  if ((generator - generator.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ShapeError("rotation generator must be Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix> es(generator);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (norm < 1e-12) throw ShapeError("rotation generator is numerically zero");

  const KrausChannel none = KrausChannel::identity(static_cast<int>(rho.dim()));
  LittleGroupReport report;
  for (double theta : angles) {
    Vector phases(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < phases.size(); ++k)
      phases(k) = std::polar(1.0, theta * es.eigenvalues()(k) / norm);
    Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const double defect = invariance_defect(obs, rho, none, KrausChannel::unitary(u));
    report.defects.push_back({theta, defect});
    report.max_defect = std::max(report.max_defect, defect);
  }
  return report;
}

DensityMatrix dephased_pair_state(double p0, cplx c) {
  if (p0 < 0.0 || p0 > 1.0) throw InvalidDensityMatrix("population must lie in [0, 1]");
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = p0;
  m(3, 3) = 1.0 - p0;
  m(0, 3) = c;
  m(3, 0) = std::conj(c);
  return DensityMatrix(RegisterShape({2, 2}), std::move(m));
}

KrausChannel random_channel(int dim, int kraus_count, std::uint64_t seed) {
  if (kraus_count < 1) throw InvalidChannel("need at least one operator");
  SplitMix64 rng(derive_seed(seed, {0xC4A05ull}));
  std::vector<Matrix> raw;
  Matrix gram = Matrix::Zero(dim, dim);
  for (int k = 0; k < kraus_count; ++k) {
    Matrix g(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c) {
        double re, im;
        rng.next_gaussian_pair(re, im);
        g(r, c) = cplx(re, im);
      }
    gram += g.adjoint() * g;
    raw.push_back(std::move(g));
  }
  // Right-normalize by gram^{-1/2} so the family is trace-preserving.
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  Matrix inv_sqrt = es.eigenvectors() *
                    es.eigenvalues().cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
                    es.eigenvectors().adjoint();
  for (Matrix& a : raw) a = a * inv_sqrt;
  return KrausChannel(dim, std::move(raw));
}

TripartiteBlochForm TripartiteBlochForm::extract(const DensityMatrix& rho,
                                                 const std::vector<int>& sites_a,
                                                 const std::vector<int>& sites_b,
                                                 const std::vector<int>& sites_e,
                                                 RealVector n) {
  TripartiteBlochForm form;
  auto coherence = [&](const std::vector<int>& sites) {
    const DensityMatrix marginal = partial_trace(rho, sites);
    const OperatorBasis basis = OperatorBasis::gellmann(static_cast<int>(marginal.dim()));
    return bloch_decompose(marginal, basis).components();
  };
  form.a = coherence(sites_a);
  form.b = coherence(sites_b);
  form.c = coherence(sites_e);
  if (n.size() != form.a.size())
    throw ShapeError("observable direction must have d_A^2 - 1 components");
  form.n = std::move(n);
  return form;
}

double TripartiteBlochForm::alignment() const { return n.dot(a); }

}  // namespace qst
