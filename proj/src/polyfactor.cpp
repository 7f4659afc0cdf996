#include "qst/polyfactor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace qst {

namespace {

int digit_of(char c, int dim, const std::string& key) {
  int digit;
  if (c == 'x')
    digit = 0;
  else if (c == 'y')
    digit = 1;
  else if (c >= '0' && c <= '9')
    digit = c - '0';
  else
    throw InvalidLabel("bad symbol '" + std::string(1, c) + "' in monomial '" + key + "'");
  if (digit >= dim)
    throw InvalidLabel("symbol '" + std::string(1, c) + "' out of range in '" + key + "'");
  return digit;
}

}  // namespace

MultilinearPolynomial::MultilinearPolynomial(std::vector<int> site_dims,
                                             std::map<std::string, cplx> coeffs)
    : site_dims_(std::move(site_dims)) {
  if (site_dims_.empty()) throw InvalidDimension("polynomial needs at least one site");
  for (int d : site_dims_) {
    if (d < 2 || d > 10)
      throw InvalidDimension("per-site symbol count must lie in 2..10");
  }
  for (const auto& [key, c] : coeffs) {
    if (key.size() != site_dims_.size())
      throw InvalidLabel("monomial '" + key + "' must pick one symbol per site");
    std::string canonical(key.size(), '0');
    for (std::size_t i = 0; i < key.size(); ++i)
      canonical[i] = static_cast<char>('0' + digit_of(key[i], site_dims_[i], key));
    coeffs_[canonical] += c;
  }
  // Aliased keys may have merged or cancelled; normalize what remains.
  double norm2 = 0.0;
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (std::abs(it->second) == 0.0) {
      it = coeffs_.erase(it);
    } else {
      norm2 += std::norm(it->second);
      ++it;
    }
  }
  if (coeffs_.empty() || norm2 <= 0.0) throw ZeroInput("zero polynomial");
  scale_ = std::sqrt(norm2);
  for (auto& [key, c] : coeffs_) c /= scale_;
}

PureState poly_to_state(const MultilinearPolynomial& p) {
  const RegisterShape shape(p.site_dims());
  Vector amp = Vector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  std::vector<int> digits(p.site_dims().size());
  for (const auto& [key, c] : p.coefficients()) {
    for (std::size_t i = 0; i < key.size(); ++i) digits[i] = key[i] - '0';
    amp(static_cast<Eigen::Index>(shape.index_of(digits))) = c;
  }
  return PureState(shape, std::move(amp));
}

MultilinearPolynomial::MultilinearPolynomial(std::vector<int> site_dims,
                                             std::map<std::string, cplx> unit_coeffs,
                                             double scale, PrenormalizedTag)
    : site_dims_(std::move(site_dims)), coeffs_(std::move(unit_coeffs)), scale_(scale) {}

MultilinearPolynomial state_to_poly(const PureState& state, double scale) {
  std::map<std::string, cplx> coeffs;
  const RegisterShape& shape = state.shape();
  for (std::size_t idx = 0; idx < shape.total_dim(); ++idx) {
    const cplx c = state.amplitude(idx);
    if (std::abs(c) == 0.0) continue;
    const auto digits = shape.digits_of(idx);
    std::string key(digits.size(), '0');
    for (std::size_t i = 0; i < digits.size(); ++i)
      key[i] = static_cast<char>('0' + digits[i]);
    coeffs[key] = c;
  }
  if (coeffs.empty()) throw ZeroInput("zero polynomial");
  // Amplitudes are already unit-norm; keep them bit-exact.
  return MultilinearPolynomial(shape.dims(), std::move(coeffs), scale,
                               MultilinearPolynomial::PrenormalizedTag{});
}

Vector phase_normalized(Vector v, double threshold) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k));
    if (mag > threshold) {
      v *= std::conj(v(k)) / mag;
      // Clean the pivot's residual imaginary dust.
      v(k) = cplx(std::abs(v(k)), 0.0);
      return v;
    }
  }
  return v;
}

namespace {

// Dominant eigenvector of a (near-)pure density matrix, phase-fixed.
Vector dominant_eigenvector(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  const Eigen::Index last = es.eigenvalues().size() - 1;
  return phase_normalized(es.eigenvectors().col(last));
}

// Linearized standard error of the entropy of a reconstructed marginal,
// propagated from the per-setting moment errors.
double entropy_std_error(const TomographyEstimate& est, const std::vector<int>& dims) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(est.rho_hat.matrix());
  const auto& p = es.eigenvalues();
  constexpr double kFloor = 1e-12;
  const double ln2 = std::log(2.0);
  double variance = 0.0;
  for (const MomentEstimate& m : est.raw_moments) {
    if (m.std_error == 0.0) continue;
    const Matrix op = setting_operator(dims, m.labels);
    double op_norm = 1.0;
    for (std::size_t i = 0; i < dims.size(); ++i)
      op_norm *= m.labels[i] == 0 ? static_cast<double>(dims[i]) : 2.0;
    double sensitivity = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double pk = std::max(p(k), kFloor);
      const double dS_dp = -(std::log2(pk) + 1.0 / ln2);
      const double dp_dm =
          (es.eigenvectors().col(k).adjoint() * op * es.eigenvectors().col(k))(0).real() /
          op_norm;
      sensitivity += dS_dp * dp_dm;
    }
    variance += sensitivity * sensitivity * m.std_error * m.std_error;
  }
  return std::sqrt(variance);
}

struct MarginalProbe {
  DensityMatrix rho;
  double entropy;
  double threshold;
};

MarginalProbe probe_marginal(const PureState& state, const std::vector<int>& sites,
                             double tol, const ShotBudget& budget) {
  if (tol < 0.0) throw InvalidTolerance("tolerance must be non-negative");
  if (budget.is_exact()) {
    DensityMatrix rho = partial_trace(state, sites);
    const double s = von_neumann_entropy(rho);
    return {std::move(rho), s, tol};
  }
  std::vector<int> dims;
  for (int s : sites) dims.push_back(state.shape().dim(s));
  TomographyEstimate est = reconstruct_rdm(state, sites, budget);
  const double s = von_neumann_entropy(est.rho_hat);
  const double threshold =
      std::max({tol, 0.05, 5.0 * entropy_std_error(est, dims)});
  return {std::move(est.rho_hat), s, threshold};
}

}  // namespace

std::optional<LinearFactor> detect_linear_factor(const PureState& state, int site,
                                                 double tol, const ShotBudget& budget) {
  if (site < 0 || site >= state.site_count())
    throw InvalidSites("site index out of range");
  MarginalProbe probe = probe_marginal(state, {site}, tol, budget);
  if (probe.entropy > probe.threshold) return std::nullopt;
  return LinearFactor{site, dominant_eigenvector(probe.rho.matrix())};
}

std::optional<BlockFactor> detect_block_factor(const PureState& state,
                                               const std::vector<int>& sites, double tol,
                                               const ShotBudget& budget) {
  if (sites.empty() || sites.size() > 3)
    throw TooManySites("block factors are probed on 1..3 sites");
  MarginalProbe probe = probe_marginal(state, sites, tol, budget);
  if (probe.entropy > probe.threshold) return std::nullopt;
  return BlockFactor{sites, dominant_eigenvector(probe.rho.matrix())};
}

SeparabilityReport qudit_separability_conditions(const CoherenceVector& m,
                                                 const OperatorBasis& basis, double tol) {
  if (m.dim() != basis.dim()) throw ShapeError("coherence vector and basis dimensions differ");
  if (tol < 0.0) throw InvalidTolerance("tolerance must be non-negative");
  const int d = basis.dim();
  const int n = basis.size();

  SeparabilityReport report;
  report.length_residual = std::abs(m.squared_length() - 0.5 * d * (d - 1));
  if (d > 2) {
    report.star_checked = true;
    RealVector star = RealVector::Zero(n);
    const auto& mv = m.components();
    for (int t = 0; t < n; ++t) {
      double acc = 0.0;
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) acc += basis.star(r, s, t) * mv(r) * mv(s);
      star(t) = acc;
    }
    report.star_residual =
        (star - static_cast<double>(d) * (d - 2) * mv).cwiseAbs().maxCoeff();
  }
  report.passed = report.length_residual <= tol &&
                  (!report.star_checked || report.star_residual <= tol);
  return report;
}

namespace {

// Contracts the given positions of the state with the conjugated factor
// coefficients, returning the raw (unnormalized) remainder amplitudes.
Vector contract_positions(const RegisterShape& shape, const Vector& amp,
                          const std::vector<int>& positions, const Vector& coeffs) {
  std::vector<bool> contracted(static_cast<std::size_t>(shape.site_count()), false);
  for (int p : positions) contracted[static_cast<std::size_t>(p)] = true;
  std::vector<int> rest_sites;
  std::vector<int> rest_dims;
  for (int s = 0; s < shape.site_count(); ++s)
    if (!contracted[static_cast<std::size_t>(s)]) {
      rest_sites.push_back(s);
      rest_dims.push_back(shape.dim(s));
    }

  std::size_t rest_total = 1;
  for (int d : rest_dims) rest_total *= static_cast<std::size_t>(d);
  std::size_t fac_total = 1;
  for (int p : positions) fac_total *= static_cast<std::size_t>(shape.dim(p));
  if (coeffs.size() != static_cast<Eigen::Index>(fac_total))
    throw ShapeError("factor coefficient count does not match its sites");

  Vector out = Vector::Zero(static_cast<Eigen::Index>(rest_total));
  std::vector<int> digits(static_cast<std::size_t>(shape.site_count()), 0);
  for (std::size_t rest_idx = 0; rest_idx < rest_total; ++rest_idx) {
    // Write the remainder digits.
    std::size_t rem = rest_idx;
    for (std::size_t i = rest_sites.size(); i-- > 0;) {
      digits[static_cast<std::size_t>(rest_sites[i])] =
          static_cast<int>(rem % static_cast<std::size_t>(rest_dims[i]));
      rem /= static_cast<std::size_t>(rest_dims[i]);
    }
    cplx acc = 0.0;
    for (std::size_t f = 0; f < fac_total; ++f) {
      std::size_t fr = f;
      for (std::size_t i = positions.size(); i-- > 0;) {
        const auto d = static_cast<std::size_t>(shape.dim(positions[i]));
        digits[static_cast<std::size_t>(positions[i])] = static_cast<int>(fr % d);
        fr /= d;
      }
      acc += std::conj(coeffs(static_cast<Eigen::Index>(f))) *
             amp(static_cast<Eigen::Index>(shape.index_of(digits)));
    }
    out(static_cast<Eigen::Index>(rest_idx)) = acc;
  }
  return out;
}

}  // namespace

FactorReport factorize_fully(const MultilinearPolynomial& p, double tol,
                             const ShotBudget& budget, int variable_cap) {
  if (p.variable_count() > variable_cap)
    throw TooLarge("polynomial exceeds the factoring cap of " +
                   std::to_string(variable_cap) + " variables");
  const int n = p.variable_count();

  FactorReport report;
  report.scale = p.scale();

  PureState original = poly_to_state(p);
  for (int s = 0; s < n; ++s)
    report.site_entropies.push_back(von_neumann_entropy(partial_trace(original, {s})));

  std::vector<int> active(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) active[static_cast<std::size_t>(s)] = s;
  PureState current = original;

  auto deflate = [&](const std::vector<int>& positions, const Vector& coeffs) {
    Vector raw = contract_positions(current.shape(), current.amplitudes(), positions, coeffs);
    const double norm = raw.norm();
    if (norm < 1e-6)
      throw Error("deflation annihilated the state; detected factor is inconsistent");
    report.carry *= norm;
    if (raw.size() == 1) {
      report.carry *= raw(0) / norm;
      active.clear();
      return false;  // nothing left
    }
    std::vector<int> rest_dims;
    std::vector<bool> removed(active.size(), false);
    for (int pidx : positions) removed[static_cast<std::size_t>(pidx)] = true;
    std::vector<int> next_active;
    for (std::size_t i = 0; i < active.size(); ++i)
      if (!removed[i]) {
        next_active.push_back(active[i]);
        rest_dims.push_back(current.shape().dim(static_cast<int>(i)));
      }
    active = std::move(next_active);
    current = PureState(RegisterShape(rest_dims), raw / norm);
    return true;
  };

  // Single-site pass, ascending original site index. Any single site is a
  // proper subset once n >= 2.
  if (n >= 2) {
    bool alive = true;
    for (int s = 0; alive && s < n; ++s) {
      const auto it = std::find(active.begin(), active.end(), s);
      if (it == active.end()) continue;
      const int pos = static_cast<int>(it - active.begin());
      auto factor = detect_linear_factor(current, pos, tol, budget);
      if (!factor) continue;
      report.linear_factors.push_back({s, factor->coefficients});
      alive = deflate({pos}, factor->coefficients);
    }

    // Pair pass over what remains; restart after each extraction since
    // positions shift. The full original pair (n == 2) stays a residual.
    bool extracted = alive;
    while (extracted && active.size() >= 2) {
      extracted = false;
      for (std::size_t i = 0; i < active.size() && !extracted; ++i)
        for (std::size_t j = i + 1; j < active.size() && !extracted; ++j) {
          if (n == 2) continue;
          auto factor = detect_block_factor(
              current, {static_cast<int>(i), static_cast<int>(j)}, tol, budget);
          if (!factor) continue;
          report.block_factors.push_back({{active[i], active[j]}, factor->coefficients});
          extracted = true;
          if (!deflate({static_cast<int>(i), static_cast<int>(j)}, factor->coefficients))
            extracted = false;  // register exhausted
        }
    }
  }

  if (active.empty()) {
    report.fully_factored = true;
  } else {
    report.residual_sites = active;
    report.residual = state_to_poly(current);
  }
  return report;
}

std::optional<Vector> classical_factor_oracle(const MultilinearPolynomial& p, int site,
                                              double sv_tol) {
  if (p.variable_count() > 8)
    throw TooLarge("oracle supports up to 8 variables");
  if (site < 0 || site >= p.variable_count()) throw InvalidSites("site index out of range");

  const RegisterShape shape(p.site_dims());
  const int d = shape.dim(site);
  const auto rest = static_cast<Eigen::Index>(shape.total_dim() / static_cast<std::size_t>(d));

  // Reshape the (unit-norm) coefficient vector as (site symbol) x (rest).
  Matrix reshaped = Matrix::Zero(d, rest);
  std::vector<int> rest_sites;
  for (int s = 0; s < p.variable_count(); ++s)
    if (s != site) rest_sites.push_back(s);
  std::vector<int> digits(static_cast<std::size_t>(p.variable_count()));
  for (const auto& [key, c] : p.coefficients()) {
    for (std::size_t i = 0; i < key.size(); ++i) digits[i] = key[i] - '0';
    Eigen::Index col = 0;
    for (int rs : rest_sites)
      col = col * shape.dim(rs) + digits[static_cast<std::size_t>(rs)];
    reshaped(digits[static_cast<std::size_t>(site)], col) = c;
  }

  Eigen::JacobiSVD<Matrix> svd(reshaped, Eigen::ComputeThinU);
  if (svd.singularValues().size() > 1 && svd.singularValues()(1) > sv_tol)
    return std::nullopt;
  return phase_normalized(svd.matrixU().col(0));
}

double reconstruction_error(const FactorReport& report, const MultilinearPolynomial& input) {
  const RegisterShape shape(input.site_dims());
  const PureState target = poly_to_state(input);

  // Assemble carry * (factor tensor x residual) amplitude by amplitude over
  // the full register; the overall scale cancels against the normalized
  // target.
  Vector recon(static_cast<Eigen::Index>(shape.total_dim()));
  std::optional<PureState> residual_state;
  if (report.residual) residual_state = poly_to_state(*report.residual);

  for (std::size_t idx = 0; idx < shape.total_dim(); ++idx) {
    const auto digits = shape.digits_of(idx);
    cplx value = report.carry;
    for (const LinearFactor& f : report.linear_factors)
      value *= f.coefficients(digits[static_cast<std::size_t>(f.site)]);
    for (const BlockFactor& f : report.block_factors) {
      Eigen::Index joint = 0;
      for (int s : f.sites) joint = joint * shape.dim(s) + digits[static_cast<std::size_t>(s)];
      value *= f.coefficients(joint);
    }
    if (residual_state) {
      Eigen::Index joint = 0;
      for (int s : report.residual_sites)
        joint = joint * shape.dim(s) + digits[static_cast<std::size_t>(s)];
      value *= residual_state->amplitude(static_cast<std::size_t>(joint));
    }
    recon(static_cast<Eigen::Index>(idx)) = value;
  }

  // Optimal global phase alignment, evaluated by direct subtraction.
  const cplx overlap = recon.dot(target.amplitudes());
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0, 0.0);
  return (target.amplitudes() - phase * recon).norm();
}

}  // namespace qst
