#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here deliberately recomputes results through routes different from the
// library code it checks.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qst/circuit.hpp"
#include "qst/basis.hpp"
#include "qst/hamiltonian.hpp"
#include "qst/observables.hpp"
#include "qst/polyfactor.hpp"
#include "qst/rng.hpp"
#include "qst/state.hpp"

namespace qst::testing {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

inline PureState bell_state() {
  Vector amp = Vector::Zero(4);
  amp(0) = amp(3) = 1.0 / std::sqrt(2.0);
  return PureState(RegisterShape({2, 2}), amp);
}

inline PureState ghz_state(int n) {
  RegisterShape shape(std::vector<int>(static_cast<std::size_t>(n), 2));
  Vector amp = Vector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  amp(0) = 1.0 / std::sqrt(2.0);
  amp(amp.size() - 1) = 1.0 / std::sqrt(2.0);
  return PureState(shape, amp);
}

// Full circuit matrix built directly from the gate definition: an entry
// (row, col) of an embedded gate is the block element when all non-target
// digits agree, zero otherwise. Independent of the strided apply path.
inline Matrix dense_circuit_oracle(const Circuit& circuit) {
  const RegisterShape& shape = circuit.shape();
  const auto dim = static_cast<Eigen::Index>(shape.total_dim());
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : circuit.gates()) {
    Matrix full = Matrix::Zero(dim, dim);
    for (Eigen::Index row = 0; row < dim; ++row) {
      const auto rd = shape.digits_of(static_cast<std::size_t>(row));
      for (Eigen::Index col = 0; col < dim; ++col) {
        const auto cd = shape.digits_of(static_cast<std::size_t>(col));
        bool spectator_match = true;
        for (int s = 0; s < shape.site_count(); ++s) {
          if (std::find(g.sites.begin(), g.sites.end(), s) != g.sites.end()) continue;
          if (rd[static_cast<std::size_t>(s)] != cd[static_cast<std::size_t>(s)]) {
            spectator_match = false;
            break;
          }
        }
        if (!spectator_match) continue;
        Eigen::Index br = 0, bc = 0;
        for (int s : g.sites) {
          br = br * shape.dim(s) + rd[static_cast<std::size_t>(s)];
          bc = bc * shape.dim(s) + cd[static_cast<std::size_t>(s)];
        }
        full(row, col) = g.block(br, bc);
      }
    }
    u = full * u;
  }
  return u;
}

inline Matrix random_hermitian(int dim, SplitMix64& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      double re, im;
      rng.next_gaussian_pair(re, im);
      g(r, c) = cplx(re, im);
    }
  return (g + g.adjoint()) / 2.0;
}

// Random 2-local observable over distinct pairs of a qubit register.
inline LocalObservable random_two_local(const RegisterShape& shape, int term_count,
                                        std::uint64_t seed) {
  SplitMix64 rng(derive_seed(seed, {0x0B5ull}));
  const int n = shape.site_count();
  std::vector<ObservableTerm> terms;
  for (int t = 0; t < term_count; ++t) {
    const int a = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
    int b = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - 1));
    if (b >= a) ++b;
    std::vector<int> sites{std::min(a, b), std::max(a, b)};
    const int dim = shape.dim(sites[0]) * shape.dim(sites[1]);
    terms.push_back({sites, random_hermitian(dim, rng)});
  }
  return LocalObservable(shape, std::move(terms));
}

// Nearest-neighbour Heisenberg chain with seeded couplings and z fields.
inline PauliStringHamiltonian heisenberg_chain(int n, std::uint64_t seed) {
  SplitMix64 rng(derive_seed(seed, {0x4E15ull}));
  std::vector<PauliTerm> terms;
  for (int b = 0; b + 1 < n; ++b) {
    const double coupling = 0.5 + rng.next_double();
    for (char p : {'X', 'Y', 'Z'}) {
      std::string s(static_cast<std::size_t>(n), 'I');
      s[static_cast<std::size_t>(b)] = p;
      s[static_cast<std::size_t>(b) + 1] = p;
      terms.push_back({coupling, s});
    }
  }
  for (int q = 0; q < n; ++q) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(q)] = 'Z';
    terms.push_back({rng.next_double() - 0.5, s});
  }
  return PauliStringHamiltonian(RegisterShape(std::vector<int>(static_cast<std::size_t>(n), 2)),
                                std::move(terms));
}

// Fermionic ladder operator in the occupation basis, built from the Fock
// sign rule (-1)^{number of occupied earlier modes}; the mapping under test
// never touches this construction.
inline Matrix fock_ladder_oracle(int modes, int mode, bool dagger) {
  const RegisterShape shape(std::vector<int>(static_cast<std::size_t>(modes), 2));
  const auto dim = static_cast<Eigen::Index>(shape.total_dim());
  Matrix m = Matrix::Zero(dim, dim);
  for (Eigen::Index src = 0; src < dim; ++src) {
    auto digits = shape.digits_of(static_cast<std::size_t>(src));
    const int occupied = digits[static_cast<std::size_t>(mode)];
    if (dagger && occupied == 1) continue;
    if (!dagger && occupied == 0) continue;
    int parity = 0;
    for (int l = 0; l < mode; ++l) parity += digits[static_cast<std::size_t>(l)];
    digits[static_cast<std::size_t>(mode)] = dagger ? 1 : 0;
    const auto dst = static_cast<Eigen::Index>(shape.index_of(digits));
    m(dst, src) = (parity % 2 == 0) ? 1.0 : -1.0;
  }
  return m;
}

// --- factoring corpus ----------------------------------------------------

struct CorpusInstance {
  MultilinearPolynomial poly;
  bool constructed_factorable;
};

inline Vector random_unit_pair(SplitMix64& rng) {
  Vector v(2);
  double re, im;
  rng.next_gaussian_pair(re, im);
  v(0) = cplx(re, im);
  rng.next_gaussian_pair(re, im);
  v(1) = cplx(re, im);
  return v / v.norm();
}

// Product of k explicit single-site factors with an entangled remainder
// (or a fully random circuit state for the non-factorable half).
inline CorpusInstance corpus_instance(int n, std::uint64_t seed, bool factorable) {
  SplitMix64 rng(derive_seed(seed, {0xC0A5ull, static_cast<std::uint64_t>(n), factorable}));
  const RegisterShape shape(std::vector<int>(static_cast<std::size_t>(n), 2));
  if (!factorable) {
    PureState state = random_state(shape, rng.next_u64());
    return {state_to_poly(state), false};
  }
  const int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - 1));
  Vector amp = Vector::Ones(1);
  for (int s = 0; s < k; ++s) {
    const Vector f = random_unit_pair(rng);
    Vector next(amp.size() * 2);
    next << f(0) * amp, f(1) * amp;
    // Interleave as (site digit, rest) with the new site most significant.
    amp = next;
  }
  const int rest = n - k;
  if (rest > 0) {
    const RegisterShape rest_shape(std::vector<int>(static_cast<std::size_t>(rest), 2));
    const PureState tail = random_state(rest_shape, rng.next_u64());
    Vector joined(amp.size() * tail.amplitudes().size());
    for (Eigen::Index a = 0; a < amp.size(); ++a)
      joined.segment(a * tail.amplitudes().size(), tail.amplitudes().size()) =
          amp(a) * tail.amplitudes();
    amp = joined;
  }
  return {state_to_poly(PureState(shape, amp)), true};
}

}  // namespace qst::testing
