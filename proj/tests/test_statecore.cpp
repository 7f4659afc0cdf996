#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "qst/basis.hpp"
#include "qst/circuit.hpp"
#include "qst/hamiltonian.hpp"
#include "qst/state.hpp"
#include "support/test_helpers.hpp"

using namespace qst;
using namespace qst::testing;

TEST_CASE("basis_state places a single amplitude by mixed-radix index") {
  const PureState s = basis_state(RegisterShape({2, 2}), "00");
  CHECK(s.amplitude(0) == cplx(1.0, 0.0));
  CHECK(s.amplitudes().tail(3).norm() == 0.0);

  const PureState mixed = basis_state(RegisterShape({2, 3}), "12");
  CHECK(mixed.amplitude(5) == cplx(1.0, 0.0));
  CHECK(mixed.amplitudes().norm() == doctest::Approx(1.0));

  CHECK_THROWS_AS(basis_state(RegisterShape({2}), "2"), InvalidLabel);
  CHECK_THROWS_AS(basis_state(RegisterShape({2, 2}), "0"), InvalidLabel);
}

TEST_CASE("register shape enforces caps and dimension bounds") {
  CHECK_THROWS_AS(RegisterShape({1}), InvalidDimension);
  CHECK_THROWS_AS(RegisterShape(std::vector<int>(25, 2)), TooLarge);
  const RegisterShape shape({2, 3, 2});
  CHECK(shape.total_dim() == 12);
  CHECK(shape.stride(0) == 6);
  CHECK(shape.stride(2) == 1);
  CHECK(shape.index_of({1, 2, 1}) == 11);
  CHECK(shape.digits_of(11) == std::vector<int>{1, 2, 1});
}

TEST_CASE("apply_circuit matches elementary gate actions") {
  const RegisterShape shape({2, 2});
  const PureState zero = basis_state(shape, "00");

  const Circuit flip(shape, {{named_gate("X"), {0}}});
  CHECK((apply_circuit(zero, flip).amplitudes() - basis_state(shape, "10").amplitudes()).norm() ==
        doctest::Approx(0.0));

  const Circuit bell(shape, {{named_gate("H"), {0}}, {named_gate("CNOT"), {0, 1}}});
  CHECK((apply_circuit(zero, bell).amplitudes() - bell_state().amplitudes()).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("apply_circuit agrees with the dense matrix oracle") {
  const RegisterShape shape({2, 2, 2});
  const Circuit circuit = random_circuit(shape, 20, 91);
  const Matrix u = dense_circuit_oracle(circuit);
  const PureState in = random_state(shape, 17);
  const PureState out = apply_circuit(in, circuit);
  CHECK((u * in.amplitudes() - out.amplitudes()).norm() < 1e-12);

  // Mixed-dimension register with explicit one and two site blocks.
  const RegisterShape mixed({2, 3});
  const Circuit mixed_circuit = random_circuit(mixed, 12, 5);
  const PureState min = random_state(mixed, 23);
  CHECK((dense_circuit_oracle(mixed_circuit) * min.amplitudes() -
         apply_circuit(min, mixed_circuit).amplitudes())
            .norm() < 1e-12);
}

TEST_CASE("norm is preserved by seeded random circuits") {
  for (int n = 2; n <= 8; n += 3) {
    const RegisterShape shape(std::vector<int>(static_cast<std::size_t>(n), 2));
    const PureState in = random_state(shape, static_cast<std::uint64_t>(n) * 7 + 1);
    const PureState out = apply_circuit(in, random_circuit(shape, 30, static_cast<std::uint64_t>(n)));
    CHECK(std::abs(out.amplitudes().norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("named gate library") {
  for (const char* name : {"I", "X", "Y", "Z", "H", "S", "T", "CNOT", "CZ", "SWAP"}) {
    const Matrix g = named_gate(name);
    CHECK((g.adjoint() * g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <
          1e-14);
  }
  CHECK(std::abs(named_gate("S")(1, 1) - cplx(0, 1)) < 1e-15);
  CHECK(std::abs(named_gate("T")(1, 1) - std::polar(1.0, M_PI / 4)) < 1e-15);
  CHECK_THROWS_AS(named_gate("Q"), InvalidLabel);

  const RegisterShape shape({2, 2});
  const Circuit swap(shape, {{named_gate("SWAP"), {0, 1}}});
  CHECK((apply_circuit(basis_state(shape, "01"), swap).amplitudes() -
         basis_state(shape, "10").amplitudes())
            .norm() < 1e-14);

  // CZ flips the phase of |11> only.
  const Circuit cz(shape, {{named_gate("CZ"), {0, 1}}});
  const PureState in = random_state(shape, 3);
  const PureState out = apply_circuit(in, cz);
  CHECK(std::abs(out.amplitude(3) + in.amplitude(3)) < 1e-14);
  CHECK(std::abs(out.amplitude(0) - in.amplitude(0)) < 1e-14);
}

TEST_CASE("partial trace respects the requested site order") {
  const PureState s = basis_state(RegisterShape({2, 2}), "01");
  const Matrix forward = partial_trace(s, {0, 1}).matrix();
  const Matrix swapped = partial_trace(s, {1, 0}).matrix();
  CHECK(std::abs(forward(1, 1).real() - 1.0) < 1e-14);   // |01> in (site0, site1)
  CHECK(std::abs(swapped(2, 2).real() - 1.0) < 1e-14);   // |10> in (site1, site0)
}

TEST_CASE("circuit validation rejects malformed gates") {
  const RegisterShape shape({2, 2});
  Matrix not_unitary = Matrix::Identity(2, 2);
  not_unitary(0, 0) = 2.0;
  CHECK_THROWS_AS(Circuit(shape, {{not_unitary, {0}}}), ShapeError);
  CHECK_THROWS_AS(Circuit(shape, {{named_gate("CNOT"), {0, 0}}}), InvalidSites);
  CHECK_THROWS_AS(Circuit(shape, {{named_gate("X"), {2}}}), InvalidSites);
  CHECK_THROWS_AS(apply_circuit(basis_state(RegisterShape({2}), "0"),
                                Circuit(shape, {{named_gate("X"), {0}}})),
                  ShapeError);
}

TEST_CASE("partial trace of canonical two-qubit states") {
  const DensityMatrix half = partial_trace(bell_state(), {0});
  CHECK((half.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-14);

  const DensityMatrix pure = partial_trace(basis_state(RegisterShape({2, 2}), "01"), {0});
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK((pure.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(partial_trace(bell_state(), {}), InvalidSites);
  CHECK_THROWS_AS(partial_trace(bell_state(), {0, 0}), InvalidSites);
}

TEST_CASE("dephased pair marginals are insensitive to the coherence") {
  // rho = p|00><00| + (1-p)|11><11| + c|00><11| + c*|11><00|.
  const double p = 0.3;
  const double c_max = std::sqrt(p * (1 - p));
  for (int k = 0; k <= 10; ++k) {
    const double c = c_max * k / 10.0;
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = p;
    m(3, 3) = 1 - p;
    m(0, 3) = m(3, 0) = c;
    const DensityMatrix rho(RegisterShape({2, 2}), m);
    for (int site : {0, 1}) {
      const Matrix marginal = partial_trace(rho, {site}).matrix();
      CHECK(std::abs(marginal(0, 0).real() - p) < 1e-14);
      CHECK(std::abs(marginal(1, 1).real() - (1 - p)) < 1e-14);
      CHECK(std::abs(marginal(0, 1)) < 1e-14);
    }
  }
}

TEST_CASE("partial trace consistency on random states") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const RegisterShape shape({2, 2, 3, 2, 2});
    const PureState psi = random_state(shape, seed);
    const DensityMatrix pair = partial_trace(psi, {1, 3});
    CHECK(std::abs(pair.matrix().trace().real() - 1.0) < 1e-12);
    const DensityMatrix nested = partial_trace(pair, {0});
    const DensityMatrix direct = partial_trace(psi, {1});
    CHECK((nested.matrix() - direct.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pair marginal elements match the double-loop formula") {
  // rho^{ij}[(a,b),(g,d)] = sum over spectator digits of
  // psi(a_i b_j m) conj(psi(g_i d_j m)).
  const RegisterShape shape({2, 2, 2, 2, 2});
  const PureState psi = random_state(shape, 77);
  const int i = 1, j = 3;
  const DensityMatrix rdm = partial_trace(psi, {i, j});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int g = 0; g < 2; ++g)
        for (int d = 0; d < 2; ++d) {
          cplx expected = 0.0;
          for (std::size_t idx = 0; idx < shape.total_dim(); ++idx) {
            auto digits = shape.digits_of(idx);
            if (digits[i] != a || digits[j] != b) continue;
            auto other = digits;
            other[i] = g;
            other[j] = d;
            expected += psi.amplitude(idx) *
                        std::conj(psi.amplitude(shape.index_of(other)));
          }
          CHECK(std::abs(rdm.matrix()(a * 2 + b, g * 2 + d) - expected) < 1e-12);
        }
}

TEST_CASE("entropy values and symmetry") {
  const DensityMatrix mixed(RegisterShape({2}), Matrix::Identity(2, 2) / 2.0);
  CHECK(von_neumann_entropy(mixed) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(von_neumann_entropy(partial_trace(basis_state(RegisterShape({2, 2}), "01"), {0})) <
        1e-12);

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  CHECK(von_neumann_entropy(DensityMatrix(RegisterShape({2}), diag)) ==
        doctest::Approx(0.8812908992306927).epsilon(1e-12));

  for (std::uint64_t seed : {11ull, 12ull}) {
    const RegisterShape shape({2, 3, 2, 2});
    const PureState psi = random_state(shape, seed);
    const double sa = von_neumann_entropy(partial_trace(psi, {0, 1}));
    const double sb = von_neumann_entropy(partial_trace(psi, {2, 3}));
    CHECK(std::abs(sa - sb) < 1e-10);
  }
}

TEST_CASE("purity of reference states") {
  CHECK(purity(partial_trace(basis_state(RegisterShape({2, 2}), "01"), {0})) ==
        doctest::Approx(1.0));
  CHECK(purity(DensityMatrix(RegisterShape({3}), Matrix::Identity(3, 3) / 3.0)) ==
        doctest::Approx(1.0 / 3.0));
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  CHECK(purity(DensityMatrix(RegisterShape({2}), diag)) == doctest::Approx(0.58));
}

TEST_CASE("density matrix validation") {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = cplx(0.0, 0.2);  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix(RegisterShape({2}), bad / 2.0), InvalidDensityMatrix);

  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  CHECK_THROWS_AS(DensityMatrix(RegisterShape({2}), neg), InvalidDensityMatrix);

  CHECK_THROWS_AS(DensityMatrix(RegisterShape({2}), Matrix::Identity(2, 2)),
                  InvalidDensityMatrix);  // trace 2
}

TEST_CASE("generalized basis reduces to the Pauli matrices for d = 2") {
  const OperatorBasis basis = gellmann_basis(2);
  REQUIRE(basis.size() == 3);
  CHECK((basis.op(0) - pauli_matrix('X')).cwiseAbs().maxCoeff() == 0.0);
  CHECK((basis.op(1) - pauli_matrix('Y')).cwiseAbs().maxCoeff() == 0.0);
  CHECK((basis.op(2) - pauli_matrix('Z')).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs((basis.op(0) * basis.op(1)).trace()) < 1e-14);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s)
      for (int t = 0; t < 3; ++t) CHECK(basis.star(r, s, t) == doctest::Approx(0.0));
  CHECK_THROWS_AS(gellmann_basis(1), InvalidDimension);
}

TEST_CASE("generalized basis is orthogonal, traceless and has a symmetric star tensor") {
  for (int d : {3, 4, 5}) {
    const OperatorBasis basis = gellmann_basis(d);
    REQUIRE(basis.size() == d * d - 1);
    for (int r = 0; r < basis.size(); ++r) {
      CHECK(std::abs(basis.op(r).trace()) < 1e-12);
      for (int t = 0; t < basis.size(); ++t) {
        const double expected = r == t ? 2.0 : 0.0;
        CHECK(std::abs((basis.op(r) * basis.op(t)).trace().real() - expected) < 1e-12);
      }
    }
  }
  const OperatorBasis qutrit = gellmann_basis(3);
  for (int r = 0; r < 8; ++r)
    for (int s = 0; s < 8; ++s)
      for (int t = 0; t < 8; ++t) {
        CHECK(std::abs(qutrit.star(r, s, t) - qutrit.star(s, r, t)) < 1e-12);
        CHECK(std::abs(qutrit.star(r, s, t) - qutrit.star(t, s, r)) < 1e-12);
      }
}

TEST_CASE("coherence vectors of canonical qubit states") {
  const OperatorBasis basis = gellmann_basis(2);
  Matrix ket0 = Matrix::Zero(2, 2);
  ket0(0, 0) = 1.0;
  const CoherenceVector m0 = bloch_decompose(DensityMatrix(RegisterShape({2}), ket0), basis);
  CHECK(m0.components()(0) == doctest::Approx(0.0));
  CHECK(m0.components()(1) == doctest::Approx(0.0));
  CHECK(m0.components()(2) == doctest::Approx(1.0));

  const CoherenceVector mixed = bloch_decompose(
      DensityMatrix(RegisterShape({2}), Matrix::Identity(2, 2) / 2.0), basis);
  CHECK(mixed.components().norm() < 1e-14);

  Matrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  const CoherenceVector mp = bloch_decompose(DensityMatrix(RegisterShape({2}), plus), basis);
  CHECK(mp.components()(0) == doctest::Approx(1.0));
  CHECK(mp.components()(1) == doctest::Approx(0.0));
  CHECK(mp.components()(2) == doctest::Approx(0.0));
}

TEST_CASE("coherence decomposition round-trips and pure states have fixed length") {
  for (int d = 2; d <= 5; ++d) {
    const OperatorBasis basis = gellmann_basis(d);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const PureState psi = random_state(RegisterShape({d}), seed * 31 + d);
      const DensityMatrix rho = DensityMatrix::from_pure(psi);
      const CoherenceVector m = bloch_decompose(rho, basis);
      CHECK((matrix_from_coherence(m, basis) - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(m.squared_length() - 0.5 * d * (d - 1)) < 1e-9);
    }
  }
}

TEST_CASE("exact propagator on reference inputs") {
  const RegisterShape one({2});
  const PauliStringHamiltonian hz(one, {{1.0, "Z"}});

  const Matrix at_pi = exact_propagator(hz, M_PI);
  CHECK(std::abs(at_pi(0, 0) - std::polar(1.0, M_PI)) < 1e-12);
  CHECK(std::abs(at_pi(1, 1) - std::polar(1.0, -M_PI)) < 1e-12);
  CHECK(std::abs(at_pi(0, 1)) < 1e-14);

  CHECK((exact_propagator(hz, 0.0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  // Group property.
  const PauliStringHamiltonian h2 = heisenberg_chain(2, 9);
  const Matrix u1 = exact_propagator(h2, 0.4);
  const Matrix u2 = exact_propagator(h2, 0.9);
  const Matrix u12 = exact_propagator(h2, 1.3);
  CHECK((u1 * u2 - u12).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("exact propagator matches a series-based exponential") {
  const PauliStringHamiltonian h = heisenberg_chain(2, 4);
  const Matrix hm = dense_hamiltonian(h);
  const Matrix expected = (cplx(0.0, 0.37) * hm).exp();  // Pade-based route
  CHECK((exact_propagator(h, 0.37) - expected).cwiseAbs().maxCoeff() < 1e-12);

  const Matrix u = exact_propagator(h, 1.7);
  CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("product formula is exact for commuting strings and single terms") {
  const RegisterShape shape({2, 2});
  const PauliStringHamiltonian commuting(shape, {{0.7, "ZI"}, {0.3, "IZ"}, {0.2, "ZZ"}});
  const Matrix exact = exact_propagator(commuting, 1.3);
  for (int steps : {1, 3}) {
    const Matrix approx = circuit_unitary(trotterize(commuting, 1.3, steps));
    CHECK((exact - approx).cwiseAbs().maxCoeff() < 1e-10);
  }

  const PauliStringHamiltonian single(shape, {{0.9, "XY"}});
  CHECK((exact_propagator(single, 2.1) - circuit_unitary(trotterize(single, 2.1, 1)))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("product formula error halves when steps double") {
  const PauliStringHamiltonian h = heisenberg_chain(3, 42);
  const Matrix exact = exact_propagator(h, 1.0);
  auto spectral_error = [&](int steps) {
    const Matrix diff = exact - circuit_unitary(trotterize(h, 1.0, steps));
    Eigen::JacobiSVD<Matrix> svd(diff);
    return svd.singularValues()(0);
  };
  const double e16 = spectral_error(16);
  const double e32 = spectral_error(32);
  const double ratio = e16 / e32;
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.5);
  CHECK_THROWS_AS(trotterize(h, 1.0, 0), InvalidMode);
}

TEST_CASE("hamiltonian validation") {
  CHECK_THROWS_AS(PauliStringHamiltonian(RegisterShape({3}), {{1.0, "Z"}}), InvalidDimension);
  CHECK_THROWS_AS(PauliStringHamiltonian(RegisterShape({2}), {{1.0, "Q"}}), InvalidLabel);
  CHECK_THROWS_AS(PauliStringHamiltonian(RegisterShape({2, 2}), {{1.0, "Z"}}), ShapeError);
  CHECK_THROWS_AS(PauliStringHamiltonian(RegisterShape({2}), {{1.0, "Z"}, {2.0, "X"}}, 1),
                  TooLarge);
}

TEST_CASE("dense routines refuse registers above their caps") {
  const PauliStringHamiltonian h = heisenberg_chain(3, 1);
  CHECK_THROWS_AS(exact_propagator(h, 0.5, 4), TooLarge);
  CHECK_THROWS_AS(circuit_unitary(random_circuit(RegisterShape({2, 2, 2}), 2, 1), 4),
                  TooLarge);
}

TEST_CASE("coherence decomposition rejects dimension mismatches") {
  const OperatorBasis qutrit = gellmann_basis(3);
  const DensityMatrix qubit(RegisterShape({2}), Matrix::Identity(2, 2) / 2.0);
  CHECK_THROWS_AS(bloch_decompose(qubit, qutrit), ShapeError);
}
