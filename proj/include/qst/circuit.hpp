#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qst/rng.hpp"
#include "qst/state.hpp"
#include "qst/types.hpp"

namespace qst {

/// One unitary block acting on an ordered tuple of sites. The block's
/// row/column index is the mixed-radix number over the tuple's dimensions,
/// first listed site most significant.
struct Gate {
  Matrix block;
  std::vector<int> sites;
};

class Circuit {
 public:
  static constexpr double kUnitaryTol = 1e-10;

  Circuit(RegisterShape shape, std::vector<Gate> gates);

  const RegisterShape& shape() const { return shape_; }
  const std::vector<Gate>& gates() const { return gates_; }

 private:
  RegisterShape shape_;
  std::vector<Gate> gates_;
};

/// Named qubit gates: I, X, Y, Z, H, S, T (one site), CNOT, CZ, SWAP (two
/// sites, first site is the control where applicable).
Matrix named_gate(const std::string& name);

/// y = (block acting on `sites`) x, for an arbitrary (not necessarily
/// unitary) block.
Vector apply_block(const RegisterShape& shape, const Vector& x, const Matrix& block,
                   const std::vector<int>& sites);

/// Dense embedding of a block into the full register space.
Matrix embed_block(const RegisterShape& shape, const Matrix& block,
                   const std::vector<int>& sites);

PureState apply_circuit(const PureState& state, const Circuit& circuit);

/// Full unitary of the circuit as a dense matrix (columns are images of the
/// basis states); refuses registers above the cap.
Matrix circuit_unitary(const Circuit& circuit, std::size_t cap = kDefaultOracleCap);

/// Haar-distributed unitary via QR of a Ginibre matrix, R-phase fixed.
Matrix random_unitary(int dim, SplitMix64& rng);

/// Seeded random circuit: `depth` layers, each a Haar-random two-site block
/// on a random site pair (or a one-site block on single-site registers).
Circuit random_circuit(const RegisterShape& shape, int depth, std::uint64_t seed);

}  // namespace qst
