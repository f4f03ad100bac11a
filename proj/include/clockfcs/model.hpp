#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clockfcs/linalg.hpp"

namespace clockfcs {

// Identifies one jump channel: clockwork index `a` (1-based), jump type `j`
// within that clockwork's alphabet, and — on joint feedback systems — the
// pre-jump memory state m. memory = -1 means "no memory coordinate".
struct JumpLabel {
  int clockwork = 1;
  std::string jump;
  int memory = -1;

  auto operator<=>(const JumpLabel&) const = default;

  bool has_memory() const { return memory >= 0; }
  JumpLabel base() const { return {clockwork, jump, -1}; }
  std::string str() const;
};

// Weighted jump count N(t) = sum_j w_j N_j(t). Weights may address either
// (a, j) — applying to every memory state — or a specific (a, j, m).
struct IntegratedCurrent {
  std::map<JumpLabel, double> weights;

  // Weight applying to one concrete (possibly memory-extended) label:
  // exact match first, then the (a, j) fallback, else 0.
  double weight_for(const JumpLabel& label) const;
  bool empty_weights() const;
};

// Hamiltonian plus labeled jump operators on one finite Hilbert space.
// Jumps keep their construction order so every downstream index is
// reproducible.
struct LindbladSpec {
  Matrix hamiltonian;
  std::vector<std::pair<JumpLabel, Matrix>> jumps;

  Eigen::Index dim() const { return hamiltonian.rows(); }
  bool has_label(const JumpLabel& label) const;
  void validate() const;
};

// Continuous-time Markov chain: rates(k, l) is the rate of the l -> k
// transition; the diagonal must be zero.
struct ClassicalClockworkSpec {
  RealMatrix rates;

  int num_states() const { return static_cast<int>(rates.rows()); }
  void validate() const;
};

// dim 2, H = -(E/2)(|0><0| - |1><1|), single jump sqrt(Gamma)|phi><+| with
// |phi> = (|0> + e^{i phi}|1>)/sqrt(2), labeled (1, "tick").
LindbladSpec qubit_clockwork(double energy, double phi, double gamma);

// H = 0 and one jump sqrt(rates(k,l)) |k><l| per nonzero rate, labeled
// (clockwork_index, "l->k").
LindbladSpec classical_to_lindblad(const ClassicalClockworkSpec& spec,
                                   int clockwork_index = 1);

// Tensor composition of non-interacting clockworks, factors in argument
// order. Jump labels keep their type and get clockwork indices offset so
// the composed label set stays collision-free.
LindbladSpec compose_independent(const std::vector<LindbladSpec>& specs);

// kron of identities and `op`, with `op` on factor `pos`.
Matrix embed_factor(const Matrix& op, const std::vector<Eigen::Index>& dims,
                    std::size_t pos);

enum class ControlKind { energy, jump_strength, time_unitary, coupling, classical_rates };

// One admissible range for one control coordinate: either the closed
// interval [lo, hi] or, when `values` is non-empty, that finite set.
struct ParameterAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> values;

  bool contains(double c) const;
  bool operator==(const ParameterAxis&) const = default;
  std::string str() const;
};

// Family of Lindblad specs indexed by a control vector c (Assumption 1's
// parameterized clockworks). Builders are pure; build() enforces range
// membership and output validity.
struct ControlledFamily {
  ControlKind kind = ControlKind::energy;
  std::vector<ParameterAxis> axes;
  std::vector<std::string> jump_names;  // label alphabet, identical for every c
  std::function<LindbladSpec(const std::vector<double>&)> builder;
  int classical_states = 0;  // nonzero only for classical_rates families

  LindbladSpec build(const std::vector<double>& c) const;
  bool symmetric_axes() const;
};

// H(c) = c * H, jumps unchanged; one scalar axis.
ControlledFamily energy_family(const LindbladSpec& base, const ParameterAxis& axis);

// J_j(c) = sqrt(c) * J_j for every jump; the axis must be non-negative.
ControlledFamily jump_strength_family(const LindbladSpec& base, const ParameterAxis& axis);

// J_j(c) = U(c) J_j; U is checked for unitarity at every build.
ControlledFamily time_unitary_family(const LindbladSpec& base,
                                     std::function<Matrix(double)> unitary,
                                     const ParameterAxis& axis);

// H(c) = H1 (x) 1 + 1 (x) H2 + c * H_int with fixed joint jumps.
ControlledFamily coupling_family(const Matrix& h1, const Matrix& h2,
                                 const Matrix& h_int,
                                 const std::vector<std::pair<JumpLabel, Matrix>>& jumps,
                                 const ParameterAxis& axis);

// d-state unidirectional ring x -> x+1 (mod d); c has one coordinate per
// source state, c[x] = rate of the jump out of x, each in `axis`.
ControlledFamily classical_ring_family(int num_states, const ParameterAxis& axis);

}  // namespace clockfcs
