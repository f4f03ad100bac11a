#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "clockfcs/model.hpp"
#include "clockfcs/rng.hpp"

namespace clockfcs {

// Incoherent feedback: a finite classical memory that is updated on every
// detected jump and selects the control parameters of each clockwork.
//
// Memory states are indexed 0..memory_states-1.  `update` must be total over
// memory x jump-alphabet; `params[m][a-1]` is the control vector handed to
// clockwork a's family while the memory reads m.
struct FeedbackPolicy {
  int memory_states = 1;
  std::map<std::pair<int, std::string>, std::vector<int>> update;
  std::vector<std::vector<std::vector<double>>> params;

  int num_clockworks() const {
    return params.empty() ? 0 : static_cast<int>(params.front().size());
  }
  const std::vector<double>& control(int m, int clockwork) const;
  int next_memory(int m, const JumpLabel& label) const;

  // Structural checks against the controlled families the policy will drive.
  void validate(const std::vector<ControlledFamily>& families) const;
};

// Clockworks + memory merged into one Lindblad system.  Component order is
// clockworks ascending with the memory factor last; jump labels carry the
// pre-jump memory state.
struct JointSystem {
  LindbladSpec spec;
  std::vector<Eigen::Index> component_dims;  // [d_1, ..., d_G, memory]
  int memory_states = 1;
};

JointSystem build_joint(const std::vector<ControlledFamily>& families,
                        const FeedbackPolicy& policy);

FeedbackPolicy constant_policy(const std::vector<ControlledFamily>& families,
                               const std::vector<std::vector<double>>& params);

// Two qubit clockworks whose energies are switched towards the clockwork that
// ticked last: memory m in {0,1} remembers the origin of the latest tick and
// clockwork a runs at alpha1*E if it ticked last, alpha2*E otherwise.
struct SwitchingSetup {
  std::vector<ControlledFamily> families;
  FeedbackPolicy policy;
};

SwitchingSetup two_qubit_switching_policy(double alpha1, double alpha2,
                                          double e_star, double phi_star,
                                          double gamma);

// Gated emission: an internal clockwork ticks freely; each tick arms an
// emission clockwork whose jump is switched off again once it fires.  The
// output current counts emission ticks only.
struct Protocol1Setup {
  std::vector<ControlledFamily> families;
  FeedbackPolicy policy;
  IntegratedCurrent output;
};

Protocol1Setup protocol1_policy(const LindbladSpec& internal_clockwork,
                                const ControlledFamily& emission_family);

// Classical feedback systems on the product state space x memory, kept as an
// explicit rate matrix plus the labeled transition list (zero-rate transitions
// stay listed so label sets are policy-independent).
struct LabeledTransition {
  int from = 0;
  int to = 0;
  double rate = 0.0;
  JumpLabel label;
};

struct ClassicalJointSystem {
  ClassicalClockworkSpec chain;
  std::vector<LabeledTransition> transitions;
  std::vector<int> clockwork_dims;
  int memory_states = 1;

  int num_states() const { return chain.num_states(); }
};

// Policies for classical clockworks store one escape rate per state:
// params[m][a-1][x] is the rate at which clockwork a hops x -> x+1 (mod d_a)
// while the memory reads m.  Ring jump names follow classical_ring_family.
ClassicalJointSystem classical_feedback_rate_matrix(
    const std::vector<int>& clockwork_dims, const FeedbackPolicy& policy);

// State indexing shared by the classical and vectorized routes.
int classical_state_index(const std::vector<int>& x, int m,
                          const std::vector<int>& clockwork_dims,
                          int memory_states);

// Column-stochastic generator: off-diagonal rates with diagonal -escape.
RealMatrix classical_generator(const ClassicalClockworkSpec& chain);

// Weight-1 count of every jump in the spec's alphabet.
IntegratedCurrent total_current(const LindbladSpec& spec);
IntegratedCurrent total_current(const ClassicalJointSystem& system);

// Random two-state-clockwork feedback instances for falsification suites.
FeedbackPolicy random_classical_feedback_instance(RngStream& rng,
                                                  int num_clockworks,
                                                  int memory_states,
                                                  double rate_lo,
                                                  double rate_hi);

// Instance whose joint chain has a unique steady state: clockwork count and
// memory size drawn uniformly from 1..max, then update tables that trap the
// memory in a subset (reducible chain, SNR undefined) rejected and redrawn.
struct RandomFeedbackInstance {
  FeedbackPolicy policy;
  std::vector<int> clockwork_dims;
  ClassicalJointSystem system;
};
RandomFeedbackInstance random_ergodic_feedback_instance(RngStream& rng,
                                                        int max_clockworks,
                                                        int max_memory,
                                                        double rate_lo,
                                                        double rate_hi);

// Random current on the instance's label alphabet; with_memory draws one
// weight per (a, j, m) instead of per (a, j).
IntegratedCurrent random_current(RngStream& rng, const ClassicalJointSystem& system,
                                 bool with_memory);

}  // namespace clockfcs
