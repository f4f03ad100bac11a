#include "clockfcs/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clockfcs/errors.hpp"
#include "clockfcs/fcs.hpp"

namespace clockfcs {

namespace {

std::string key_str(int clockwork, const std::string& jump) {
  return "(a=" + std::to_string(clockwork) + ", j=" + jump + ")";
}

int draw_index(RngStream& rng, int n) {
  return std::min(n - 1, static_cast<int>(rng.uniform() * n));
}

}  // namespace

const std::vector<double>& FeedbackPolicy::control(int m, int clockwork) const {
  if (m < 0 || m >= memory_states)
    throw ValidationError("memory state " + std::to_string(m) + " outside 0.." +
                          std::to_string(memory_states - 1));
  if (clockwork < 1 || clockwork > num_clockworks())
    throw ValidationError("clockwork index " + std::to_string(clockwork) +
                          " outside 1.." + std::to_string(num_clockworks()));
  return params[m][clockwork - 1];
}

int FeedbackPolicy::next_memory(int m, const JumpLabel& label) const {
  if (m < 0 || m >= memory_states)
    throw ValidationError("memory state " + std::to_string(m) + " outside 0.." +
                          std::to_string(memory_states - 1));
  auto it = update.find({label.clockwork, label.jump});
  if (it == update.end())
    throw ValidationError("memory update not defined for jump " +
                          key_str(label.clockwork, label.jump));
  if (static_cast<int>(it->second.size()) != memory_states)
    throw ValidationError("memory update for jump " +
                          key_str(label.clockwork, label.jump) + " lists " +
                          std::to_string(it->second.size()) + " entries, need " +
                          std::to_string(memory_states));
  const int next = it->second[m];
  if (next < 0 || next >= memory_states)
    throw ValidationError("memory update for jump " +
                          key_str(label.clockwork, label.jump) + " at m=" +
                          std::to_string(m) + " points to invalid state " +
                          std::to_string(next));
  return next;
}

void FeedbackPolicy::validate(const std::vector<ControlledFamily>& families) const {
  if (memory_states < 1)
    throw ValidationError("policy needs at least one memory state");
  if (families.empty())
    throw ValidationError("policy needs at least one clockwork family");
  if (static_cast<int>(params.size()) != memory_states)
    throw ValidationError("policy lists controls for " +
                          std::to_string(params.size()) + " memory states, need " +
                          std::to_string(memory_states));
  const std::size_t g = families.size();
  for (int m = 0; m < memory_states; ++m) {
    if (params[m].size() != g)
      throw ValidationError("memory state " + std::to_string(m) +
                            " lists controls for " + std::to_string(params[m].size()) +
                            " clockworks, need " + std::to_string(g));
    for (std::size_t a = 0; a < g; ++a) {
      const auto& c = params[m][a];
      const auto& axes = families[a].axes;
      if (c.size() != axes.size())
        throw ValidationError("control for clockwork " + std::to_string(a + 1) +
                              " at m=" + std::to_string(m) + " has " +
                              std::to_string(c.size()) + " coordinates, family expects " +
                              std::to_string(axes.size()));
      for (std::size_t i = 0; i < c.size(); ++i)
        if (!axes[i].contains(c[i]))
          throw ValidationError("control c[" + std::to_string(i) +
                                "] = " + std::to_string(c[i]) + " for clockwork " +
                                std::to_string(a + 1) + " at m=" + std::to_string(m) +
                                " outside admissible " + axes[i].str());
    }
  }
  // Memory update must cover exactly the families' jump alphabet.
  std::size_t covered = 0;
  for (std::size_t a = 0; a < g; ++a) {
    for (const auto& name : families[a].jump_names) {
      auto it = update.find({static_cast<int>(a + 1), name});
      if (it == update.end())
        throw ValidationError("memory update missing for jump " +
                              key_str(static_cast<int>(a + 1), name));
      if (static_cast<int>(it->second.size()) != memory_states)
        throw ValidationError("memory update for jump " +
                              key_str(static_cast<int>(a + 1), name) + " lists " +
                              std::to_string(it->second.size()) +
                              " entries, need " + std::to_string(memory_states));
      for (int next : it->second)
        if (next < 0 || next >= memory_states)
          throw ValidationError("memory update for jump " +
                                key_str(static_cast<int>(a + 1), name) +
                                " points to invalid state " + std::to_string(next));
      ++covered;
    }
  }
  if (covered != update.size()) {
    for (const auto& [key, targets] : update) {
      const auto& [a, name] = key;
      const bool known = a >= 1 && a <= static_cast<int>(g) &&
                         std::find(families[a - 1].jump_names.begin(),
                                   families[a - 1].jump_names.end(),
                                   name) != families[a - 1].jump_names.end();
      if (!known)
        throw ValidationError("memory update references unknown jump " +
                              key_str(a, name));
    }
  }
}

JointSystem build_joint(const std::vector<ControlledFamily>& families,
                        const FeedbackPolicy& policy) {
  policy.validate(families);
  const int g = static_cast<int>(families.size());
  const int mem = policy.memory_states;

  // Freeze every per-memory spec up front and pin the component dimensions.
  std::vector<std::vector<LindbladSpec>> frozen(mem);
  std::vector<Eigen::Index> clock_dims(g);
  for (int m = 0; m < mem; ++m) {
    frozen[m].reserve(g);
    for (int a = 0; a < g; ++a) {
      frozen[m].push_back(families[a].build(policy.params[m][a]));
      if (m == 0)
        clock_dims[a] = frozen[m][a].dim();
      else if (frozen[m][a].dim() != clock_dims[a])
        throw ValidationError("family " + std::to_string(a + 1) +
                              " changes dimension across memory states");
    }
  }

  Eigen::Index clock_total = 1;
  for (auto d : clock_dims) clock_total *= d;
  const Eigen::Index total = clock_total * mem;

  JointSystem joint;
  joint.memory_states = mem;
  joint.component_dims = clock_dims;
  joint.component_dims.push_back(mem);
  joint.spec.hamiltonian = Matrix::Zero(total, total);

  for (int m = 0; m < mem; ++m) {
    Matrix proj = Matrix::Zero(mem, mem);
    proj(m, m) = 1.0;
    for (int a = 0; a < g; ++a) {
      joint.spec.hamiltonian +=
          kron(embed_factor(frozen[m][a].hamiltonian, clock_dims, a), proj);
      for (const auto& [label, op] : frozen[m][a].jumps) {
        const int next = policy.next_memory(m, {a + 1, label.jump});
        Matrix hop = Matrix::Zero(mem, mem);
        hop(next, m) = 1.0;
        joint.spec.jumps.emplace_back(JumpLabel{a + 1, label.jump, m},
                                      kron(embed_factor(op, clock_dims, a), hop));
      }
    }
  }
  joint.spec.validate();
  return joint;
}

FeedbackPolicy constant_policy(const std::vector<ControlledFamily>& families,
                               const std::vector<std::vector<double>>& params) {
  FeedbackPolicy policy;
  policy.memory_states = 1;
  policy.params = {params};
  for (std::size_t a = 0; a < families.size(); ++a)
    for (const auto& name : families[a].jump_names)
      policy.update[{static_cast<int>(a + 1), name}] = {0};
  policy.validate(families);
  return policy;
}

SwitchingSetup two_qubit_switching_policy(double alpha1, double alpha2,
                                          double e_star, double phi_star,
                                          double gamma) {
  const LindbladSpec base = qubit_clockwork(e_star, phi_star, gamma);
  ParameterAxis axis{std::min({0.0, alpha1, alpha2}),
                     std::max({4.0, alpha1, alpha2}),
                     {}};
  SwitchingSetup setup;
  setup.families = {energy_family(base, axis), energy_family(base, axis)};

  // Memory m remembers which clockwork ticked last (0-based); the remembered
  // clockwork runs at alpha1 * E, the other at alpha2 * E.
  FeedbackPolicy& policy = setup.policy;
  policy.memory_states = 2;
  policy.update[{1, "tick"}] = {0, 0};
  policy.update[{2, "tick"}] = {1, 1};
  policy.params.resize(2);
  for (int m = 0; m < 2; ++m)
    for (int a = 0; a < 2; ++a)
      policy.params[m].push_back({a == m ? alpha1 : alpha2});
  policy.validate(setup.families);
  return setup;
}

Protocol1Setup protocol1_policy(const LindbladSpec& internal_clockwork,
                                const ControlledFamily& emission_family) {
  internal_clockwork.validate();
  if (internal_clockwork.jumps.size() != 1)
    throw ValidationError("internal clockwork must have exactly one jump, got " +
                          std::to_string(internal_clockwork.jumps.size()));
  if (emission_family.kind != ControlKind::jump_strength)
    throw ValidationError("emission clockwork must be a jump-strength family");
  if (emission_family.axes.size() != 1 || !emission_family.axes[0].contains(0.0) ||
      !emission_family.axes[0].contains(1.0))
    throw ValidationError("emission family must admit strengths 0 and 1, axis " +
                          (emission_family.axes.empty()
                               ? std::string("(none)")
                               : emission_family.axes[0].str()));

  Protocol1Setup setup;
  setup.families = {
      jump_strength_family(internal_clockwork, ParameterAxis{1.0, 1.0, {1.0}}),
      emission_family};

  // m=1 arms the emission jump; it fires once and disarms itself.
  FeedbackPolicy& policy = setup.policy;
  policy.memory_states = 2;
  policy.update[{1, internal_clockwork.jumps[0].first.jump}] = {1, 1};
  for (const auto& name : emission_family.jump_names) {
    policy.update[{2, name}] = {0, 0};
    setup.output.weights[{2, name}] = 1.0;
  }
  policy.params = {{{1.0}, {0.0}}, {{1.0}, {1.0}}};
  policy.validate(setup.families);
  return setup;
}

int classical_state_index(const std::vector<int>& x, int m,
                          const std::vector<int>& clockwork_dims,
                          int memory_states) {
  if (x.size() != clockwork_dims.size())
    throw ValidationError("state vector length does not match clockwork count");
  long long idx = 0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a] < 0 || x[a] >= clockwork_dims[a])
      throw ValidationError("clockwork " + std::to_string(a + 1) + " state " +
                            std::to_string(x[a]) + " outside 0.." +
                            std::to_string(clockwork_dims[a] - 1));
    idx = idx * clockwork_dims[a] + x[a];
  }
  if (m < 0 || m >= memory_states)
    throw ValidationError("memory state " + std::to_string(m) + " outside 0.." +
                          std::to_string(memory_states - 1));
  return static_cast<int>(idx * memory_states + m);
}

ClassicalJointSystem classical_feedback_rate_matrix(
    const std::vector<int>& clockwork_dims, const FeedbackPolicy& policy) {
  const int g = static_cast<int>(clockwork_dims.size());
  if (g == 0) throw ValidationError("need at least one clockwork");
  if (policy.num_clockworks() != g)
    throw ValidationError("policy drives " + std::to_string(policy.num_clockworks()) +
                          " clockworks, " + std::to_string(g) + " dimensions given");
  if (policy.memory_states < 1)
    throw ValidationError("policy needs at least one memory state");
  if (static_cast<int>(policy.params.size()) != policy.memory_states)
    throw ValidationError("policy lists controls for " +
                          std::to_string(policy.params.size()) +
                          " memory states, need " +
                          std::to_string(policy.memory_states));
  long long n = policy.memory_states;
  for (int a = 0; a < g; ++a) {
    if (clockwork_dims[a] < 2)
      throw ValidationError("classical clockwork " + std::to_string(a + 1) +
                            " needs at least 2 states");
    n *= clockwork_dims[a];
    for (int m = 0; m < policy.memory_states; ++m) {
      const auto& c = policy.params[m][a];
      if (static_cast<int>(c.size()) != clockwork_dims[a])
        throw ValidationError("clockwork " + std::to_string(a + 1) + " at m=" +
                              std::to_string(m) + " lists " +
                              std::to_string(c.size()) + " rates, need " +
                              std::to_string(clockwork_dims[a]));
      for (double rate : c)
        if (!(rate >= 0.0) || !std::isfinite(rate))
          throw ValidationError("negative or non-finite rate for clockwork " +
                                std::to_string(a + 1) + " at m=" +
                                std::to_string(m));
    }
  }

  ClassicalJointSystem system;
  system.clockwork_dims = clockwork_dims;
  system.memory_states = policy.memory_states;
  system.chain.rates = RealMatrix::Zero(n, n);

  std::vector<int> x(g, 0);
  while (true) {
    for (int m = 0; m < policy.memory_states; ++m) {
      const int from = classical_state_index(x, m, clockwork_dims,
                                             policy.memory_states);
      for (int a = 0; a < g; ++a) {
        const int next_x = (x[a] + 1) % clockwork_dims[a];
        const std::string name =
            std::to_string(x[a]) + "->" + std::to_string(next_x);
        const JumpLabel label{a + 1, name, m};
        const int next_m = policy.next_memory(m, label);
        std::vector<int> y = x;
        y[a] = next_x;
        const int to = classical_state_index(y, next_m, clockwork_dims,
                                             policy.memory_states);
        const double rate = policy.params[m][a][x[a]];
        system.transitions.push_back({from, to, rate, label});
        system.chain.rates(to, from) += rate;
      }
    }
    int a = g - 1;
    while (a >= 0 && ++x[a] == clockwork_dims[a]) x[a--] = 0;
    if (a < 0) break;
  }
  system.chain.validate();
  return system;
}

RealMatrix classical_generator(const ClassicalClockworkSpec& chain) {
  chain.validate();
  RealMatrix gen = chain.rates;
  gen.diagonal() -= chain.rates.colwise().sum();
  return gen;
}

IntegratedCurrent total_current(const LindbladSpec& spec) {
  IntegratedCurrent current;
  for (const auto& [label, op] : spec.jumps) current.weights[label.base()] = 1.0;
  return current;
}

IntegratedCurrent total_current(const ClassicalJointSystem& system) {
  IntegratedCurrent current;
  for (const auto& t : system.transitions) current.weights[t.label.base()] = 1.0;
  return current;
}

FeedbackPolicy random_classical_feedback_instance(RngStream& rng,
                                                  int num_clockworks,
                                                  int memory_states,
                                                  double rate_lo,
                                                  double rate_hi) {
  if (num_clockworks < 1 || memory_states < 1)
    throw ValidationError("need at least one clockwork and one memory state");
  if (!(rate_lo > 0.0) || !(rate_hi >= rate_lo))
    throw ValidationError("need 0 < rate_lo <= rate_hi");
  FeedbackPolicy policy;
  policy.memory_states = memory_states;
  policy.params.resize(memory_states);
  for (int m = 0; m < memory_states; ++m) {
    policy.params[m].resize(num_clockworks);
    for (int a = 0; a < num_clockworks; ++a)
      policy.params[m][a] = {rate_lo + (rate_hi - rate_lo) * rng.uniform(),
                             rate_lo + (rate_hi - rate_lo) * rng.uniform()};
  }
  for (int a = 1; a <= num_clockworks; ++a) {
    for (const auto* name : {"0->1", "1->0"}) {
      std::vector<int>& targets = policy.update[{a, name}];
      targets.resize(memory_states);
      for (int m = 0; m < memory_states; ++m)
        targets[m] = draw_index(rng, memory_states);
    }
  }
  return policy;
}

RandomFeedbackInstance random_ergodic_feedback_instance(RngStream& rng,
                                                        int max_clockworks,
                                                        int max_memory,
                                                        double rate_lo,
                                                        double rate_hi) {
  if (max_clockworks < 1 || max_memory < 1)
    throw ValidationError("need at least one clockwork and one memory state");
  for (int attempt = 0; attempt < 256; ++attempt) {
    RandomFeedbackInstance out;
    const int clockworks = 1 + draw_index(rng, max_clockworks);
    const int memory = 1 + draw_index(rng, max_memory);
    out.policy = random_classical_feedback_instance(rng, clockworks, memory,
                                                    rate_lo, rate_hi);
    out.clockwork_dims.assign(clockworks, 2);
    out.system = classical_feedback_rate_matrix(out.clockwork_dims, out.policy);
    try {
      classical_steady_distribution(out.system.chain);
      return out;
    } catch (const KernelDimensionError&) {
      continue;
    }
  }
  throw NumericalError("no ergodic feedback instance within 256 draws");
}

IntegratedCurrent random_current(RngStream& rng, const ClassicalJointSystem& system,
                                 bool with_memory) {
  IntegratedCurrent current;
  for (const auto& t : system.transitions) {
    const JumpLabel key = with_memory ? t.label : t.label.base();
    if (!current.weights.count(key))
      current.weights[key] = 2.0 * rng.uniform() - 1.0;
  }
  return current;
}

}  // namespace clockfcs
