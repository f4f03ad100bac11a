#include "clockfcs/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "clockfcs/linalg.hpp"
#include "worker_pool.hpp"

namespace clockfcs {

namespace {

constexpr double kBlockTol = 1e-10;      // memory-block confinement (weight)
constexpr double kNormFloor = 1e-12;     // unresolvable survival norm
constexpr double kEigenvalueFloor = 1e-12;  // discarded rho_ss populations

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double horizon_from_rates(std::vector<double> rates, const char* what) {
  const double top = *std::max_element(rates.begin(), rates.end());
  if (top <= 0.0)
    throw ValidationError(std::string(what) +
                          ": no dissipation, default horizon is undefined");
  const double med = median(rates);
  if (med > 1e-12 * top) return 500.0 / med;
  double sum = 0.0;
  int live = 0;
  for (double r : rates)
    if (r > 1e-12 * top) {
      sum += r;
      ++live;
    }
  return 500.0 * live / sum;
}

void require_run_shape(double horizon, int n_traj, const char* what) {
  if (!(horizon > 0.0))
    throw ValidationError(std::string(what) + ": horizon must be positive");
  if (n_traj < 2)
    throw ValidationError(std::string(what) +
                          ": at least two trajectories are needed for a "
                          "variance estimate");
}

template <typename LabelRange>
void require_known_labels(const IntegratedCurrent& current,
                          const LabelRange& labels) {
  for (const auto& [want, w] : current.weights) {
    bool found = false;
    for (const auto& label : labels)
      if (label == want || label.base() == want) {
        found = true;
        break;
      }
    if (!found)
      throw ValidationError("current weights jump " + want.str() +
                            " which the system does not emit");
  }
}

// Counts stored by trajectory index, so the reduction downstream is
// independent of the thread count.
std::vector<double> run_trajectories(int n_traj, int threads,
                                     const std::function<double(int)>& one) {
  std::vector<double> counts(n_traj, 0.0);
  for_each_index(n_traj, threads, [&](int i) { counts[i] = one(i); });
  return counts;
}

TrajectoryStats reduce_stats(const std::vector<double>& counts, double horizon,
                             std::uint64_t seed) {
  const int n = static_cast<int>(counts.size());
  double sum = 0.0;
  for (double c : counts) sum += c;
  const double mean = sum / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double c : counts) {
    const double d2 = (c - mean) * (c - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double var = m2 / (n - 1);
  const double mu4 = m4 / n;

  TrajectoryStats stats;
  stats.horizon = horizon;
  stats.n_traj = n;
  stats.seed = seed;
  stats.mean_N = mean;
  stats.var_N = var;
  stats.F_hat = mean / horizon;
  stats.D_hat = var / horizon;
  stats.se_F = std::sqrt(var / n) / horizon;
  const double var_of_var = (mu4 - (n - 3.0) / (n - 1.0) * var * var) / n;
  stats.se_D = std::sqrt(std::max(0.0, var_of_var)) / horizon;
  return stats;
}

// Weight of the state in each memory block (memory is the fastest index).
int confined_block(const Vector& psi, int memory_states, const char* when) {
  std::vector<double> weight(memory_states, 0.0);
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    weight[i % memory_states] += std::norm(psi(i));
  const auto best = std::max_element(weight.begin(), weight.end());
  const double total = psi.squaredNorm();
  if (total - *best > kBlockTol * total) {
    std::ostringstream msg;
    msg << "state is not confined to a single memory block " << when
        << " (stray weight " << (total - *best) / total << ")";
    throw NumericalError(msg.str());
  }
  return static_cast<int>(best - weight.begin());
}

struct MemoryGuard {
  int memory_states = 1;
  const FeedbackPolicy* policy = nullptr;
};

// Stationary pure-state ensemble. Under a memory guard the decomposition is
// done block by block so degenerate populations cannot mix memory states.
void stationary_ensemble(const LindbladSpec& spec, const MemoryGuard* guard,
                         std::vector<double>& probs,
                         std::vector<Vector>& states) {
  const Matrix rho = steady_state(spec);
  const Eigen::Index dim = rho.rows();
  const int blocks = guard ? guard->memory_states : 1;
  if (blocks < 1 || dim % blocks != 0)
    throw ValidationError("memory register size " + std::to_string(blocks) +
                          " does not divide the system dimension " +
                          std::to_string(dim));
  const Eigen::Index body = dim / blocks;
  for (int m = 0; m < blocks; ++m) {
    Matrix slice(body, body);
    for (Eigen::Index p = 0; p < body; ++p)
      for (Eigen::Index q = 0; q < body; ++q)
        slice(p, q) = rho(p * blocks + m, q * blocks + m);
    Eigen::SelfAdjointEigenSolver<Matrix> eigen(slice);
    for (Eigen::Index k = 0; k < body; ++k) {
      const double p_k = eigen.eigenvalues()(k);
      if (p_k <= kEigenvalueFloor) continue;
      Vector psi = Vector::Zero(dim);
      for (Eigen::Index p = 0; p < body; ++p)
        psi(p * blocks + m) = eigen.eigenvectors()(p, k);
      probs.push_back(p_k);
      states.push_back(std::move(psi));
    }
  }
  if (states.empty())
    throw NumericalError(
        "steady state has no populations above the sampling floor");
}

TrajectoryStats unravel(const LindbladSpec& spec,
                        const IntegratedCurrent& current, double horizon,
                        int n_traj, std::uint64_t seed, int threads,
                        const std::optional<Vector>& initial_state,
                        const MemoryGuard* guard) {
  require_run_shape(horizon, n_traj, "simulate_quantum");
  spec.validate();
  std::vector<JumpLabel> labels;
  labels.reserve(spec.jumps.size());
  for (const auto& [label, op] : spec.jumps) labels.push_back(label);
  require_known_labels(current, labels);

  const Eigen::Index dim = spec.dim();
  if (initial_state) {
    if (initial_state->size() != dim)
      throw ValidationError("initial state dimension " +
                            std::to_string(initial_state->size()) +
                            " does not match the system dimension " +
                            std::to_string(dim));
    if (!(initial_state->norm() > 0.0))
      throw ValidationError("initial state has zero norm");
  }

  Matrix damping = Matrix::Zero(dim, dim);
  for (const auto& [label, op] : spec.jumps) damping += op.adjoint() * op;
  const Matrix drift_generator =
      Complex(0.0, -1.0) * spec.hamiltonian - 0.5 * damping;
  const EigenPropagator drift(drift_generator);

  struct Channel {
    Matrix op;
    double weight;
    JumpLabel label;
  };
  std::vector<Channel> channels;
  channels.reserve(spec.jumps.size());
  for (const auto& [label, op] : spec.jumps)
    channels.push_back({op, current.weight_for(label), label});

  std::vector<double> init_probs;
  std::vector<Vector> init_states;
  if (initial_state) {
    init_probs.push_back(1.0);
    init_states.push_back(initial_state->normalized());
  } else {
    stationary_ensemble(spec, guard, init_probs, init_states);
  }

  auto one = [&](int index) -> double {
    RngStream rng(seed, static_cast<std::uint64_t>(index));
    Vector psi = init_states[rng.categorical(init_probs)];
    int memory = guard ? confined_block(psi, guard->memory_states,
                                        "at the start of a trajectory")
                       : -1;
    double remaining = horizon;
    double acc = 0.0;
    std::vector<double> rates(channels.size(), 0.0);
    std::vector<Vector> kicked(channels.size());
    for (;;) {
      const Vector mixed = drift.mix(psi);
      const double target = rng.uniform();  // survival quantile in [0, 1)
      if (drift.unmix_at(mixed, remaining).squaredNorm() >= target) break;

      // The survival norm is 1 at 0 and below `target` at `remaining`;
      // bisect the monotone decay for the jump time.
      double lo = 0.0;
      double hi = remaining;
      while (hi - lo > 1e-11 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (drift.unmix_at(mixed, mid).squaredNorm() >= target)
          lo = mid;
        else
          hi = mid;
      }
      const double jump_time = 0.5 * (lo + hi);
      Vector before = drift.unmix_at(mixed, jump_time);
      const double survival = before.squaredNorm();
      if (survival < kNormFloor)
        throw NumericalError(
            "survival norm collapsed below 1e-12 before the jump was "
            "resolved");
      before /= std::sqrt(survival);

      for (std::size_t c = 0; c < channels.size(); ++c) {
        kicked[c] = channels[c].op * before;
        rates[c] = kicked[c].squaredNorm();
      }
      const int chosen = rng.categorical(rates);
      const Channel& channel = channels[chosen];

      if (guard) {
        const int before_block =
            confined_block(before, guard->memory_states, "before a jump");
        if (before_block != memory)
          throw NumericalError("memory drifted between jumps");
        if (channel.label.has_memory() && channel.label.memory != memory) {
          std::ostringstream msg;
          msg << "jump " << channel.label.str()
              << " fired while the memory reads " << memory;
          throw NumericalError(msg.str());
        }
        const int after_block =
            confined_block(kicked[chosen], guard->memory_states,
                           "after a jump");
        if (guard->policy) {
          const int expected =
              guard->policy->next_memory(memory, channel.label);
          if (after_block != expected) {
            std::ostringstream msg;
            msg << "jump " << channel.label.str() << " moved the memory to "
                << after_block << " instead of " << expected;
            throw NumericalError(msg.str());
          }
        }
        memory = after_block;
      }

      psi = kicked[chosen] / std::sqrt(rates[chosen]);
      if (std::abs(psi.norm() - 1.0) > 1e-12)
        throw NumericalError("renormalized state norm deviates from 1");
      acc += channel.weight;
      remaining -= jump_time;
    }
    return acc;
  };

  return reduce_stats(run_trajectories(n_traj, threads, one), horizon, seed);
}

}  // namespace

double default_horizon(const LindbladSpec& spec) {
  spec.validate();
  Matrix damping = Matrix::Zero(spec.dim(), spec.dim());
  for (const auto& [label, op] : spec.jumps) damping += op.adjoint() * op;
  Eigen::SelfAdjointEigenSolver<Matrix> eigen(damping);
  std::vector<double> rates(eigen.eigenvalues().data(),
                            eigen.eigenvalues().data() + spec.dim());
  return horizon_from_rates(std::move(rates), "default_horizon");
}

double default_horizon(const ClassicalJointSystem& system) {
  system.chain.validate();
  std::vector<double> rates(system.num_states(), 0.0);
  for (int s = 0; s < system.num_states(); ++s)
    rates[s] = system.chain.rates.col(s).sum();
  return horizon_from_rates(std::move(rates), "default_horizon");
}

TrajectoryStats simulate_classical(const ClassicalJointSystem& system,
                                   const IntegratedCurrent& current,
                                   double horizon, int n_traj,
                                   std::uint64_t seed, int threads) {
  require_run_shape(horizon, n_traj, "simulate_classical");
  system.chain.validate();
  std::vector<JumpLabel> labels;
  labels.reserve(system.transitions.size());
  for (const auto& t : system.transitions) labels.push_back(t.label);
  require_known_labels(current, labels);

  struct Hop {
    double rate;
    int to;
    double weight;
    int label_memory;
  };
  const int num_states = system.num_states();
  std::vector<std::vector<Hop>> hops(num_states);
  std::vector<std::vector<double>> hop_rates(num_states);
  std::vector<double> escape(num_states, 0.0);
  for (const auto& t : system.transitions) {
    if (t.rate <= 0.0) continue;
    hops[t.from].push_back(
        {t.rate, t.to, current.weight_for(t.label), t.label.memory});
    hop_rates[t.from].push_back(t.rate);
    escape[t.from] += t.rate;
  }

  const RealVector stationary = classical_steady_distribution(system.chain);
  std::vector<double> init(stationary.size(), 0.0);
  for (Eigen::Index i = 0; i < stationary.size(); ++i)
    init[i] = std::max(0.0, stationary(i));  // scrub -1e-18 kernel residue
  const int memory_states = system.memory_states;

  auto one = [&](int index) -> double {
    RngStream rng(seed, static_cast<std::uint64_t>(index));
    int state = rng.categorical(init);
    double elapsed = 0.0;
    double acc = 0.0;
    for (;;) {
      if (escape[state] <= 0.0)
        throw ValidationError("absorbing state " + std::to_string(state) +
                              " reached (zero total escape rate)");
      const double wait = rng.exponential(escape[state]);
      if (elapsed + wait > horizon) break;
      elapsed += wait;
      const Hop& hop = hops[state][rng.categorical(hop_rates[state])];
      if (memory_states > 1 && hop.label_memory >= 0 &&
          hop.label_memory != state % memory_states)
        throw NumericalError(
            "transition label memory disagrees with the simulated memory "
            "state");
      acc += hop.weight;
      state = hop.to;
    }
    return acc;
  };

  return reduce_stats(run_trajectories(n_traj, threads, one), horizon, seed);
}

TrajectoryStats simulate_quantum(const LindbladSpec& spec,
                                 const IntegratedCurrent& current,
                                 double horizon, int n_traj,
                                 std::uint64_t seed,
                                 const std::optional<Vector>& initial_state,
                                 int threads) {
  return unravel(spec, current, horizon, n_traj, seed, threads, initial_state,
                 nullptr);
}

TrajectoryStats simulate_quantum(const JointSystem& system,
                                 const IntegratedCurrent& current,
                                 double horizon, int n_traj,
                                 std::uint64_t seed, int threads) {
  const MemoryGuard guard{system.memory_states, nullptr};
  return unravel(system.spec, current, horizon, n_traj, seed, threads,
                 std::nullopt, &guard);
}

TrajectoryStats simulate_quantum(const JointSystem& system,
                                 const FeedbackPolicy& policy,
                                 const IntegratedCurrent& current,
                                 double horizon, int n_traj,
                                 std::uint64_t seed, int threads) {
  const MemoryGuard guard{system.memory_states, &policy};
  return unravel(system.spec, current, horizon, n_traj, seed, threads,
                 std::nullopt, &guard);
}

}  // namespace clockfcs
