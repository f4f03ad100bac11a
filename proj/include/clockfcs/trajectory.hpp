#pragma once

#include <cstdint>
#include <optional>

#include "clockfcs/fcs.hpp"
#include "clockfcs/model.hpp"
#include "clockfcs/policy.hpp"

namespace clockfcs {

// Monte Carlo estimates of the integrated current at a fixed horizon,
// accumulated across independent trajectories. se_D comes from the
// fourth-moment formula for the variance of a sample variance.
struct TrajectoryStats {
  double horizon = 0.0;
  int n_traj = 0;
  double mean_N = 0.0;
  double var_N = 0.0;  // unbiased across-trajectory sample variance
  double F_hat = 0.0;  // mean_N / horizon
  double D_hat = 0.0;  // var_N / horizon
  double se_F = 0.0;
  double se_D = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr int kDefaultTrajectories = 10000;

// 500 / median escape rate; the escape spectrum is sum_j J_j^dag J_j for
// Lindblad specs and the per-state outflow for classical chains. Falls back
// to the mean positive rate when the median vanishes.
double default_horizon(const LindbladSpec& spec);
double default_horizon(const ClassicalJointSystem& system);

// Gillespie sampling on the product (state x memory) chain. Initial states
// are drawn from the exact stationary distribution. Throws ValidationError
// when a trajectory reaches a state with zero total escape rate. When the
// chain carries memory, every executed transition is checked against its
// label's pre-jump memory state.
TrajectoryStats simulate_classical(const ClassicalJointSystem& system,
                                   const IntegratedCurrent& current,
                                   double horizon, int n_traj,
                                   std::uint64_t seed, int threads = 0);

// Quantum-jump unraveling: deterministic drift under
// H_eff = H - (i/2) sum_j J_j^dag J_j with exact-in-distribution waiting
// times (survival-norm bisection through the drift eigenbasis), jump channel
// drawn proportionally to |J_j psi|^2, state renormalized after every jump.
// Initial pure states are sampled from the eigendecomposition of the exact
// steady state unless `initial_state` pins them.
//
// Identical (seed, parameters) give bit-identical results for any `threads`:
// trajectory i uses RngStream(seed, i) and the reduction order is fixed.
TrajectoryStats simulate_quantum(
    const LindbladSpec& spec, const IntegratedCurrent& current, double horizon,
    int n_traj, std::uint64_t seed,
    const std::optional<Vector>& initial_state = std::nullopt,
    int threads = 0);

// Joint-system overloads additionally verify memory classicality along every
// trajectory: the state stays confined to one memory block between jumps,
// and with the policy at hand the post-jump block must equal the policy
// update applied to the pre-jump block.
TrajectoryStats simulate_quantum(const JointSystem& system,
                                 const IntegratedCurrent& current,
                                 double horizon, int n_traj,
                                 std::uint64_t seed, int threads = 0);
TrajectoryStats simulate_quantum(const JointSystem& system,
                                 const FeedbackPolicy& policy,
                                 const IntegratedCurrent& current,
                                 double horizon, int n_traj,
                                 std::uint64_t seed, int threads = 0);

}  // namespace clockfcs
