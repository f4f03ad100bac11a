#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "clockfcs/policy.hpp"

namespace clockfcs {

// Asymptotic counting statistics of one weighted jump current.
//
// F and D are the long-time mean and variance growth rates of the weighted
// count; S = F^2 / D is the figure of merit everything else is judged by.
// accuracy = S / F is reported as a diagnostic only.  dynamical_activity and
// residual_time are filled for classical (population-space) systems, where
// they bound S from above by A and 1/tau respectively.
struct FcsResult {
  double F = 0.0;
  double D = 0.0;
  double S = 0.0;
  double accuracy = 0.0;
  Matrix steady_state;
  bool degenerate = false;  // D below resolution; S is 0 (F=0) or infinity
  std::optional<double> dynamical_activity;
  std::optional<double> residual_time;
};

// Column-stacked superoperator of the master equation.  Annihilates the trace
// functional from the left: <<1| L = 0.
Matrix vectorized_generator(const LindbladSpec& spec);

// Weighted jump superoperator W = sum_labels w^power (J* (x) J).
Matrix weighted_jump_superoperator(const LindbladSpec& spec,
                                   const IntegratedCurrent& current, int power);

// Unique kernel element of the generator, Hermitized and trace-normalized.
// Throws KernelDimensionError when the kernel is not one-dimensional and
// NonPositiveError when an eigenvalue drops below -1e-8.
Matrix steady_state(const LindbladSpec& spec);

// Group inverse via the projected Moore-Penrose route; verifies the three
// defining identities a posteriori (1e-8 relative) and throws NumericalError
// if they fail.
Matrix group_inverse(const LindbladSpec& spec, const Matrix& rho_ss);
Matrix group_inverse_projected(const Matrix& generator, const Vector& kernel,
                               const Vector& left_kernel);

FcsResult current_and_noise(const LindbladSpec& spec,
                            const IntegratedCurrent& current);

// Population-space route for classical systems: same F, D, S as feeding the
// rate matrix through the Lindblad machinery, at a fraction of the cost.
FcsResult current_and_noise(const ClassicalJointSystem& system,
                            const IntegratedCurrent& current);

RealVector classical_steady_distribution(const ClassicalClockworkSpec& chain);

// Plain chains enter the classical machinery as one-clockwork systems with a
// transition label per nonzero rate.
ClassicalJointSystem labeled_chain(const ClassicalClockworkSpec& chain);

// Closed-form qubit-clockwork statistics in units of the tick rate, as a
// function of Delta = E / Gamma and the jump phase.
struct QubitSnr {
  double F = 0.0;
  double D = 0.0;
  double S = 0.0;
};
QubitSnr analytic_qubit_snr(double delta, double phi);

// Best linear-response current for classical systems: weight 1/Gamma_l on
// every jump out of state l.  Requires transition labels to pin down their
// source states (single-clockwork systems).
IntegratedCurrent hyperaccurate_current(const ClassicalJointSystem& system);

// Kinetic bounds, returned as the bound values themselves: kur_bound is the
// dynamical activity A, cur_bound the tighter 1/tau with tau the mean
// residual time; always S <= 1/tau <= A.
double kur_bound(const ClassicalJointSystem& system);
double cur_bound(const ClassicalJointSystem& system);

// Best achievable SNR under feedback with two-state clockworks and symmetric
// rate ranges: max_m sum_a max_i gamma^(a)_i(m).
double theorem1_bound(const FeedbackPolicy& policy);
double theorem1_bound(const std::vector<ControlledFamily>& families,
                      const FeedbackPolicy& policy);

// Constant policy that meets theorem1_bound: freeze every clockwork at the
// maximizing memory state's larger rate (both directions) and count all jumps.
struct Corollary1 {
  FeedbackPolicy policy;
  IntegratedCurrent current;
};
Corollary1 corollary1_construction(const FeedbackPolicy& policy);

// Speed-up of the dynamics: H -> alpha H, J -> sqrt(alpha) J, so F, D, S all
// scale by alpha.
LindbladSpec rescale_dynamics(const LindbladSpec& spec, double alpha);

// Weight rescaling w -> w / alpha: F scales by 1/alpha, D by 1/alpha^2 and S
// is untouched.
IntegratedCurrent rescale_weights(const IntegratedCurrent& current, double alpha);

// Coefficients maximizing the SNR of sum_a v_a N_a for independent clockworks
// with per-clockwork statistics (F_a, D_a); the optimum adds the SNRs up.
// r_max / r_min record the best and the vanishing mixing ratio of the first
// pair (r_min only exists for two or more inputs).
struct CombinationResult {
  std::vector<double> coefficients;
  double S = 0.0;
  double r_max = 0.0;
  std::optional<double> r_min;
};
CombinationResult optimal_combination(
    const std::vector<std::pair<double, double>>& per_clockwork_fd);

// Dense ergodic chain with uniform random rates, for falsification suites.
ClassicalClockworkSpec random_classical_chain(RngStream& rng, int num_states,
                                              double rate_lo, double rate_hi);

}  // namespace clockfcs
