#pragma once

#include <functional>
#include <string>
#include <vector>

#include "clockfcs/fcs.hpp"
#include "clockfcs/policy.hpp"

namespace clockfcs {

// Maps a parameter vector to the full counting statistics of some declared
// current on some declared system family.
using Objective = std::function<FcsResult(const std::vector<double>&)>;

struct SweepAxis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int points = 2;        // >= 1; a single point pins the axis at `lo`
  bool periodic = false; // period hi - lo; wrapped (not clamped) in refine
};

struct SweepGrid {
  std::vector<SweepAxis> axes;
  std::string objective;  // evaluator name, resolved by the caller

  void validate() const;
  long long rows() const;
};

// One evaluated grid point. Degenerate statistics (D ~ 0) and evaluator
// failures keep their row with finite zero columns and a flag, so tables
// always have full Cartesian shape.
struct SweepRow {
  std::vector<double> params;
  double F = 0.0;
  double D = 0.0;
  double S = 0.0;
  bool degenerate = false;
  bool failed = false;
  std::string error;

  std::string flag() const;  // "ok" | "degenerate" | "failed"
};

// Complete Cartesian evaluation in lexicographic axis order (first axis
// slowest). Rows are a pure function of (grid, objective); evaluation may be
// dealt to threads without changing the table.
std::vector<SweepRow> sweep(const SweepGrid& grid, const Objective& objective,
                            int threads = 0);

struct OptimumReport {
  std::vector<double> argmax;
  double value = 0.0;
  std::vector<double> start;  // grid-stage argmax handed to the refiner
  double start_value = 0.0;
  struct TraceEntry {
    int evaluations;
    std::vector<double> params;
    double value;
  };
  std::vector<TraceEntry> trace;  // new-best history; empty when no gain
  int evaluations = 0;
};

// Derivative-free simplex ascent on the SNR with reflection/expansion/
// contraction/shrink. Parameters are clamped to the axis intervals, periodic
// axes are wrapped instead. Stops when the simplex diameter falls below 1e-4
// or after 500 objective evaluations. The returned value never falls below
// the start value; failures anywhere but the start count as dead ends.
OptimumReport refine(const std::vector<double>& start,
                     const Objective& objective,
                     const std::vector<SweepAxis>& axes);

// Canned evaluators behind the named objectives.
Objective qubit_snr_objective(double gamma = 1.0);  // (Delta, phi)
Objective switching_snr_objective(double e_star, double phi_star,
                                  double gamma = 1.0);  // (alpha1, alpha2)
Objective classical_ring_objective(int num_states);     // per-state rates
// Two 2-state rings under last-tick switching; params are the uniform escape
// rates (m=0 clockwork 1, m=0 clockwork 2, m=1 clockwork 1, m=1 clockwork 2).
Objective classical_switching_objective();

enum class ComparisonKind { two_qubit, classical_pair };

struct ComparisonOptions {
  ComparisonKind kind = ComparisonKind::two_qubit;
  double gamma = 1.0;
  // two_qubit: working-point search ranges and the switching-ratio box
  double delta_lo = 0.05;
  double delta_hi = 3.0;
  double alpha_lo = 0.5;
  double alpha_hi = 1.5;
  // classical_pair: admissible escape rates
  double rate_lo = 0.1;
  double rate_hi = 1.0;
};

struct ComparisonReport {
  OptimumReport single_clockwork;  // constant-policy optimum of one clockwork
  OptimumReport feedback;
  double ceiling = 0.0;  // two independent copies of the constant optimum
  double ratio = 0.0;    // feedback.value / ceiling
  bool advantage = false;  // ratio > 1 + 1e-3
};

// Constant-policy ceiling (per-clockwork optimum doubled by additivity of
// independent compositions) against the refined feedback optimum. With every
// feedback axis collapsed to a point the two policies coincide and the ratio
// is exactly 1.
ComparisonReport compare_constant_vs_feedback(const ComparisonOptions& options);

}  // namespace clockfcs
