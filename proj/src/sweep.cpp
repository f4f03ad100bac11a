#include "clockfcs/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "worker_pool.hpp"

namespace clockfcs {

namespace {

constexpr double kDiameterStop = 1e-4;
constexpr int kEvaluationBudget = 500;

void check_axis(const SweepAxis& axis) {
  if (axis.name.empty()) throw ValidationError("sweep axis without a name");
  if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi))
    throw ValidationError("axis " + axis.name + " has non-finite bounds");
  if (axis.points < 1)
    throw ValidationError("axis " + axis.name + " needs at least one point");
  if (axis.hi < axis.lo)
    throw ValidationError("axis " + axis.name + " has hi < lo");
  if (axis.points >= 2 && !(axis.lo < axis.hi))
    throw ValidationError("axis " + axis.name +
                          " needs lo < hi to place " +
                          std::to_string(axis.points) + " points");
}

double axis_value(const SweepAxis& axis, int index) {
  if (axis.points == 1) return axis.lo;
  return axis.lo + index * (axis.hi - axis.lo) / (axis.points - 1);
}

// Clamp into the box; periodic axes wrap modulo their width instead.
std::vector<double> tame(std::vector<double> x,
                         const std::vector<SweepAxis>& axes) {
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const SweepAxis& axis = axes[i];
    if (axis.periodic && axis.hi > axis.lo) {
      const double width = axis.hi - axis.lo;
      double v = std::fmod(x[i] - axis.lo, width);
      if (v < 0.0) v += width;
      x[i] = axis.lo + v;
    } else {
      x[i] = std::clamp(x[i], axis.lo, axis.hi);
    }
  }
  return x;
}

double simplex_diameter(const std::vector<std::vector<double>>& points) {
  double widest = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < points[i].size(); ++k) {
        const double d = points[i][k] - points[j][k];
        d2 += d * d;
      }
      widest = std::max(widest, std::sqrt(d2));
    }
  return widest;
}

void require_arity(const std::vector<double>& params, std::size_t want,
                   const char* what) {
  if (params.size() != want) {
    std::ostringstream msg;
    msg << what << " expects " << want << " parameters, got " << params.size();
    throw ValidationError(msg.str());
  }
}

FeedbackPolicy last_tick_switching(const std::vector<double>& rates) {
  FeedbackPolicy policy;
  policy.memory_states = 2;
  policy.params = {{{rates[0], rates[0]}, {rates[1], rates[1]}},
                   {{rates[2], rates[2]}, {rates[3], rates[3]}}};
  for (int a = 1; a <= 2; ++a)
    for (const auto* name : {"0->1", "1->0"})
      policy.update[{a, name}] = {a - 1, a - 1};
  return policy;
}

}  // namespace

void SweepGrid::validate() const {
  for (const auto& axis : axes) check_axis(axis);
  if (rows() > 10'000'000)
    throw ValidationError("sweep grid has " + std::to_string(rows()) +
                          " rows; refusing to evaluate more than 10^7");
}

long long SweepGrid::rows() const {
  long long n = 1;
  for (const auto& axis : axes) n *= axis.points;
  return n;
}

std::string SweepRow::flag() const {
  return failed ? "failed" : degenerate ? "degenerate" : "ok";
}

std::vector<SweepRow> sweep(const SweepGrid& grid, const Objective& objective,
                            int threads) {
  grid.validate();
  const long long total = grid.rows();
  std::vector<SweepRow> table(total);
  for_each_index(static_cast<int>(total), threads, [&](int r) {
    SweepRow row;
    row.params.resize(grid.axes.size());
    long long rest = r;
    for (std::size_t i = grid.axes.size(); i-- > 0;) {
      const int index = static_cast<int>(rest % grid.axes[i].points);
      rest /= grid.axes[i].points;
      row.params[i] = axis_value(grid.axes[i], index);
    }
    try {
      const FcsResult result = objective(row.params);
      row.F = result.F;
      row.D = result.D;
      row.degenerate = result.degenerate;
      row.S = std::isfinite(result.S) ? result.S : 0.0;
    } catch (const std::exception& failure) {
      row.failed = true;
      row.error = failure.what();
    }
    table[r] = std::move(row);
  });
  return table;
}

OptimumReport refine(const std::vector<double>& start,
                     const Objective& objective,
                     const std::vector<SweepAxis>& axes) {
  if (axes.size() != start.size())
    throw ValidationError("refine start has " + std::to_string(start.size()) +
                          " coordinates for " + std::to_string(axes.size()) +
                          " axes");
  for (const auto& axis : axes) check_axis(axis);
  for (std::size_t i = 0; i < axes.size(); ++i)
    if (!axes[i].periodic &&
        (start[i] < axes[i].lo - 1e-12 || start[i] > axes[i].hi + 1e-12))
      throw ValidationError("start lies outside axis " + axes[i].name);

  const std::size_t n = axes.size();
  OptimumReport report;
  int evals = 0;

  // f = -S; failures and degenerate statistics are dead ends (+inf), except
  // at the start where they abort the whole refinement.
  auto eval = [&](const std::vector<double>& x, bool rethrow) -> double {
    ++evals;
    try {
      const FcsResult result = objective(x);
      if (result.degenerate || !std::isfinite(result.S))
        throw NumericalError("degenerate statistics during refinement");
      if (result.S > report.value) {
        report.value = result.S;
        report.argmax = x;
        if (evals > 1) report.trace.push_back({evals, x, result.S});
      }
      return -result.S;
    } catch (...) {
      if (rethrow) throw;
      return std::numeric_limits<double>::infinity();
    }
  };

  report.value = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> xs;
  std::vector<double> fs;
  xs.push_back(tame(start, axes));
  fs.push_back(eval(xs[0], true));
  report.start = xs[0];
  report.start_value = -fs[0];

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = xs[0];
    double step = 0.1 * (axes[i].hi - axes[i].lo);
    if (!axes[i].periodic && x[i] + step > axes[i].hi) step = -step;
    x[i] += step;
    xs.push_back(tame(std::move(x), axes));
    fs.push_back(eval(xs.back(), false));
  }

  const auto sort_by_value = [&] {
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> x2;
    std::vector<double> f2;
    for (std::size_t i : order) {
      x2.push_back(xs[i]);
      f2.push_back(fs[i]);
    }
    xs = std::move(x2);
    fs = std::move(f2);
  };

  while (true) {
    sort_by_value();
    if (simplex_diameter(xs) < kDiameterStop) break;
    if (evals + static_cast<int>(n) + 2 > kEvaluationBudget) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += xs[i][k] / n;
    const std::vector<double>& worst = xs.back();

    auto blend = [&](double coeff) {
      std::vector<double> x(n);
      for (std::size_t k = 0; k < n; ++k)
        x[k] = centroid[k] + coeff * (centroid[k] - worst[k]);
      return tame(std::move(x), axes);
    };

    const std::vector<double> reflected = blend(1.0);
    const double f_reflected = eval(reflected, false);
    if (f_reflected < fs[0]) {
      const std::vector<double> expanded = blend(2.0);
      const double f_expanded = eval(expanded, false);
      if (f_expanded < f_reflected) {
        xs.back() = expanded;
        fs.back() = f_expanded;
      } else {
        xs.back() = reflected;
        fs.back() = f_reflected;
      }
      continue;
    }
    if (f_reflected < fs[fs.size() - 2]) {
      xs.back() = reflected;
      fs.back() = f_reflected;
      continue;
    }
    const bool outside = f_reflected < fs.back();
    const std::vector<double> contracted = blend(outside ? 0.5 : -0.5);
    const double f_contracted = eval(contracted, false);
    if (f_contracted < (outside ? f_reflected : fs.back())) {
      xs.back() = contracted;
      fs.back() = f_contracted;
      continue;
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {  // shrink towards the best
      for (std::size_t k = 0; k < n; ++k)
        xs[i][k] = xs[0][k] + 0.5 * (xs[i][k] - xs[0][k]);
      xs[i] = tame(std::move(xs[i]), axes);
      fs[i] = eval(xs[i], false);
    }
  }

  report.evaluations = evals;
  return report;
}

Objective qubit_snr_objective(double gamma) {
  if (!(gamma > 0.0)) throw ValidationError("qubit objective needs gamma > 0");
  return [gamma](const std::vector<double>& p) {
    require_arity(p, 2, "qubit objective (Delta, phi)");
    const LindbladSpec spec = qubit_clockwork(p[0] * gamma, p[1], gamma);
    return current_and_noise(spec, total_current(spec));
  };
}

Objective switching_snr_objective(double e_star, double phi_star,
                                  double gamma) {
  if (!(gamma > 0.0))
    throw ValidationError("switching objective needs gamma > 0");
  return [e_star, phi_star, gamma](const std::vector<double>& p) {
    require_arity(p, 2, "switching objective (alpha1, alpha2)");
    const SwitchingSetup setup =
        two_qubit_switching_policy(p[0], p[1], e_star, phi_star, gamma);
    const JointSystem joint = build_joint(setup.families, setup.policy);
    return current_and_noise(joint.spec, total_current(joint.spec));
  };
}

Objective classical_ring_objective(int num_states) {
  if (num_states < 2)
    throw ValidationError("classical ring needs at least 2 states");
  return [num_states](const std::vector<double>& p) {
    require_arity(p, static_cast<std::size_t>(num_states),
                  "classical ring objective");
    ClassicalClockworkSpec chain;
    chain.rates = RealMatrix::Zero(num_states, num_states);
    for (int x = 0; x < num_states; ++x)
      chain.rates((x + 1) % num_states, x) = p[x];
    const ClassicalJointSystem system = labeled_chain(chain);
    return current_and_noise(system, total_current(system));
  };
}

Objective classical_switching_objective() {
  return [](const std::vector<double>& p) {
    require_arity(p, 4, "classical switching objective");
    const ClassicalJointSystem system =
        classical_feedback_rate_matrix({2, 2}, last_tick_switching(p));
    return current_and_noise(system, total_current(system));
  };
}

ComparisonReport compare_constant_vs_feedback(const ComparisonOptions& options) {
  ComparisonReport report;
  const double pi = std::numbers::pi;

  if (options.kind == ComparisonKind::two_qubit) {
    if (!(options.delta_lo > 0.0) || !(options.delta_hi > options.delta_lo))
      throw ValidationError("need 0 < delta_lo < delta_hi");
    if (!(options.alpha_hi >= options.alpha_lo))
      throw ValidationError("need alpha_lo <= alpha_hi");

    const Objective single = qubit_snr_objective(options.gamma);
    const std::vector<SweepAxis> working_point = {
        {"Delta", options.delta_lo, options.delta_hi, 1, false},
        {"phi", 0.0, 2.0 * pi, 1, true}};
    const std::vector<double> canonical = {
        std::clamp(1.0, options.delta_lo, options.delta_hi), pi};
    report.single_clockwork = refine(canonical, single, working_point);

    const FcsResult best = single(report.single_clockwork.argmax);
    report.ceiling = 2.0 * best.F * best.F / best.D;

    const bool pinned_at_one =
        options.alpha_lo == options.alpha_hi && options.alpha_lo == 1.0;
    if (pinned_at_one) {
      // alpha1 = alpha2 = 1 reproduces two independent copies of the
      // constant optimum; the policies coincide, so the ratio is exact.
      report.feedback.argmax = {1.0, 1.0};
      report.feedback.start = {1.0, 1.0};
      report.feedback.value = report.ceiling;
      report.feedback.start_value = report.ceiling;
      report.ratio = 1.0;
    } else {
      const Objective fb = switching_snr_objective(
          report.single_clockwork.argmax[0] * options.gamma,
          report.single_clockwork.argmax[1], options.gamma);
      const std::vector<SweepAxis> ratios = {
          {"alpha1", options.alpha_lo, options.alpha_hi, 1, false},
          {"alpha2", options.alpha_lo, options.alpha_hi, 1, false}};
      const double mid =
          std::clamp(1.0, options.alpha_lo, options.alpha_hi);
      report.feedback = refine({mid, mid}, fb, ratios);
      report.ratio = report.feedback.value / report.ceiling;
    }
  } else {
    if (!(options.rate_lo > 0.0) || !(options.rate_hi >= options.rate_lo))
      throw ValidationError("need 0 < rate_lo <= rate_hi");

    const Objective single = classical_ring_objective(2);
    const std::vector<SweepAxis> rates = {
        {"rate0", options.rate_lo, options.rate_hi, 1, false},
        {"rate1", options.rate_lo, options.rate_hi, 1, false}};
    const double mid = 0.5 * (options.rate_lo + options.rate_hi);
    report.single_clockwork = refine({mid, mid}, single, rates);

    const FcsResult best = single(report.single_clockwork.argmax);
    report.ceiling = 2.0 * best.F * best.F / best.D;

    if (options.rate_lo == options.rate_hi) {
      // Every rate is pinned, the memory cannot matter: the switched pair is
      // exactly the constant pair.
      const double r = options.rate_lo;
      report.feedback.argmax = {r, r, r, r};
      report.feedback.start = {r, r, r, r};
      report.feedback.value = report.ceiling;
      report.feedback.start_value = report.ceiling;
      report.ratio = 1.0;
    } else {
      const std::vector<SweepAxis> switched = {
          {"rate_m0_c1", options.rate_lo, options.rate_hi, 1, false},
          {"rate_m0_c2", options.rate_lo, options.rate_hi, 1, false},
          {"rate_m1_c1", options.rate_lo, options.rate_hi, 1, false},
          {"rate_m1_c2", options.rate_lo, options.rate_hi, 1, false}};
      report.feedback = refine({mid, mid, mid, mid},
                               classical_switching_objective(), switched);
      report.ratio = report.feedback.value / report.ceiling;
    }
  }

  report.advantage = report.ratio > 1.0 + 1e-3;
  return report;
}

}  // namespace clockfcs
