#include "clockfcs/fcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace clockfcs {

namespace {

constexpr double kImagTol = 1e-10;
constexpr double kNoiseFloor = 1e-14;

double real_part(Complex z, const char* what) {
  if (std::abs(z.imag()) > kImagTol * std::max(1.0, std::abs(z.real()))) {
    std::ostringstream msg;
    msg << what << " has imaginary residue " << z.imag()
        << "; vectorization conventions are likely inconsistent";
    throw NumericalError(msg.str());
  }
  return z.real();
}

// Every weighted label must name a jump of the target system, either exactly
// or as the memory-stripped base of one.
template <typename LabelRange>
void check_current_labels(const IntegratedCurrent& current,
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

std::vector<JumpLabel> spec_labels(const LindbladSpec& spec) {
  std::vector<JumpLabel> out;
  out.reserve(spec.jumps.size());
  for (const auto& [label, op] : spec.jumps) out.push_back(label);
  return out;
}

std::vector<JumpLabel> transition_labels(const ClassicalJointSystem& system) {
  std::vector<JumpLabel> out;
  out.reserve(system.transitions.size());
  for (const auto& t : system.transitions) out.push_back(t.label);
  return out;
}

// Assembles F, D, S out of the three scalar contractions; shared by the
// quantum and the population-space route.
FcsResult assemble(double f, double d1, double d2) {
  FcsResult result;
  result.F = f;
  result.D = d1 - 2.0 * d2;
  if (result.D < -kImagTol)
    throw NumericalError("negative noise D = " + std::to_string(result.D));
  if (result.D <= kNoiseFloor) {
    result.degenerate = true;
    result.S = result.F == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    result.accuracy = result.F == 0.0 ? 0.0 : result.S / result.F;
  } else {
    result.S = result.F * result.F / result.D;
    result.accuracy = result.F == 0.0 ? 0.0 : result.F / result.D;
  }
  return result;
}

}  // namespace

Matrix vectorized_generator(const LindbladSpec& spec) {
  spec.validate();
  const Eigen::Index n = spec.dim();
  const Matrix id = Matrix::Identity(n, n);
  Matrix lhat =
      Complex(0.0, -1.0) * (kron(id, spec.hamiltonian) -
                            kron(spec.hamiltonian.transpose(), id));
  for (const auto& [label, j] : spec.jumps) {
    const Matrix jd = j.adjoint() * j;
    lhat += kron(j.conjugate(), j) - 0.5 * kron(id, jd) -
            0.5 * kron(jd.transpose(), id);
  }
  const Vector trace_functional = vectorize(Matrix::Identity(n, n));
  const double leak = (trace_functional.adjoint() * lhat).norm();
  if (leak > 1e-12 * std::max(1.0, lhat.norm()))
    throw NumericalError("generator leaks trace: ||<<1|L|| = " +
                         std::to_string(leak));
  return lhat;
}

Matrix weighted_jump_superoperator(const LindbladSpec& spec,
                                   const IntegratedCurrent& current, int power) {
  const Eigen::Index n = spec.dim();
  Matrix w = Matrix::Zero(n * n, n * n);
  for (const auto& [label, j] : spec.jumps) {
    const double weight = current.weight_for(label);
    if (weight == 0.0) continue;
    w += std::pow(weight, power) * kron(j.conjugate(), j);
  }
  return w;
}

namespace {

Matrix steady_state_from(const Matrix& lhat) {
  const Matrix kernel = null_space(lhat);
  if (kernel.cols() != 1)
    throw KernelDimensionError("steady state is not unique: kernel dimension " +
                               std::to_string(kernel.cols()));
  const Matrix raw = unvectorize(kernel.col(0));
  Matrix rho = (raw + raw.adjoint()) / 2.0;
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12)
    throw NumericalError("steady-state candidate is traceless");
  rho /= tr;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  if (es.info() != Eigen::Success)
    throw NumericalError("steady-state diagonalization failed");
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -1e-8)
    throw NonPositiveError("steady state has eigenvalue " +
                           std::to_string(lowest));
  const double residual = (lhat * vectorize(rho)).norm();
  if (residual > 1e-10 * std::max(1.0, lhat.norm()))
    throw NumericalError("steady-state residual " + std::to_string(residual));
  return rho;
}

}  // namespace

Matrix steady_state(const LindbladSpec& spec) {
  return steady_state_from(vectorized_generator(spec));
}

Matrix group_inverse_projected(const Matrix& generator, const Vector& kernel,
                               const Vector& left_kernel) {
  const Eigen::Index n = generator.rows();
  if (kernel.size() != n || left_kernel.size() != n)
    throw ValidationError("kernel vectors do not match the generator dimension");
  const Complex overlap = (left_kernel.adjoint() * kernel)(0);
  if (std::abs(overlap) < 1e-12)
    throw NumericalError("left and right kernels are orthogonal");
  const Matrix proj = Matrix::Identity(n, n) -
                      (kernel * left_kernel.adjoint()) / overlap;
  const Matrix g = proj * moore_penrose(generator) * proj;

  const double scale_l = std::max(1.0, generator.norm());
  const double scale_g = std::max(1.0, g.norm());
  const Matrix lg = generator * g;
  const Matrix gl = g * generator;
  if ((generator * gl - generator).norm() > 1e-8 * scale_l ||
      (g * lg - g).norm() > 1e-8 * scale_g ||
      (lg - gl).norm() > 1e-8 * scale_l * scale_g)
    throw NumericalError(
        "group-inverse identities failed; generator may be too defective");
  return g;
}

Matrix group_inverse(const LindbladSpec& spec, const Matrix& rho_ss) {
  const Matrix lhat = vectorized_generator(spec);
  const Vector one = vectorize(Matrix::Identity(spec.dim(), spec.dim()));
  return group_inverse_projected(lhat, vectorize(rho_ss), one);
}

FcsResult current_and_noise(const LindbladSpec& spec,
                            const IntegratedCurrent& current) {
  check_current_labels(current, spec_labels(spec));
  const Matrix lhat = vectorized_generator(spec);
  const Matrix rho = steady_state_from(lhat);
  const Vector r = vectorize(rho);
  const Vector one = vectorize(Matrix::Identity(spec.dim(), spec.dim()));

  const Matrix w1 = weighted_jump_superoperator(spec, current, 1);
  const Matrix w2 = weighted_jump_superoperator(spec, current, 2);
  const double f = real_part((one.adjoint() * w1 * r)(0), "average current");
  const double d1 = real_part((one.adjoint() * w2 * r)(0), "noise (activity part)");

  const Matrix g = group_inverse_projected(lhat, r, one);
  const double d2 =
      real_part((one.adjoint() * w1 * g * w1 * r)(0), "noise (correction part)");

  FcsResult result = assemble(f, d1, d2);
  result.steady_state = rho;
  return result;
}

RealVector classical_steady_distribution(const ClassicalClockworkSpec& chain) {
  const Matrix gen = classical_generator(chain).cast<Complex>();
  const Matrix kernel = null_space(gen);
  if (kernel.cols() != 1)
    throw KernelDimensionError(
        "steady distribution is not unique: kernel dimension " +
        std::to_string(kernel.cols()));
  const Complex total = kernel.col(0).sum();
  if (std::abs(total) < 1e-12)
    throw NumericalError("steady-distribution candidate sums to zero");
  const Vector p = kernel.col(0) / total;
  RealVector out(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (std::abs(p(i).imag()) > kImagTol)
      throw NumericalError("steady distribution has imaginary residue");
    if (p(i).real() < -1e-8)
      throw NonPositiveError("steady distribution has entry " +
                             std::to_string(p(i).real()));
    out(i) = p(i).real();
  }
  out /= out.sum();
  return out;
}

FcsResult current_and_noise(const ClassicalJointSystem& system,
                            const IntegratedCurrent& current) {
  check_current_labels(current, transition_labels(system));
  const int n = system.num_states();
  const RealVector p = classical_steady_distribution(system.chain);

  RealMatrix w1 = RealMatrix::Zero(n, n);
  RealMatrix w2 = RealMatrix::Zero(n, n);
  for (const auto& t : system.transitions) {
    const double weight = current.weight_for(t.label);
    w1(t.to, t.from) += weight * t.rate;
    w2(t.to, t.from) += weight * weight * t.rate;
  }

  const double f = (w1 * p).sum();
  const double d1 = (w2 * p).sum();

  const Matrix gen = classical_generator(system.chain).cast<Complex>();
  const Vector kernel = p.cast<Complex>();
  const Vector one = Vector::Ones(n);
  const Matrix g = group_inverse_projected(gen, kernel, one);
  const Vector flux = w1.cast<Complex>() * kernel;
  const double d2 =
      real_part((one.adjoint() * w1.cast<Complex>() * g * flux)(0),
                "noise (correction part)");

  FcsResult result = assemble(f, d1, d2);
  result.steady_state = p.cast<Complex>().asDiagonal();

  const RealVector escape = system.chain.rates.colwise().sum();
  result.dynamical_activity = escape.dot(p);
  if (escape.minCoeff() > 0.0) {
    double tau = 0.0;
    for (int l = 0; l < n; ++l) tau += p(l) / escape(l);
    result.residual_time = tau;
  }
  return result;
}

ClassicalJointSystem labeled_chain(const ClassicalClockworkSpec& chain) {
  chain.validate();
  ClassicalJointSystem system;
  system.chain = chain;
  system.clockwork_dims = {chain.num_states()};
  system.memory_states = 1;
  for (int from = 0; from < chain.num_states(); ++from)
    for (int to = 0; to < chain.num_states(); ++to) {
      const double rate = chain.rates(to, from);
      if (rate == 0.0) continue;
      system.transitions.push_back(
          {from, to, rate,
           JumpLabel{1, std::to_string(from) + "->" + std::to_string(to), 0}});
    }
  return system;
}

QubitSnr analytic_qubit_snr(double delta, double phi) {
  if (!(delta > 0.0))
    throw ValidationError("analytic qubit statistics need Delta > 0");
  const double d2 = delta * delta;
  const double u = 1.0 + 4.0 * d2;
  const double rad = 1.0 - 4.0 * d2 + 16.0 * d2 * d2;
  const double alpha = std::acos(1.0 / std::sqrt(u));
  const double beta = std::acos((-1.0 + 4.0 * d2) / std::sqrt(rad));
  const double den = u - std::sqrt(u) * std::cos(phi - alpha);

  QubitSnr out;
  out.F = 2.0 * d2 / den;
  out.D = d2 *
          ((5.0 - 4.0 * d2 + 32.0 * d2 * d2) - u * std::cos(2.0 * (phi - alpha)) +
           4.0 * std::sqrt(rad) * std::cos(phi + beta)) /
          (den * den * den);
  out.S = out.F * out.F / out.D;
  return out;
}

IntegratedCurrent hyperaccurate_current(const ClassicalJointSystem& system) {
  const RealVector escape = system.chain.rates.colwise().sum();
  IntegratedCurrent current;
  std::map<JumpLabel, int> source_of;
  for (const auto& t : system.transitions) {
    auto [it, inserted] = source_of.emplace(t.label, t.from);
    if (!inserted && it->second != t.from)
      throw ValidationError("jump " + t.label.str() +
                            " leaves several states; the hyperaccurate weights "
                            "are not label-resolved");
    if (!(escape(t.from) > 0.0))
      throw ValidationError("state " + std::to_string(t.from) +
                            " has zero escape rate");
    current.weights[t.label] = 1.0 / escape(t.from);
  }
  return current;
}

double kur_bound(const ClassicalJointSystem& system) {
  const RealVector p = classical_steady_distribution(system.chain);
  const RealVector escape = system.chain.rates.colwise().sum();
  return escape.dot(p);
}

double cur_bound(const ClassicalJointSystem& system) {
  const RealVector p = classical_steady_distribution(system.chain);
  const RealVector escape = system.chain.rates.colwise().sum();
  if (!(escape.minCoeff() > 0.0))
    throw ValidationError("zero escape rate: mean residual time diverges");
  double tau = 0.0;
  for (Eigen::Index l = 0; l < p.size(); ++l) tau += p(l) / escape(l);
  return 1.0 / tau;
}

double theorem1_bound(const FeedbackPolicy& policy) {
  if (policy.memory_states < 1 || policy.params.empty())
    throw ValidationError("policy has no memory states");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& per_m : policy.params) {
    if (per_m.empty()) throw ValidationError("policy drives no clockworks");
    double total = 0.0;
    for (const auto& rates : per_m) {
      if (rates.size() != 2)
        throw ValidationError("bound applies to two-state clockworks; got " +
                              std::to_string(rates.size()) + " rates");
      if (!(rates[0] >= 0.0) || !(rates[1] >= 0.0))
        throw ValidationError("bound applies to non-negative rates");
      total += std::max(rates[0], rates[1]);
    }
    best = std::max(best, total);
  }
  return best;
}

double theorem1_bound(const std::vector<ControlledFamily>& families,
                      const FeedbackPolicy& policy) {
  for (std::size_t a = 0; a < families.size(); ++a) {
    if (families[a].kind != ControlKind::classical_rates ||
        families[a].classical_states != 2)
      throw ValidationError("clockwork " + std::to_string(a + 1) +
                            " is not a two-state classical clockwork");
    if (!families[a].symmetric_axes())
      throw ValidationError("clockwork " + std::to_string(a + 1) +
                            " has an asymmetric rate space; the bound does not apply");
  }
  policy.validate(families);
  return theorem1_bound(policy);
}

Corollary1 corollary1_construction(const FeedbackPolicy& policy) {
  theorem1_bound(policy);  // validates shape
  int best_m = 0;
  double best_total = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < policy.memory_states; ++m) {
    double total = 0.0;
    for (const auto& rates : policy.params[m])
      total += std::max(rates[0], rates[1]);
    if (total > best_total) {
      best_total = total;
      best_m = m;
    }
  }

  Corollary1 out;
  out.policy.memory_states = 1;
  out.policy.params.resize(1);
  const int g = policy.num_clockworks();
  for (int a = 0; a < g; ++a) {
    const double top = std::max(policy.params[best_m][a][0],
                                policy.params[best_m][a][1]);
    out.policy.params[0].push_back({top, top});
    for (const auto* name : {"0->1", "1->0"}) {
      out.policy.update[{a + 1, name}] = {0};
      out.current.weights[{a + 1, name}] = 1.0;
    }
  }
  return out;
}

LindbladSpec rescale_dynamics(const LindbladSpec& spec, double alpha) {
  if (!(alpha > 0.0))
    throw ValidationError("dynamics rescaling needs alpha > 0, got " +
                          std::to_string(alpha));
  LindbladSpec out = spec;
  out.hamiltonian *= alpha;
  const double root = std::sqrt(alpha);
  for (auto& [label, op] : out.jumps) op *= root;
  return out;
}

IntegratedCurrent rescale_weights(const IntegratedCurrent& current, double alpha) {
  if (alpha == 0.0)
    throw ValidationError("weight rescaling needs alpha != 0");
  IntegratedCurrent out = current;
  for (auto& [label, w] : out.weights) w /= alpha;
  return out;
}

CombinationResult optimal_combination(
    const std::vector<std::pair<double, double>>& per_clockwork_fd) {
  if (per_clockwork_fd.empty())
    throw ValidationError("need at least one (F, D) pair");
  for (const auto& [f, d] : per_clockwork_fd) {
    if (!(d > 0.0)) throw ValidationError("noise must be positive to combine");
    if (f == 0.0) throw ValidationError("cannot combine a current with F = 0");
  }

  CombinationResult out;
  out.coefficients = {1.0};
  double f = per_clockwork_fd[0].first;
  double d = per_clockwork_fd[0].second;
  out.r_max = 1.0;
  for (std::size_t a = 1; a < per_clockwork_fd.size(); ++a) {
    const auto& [fa, da] = per_clockwork_fd[a];
    const double r = fa * d / (f * da);
    if (a == 1) {
      out.r_max = r;
      out.r_min = -f / fa;
    }
    out.coefficients.push_back(r);
    f += r * fa;
    d += r * r * da;
  }
  out.S = f * f / d;
  return out;
}

ClassicalClockworkSpec random_classical_chain(RngStream& rng, int num_states,
                                              double rate_lo, double rate_hi) {
  if (num_states < 2)
    throw ValidationError("chain needs at least 2 states");
  if (!(rate_lo > 0.0) || !(rate_hi >= rate_lo))
    throw ValidationError("need 0 < rate_lo <= rate_hi");
  ClassicalClockworkSpec chain;
  chain.rates = RealMatrix::Zero(num_states, num_states);
  for (int from = 0; from < num_states; ++from)
    for (int to = 0; to < num_states; ++to)
      if (to != from) chain.rates(to, from) = rng.uniform(rate_lo, rate_hi);
  return chain;
}

}  // namespace clockfcs
