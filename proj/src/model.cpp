#include "clockfcs/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace clockfcs {

std::string JumpLabel::str() const {
  std::ostringstream out;
  out << "(a=" << clockwork << ", j=" << jump;
  if (has_memory()) out << ", m=" << memory;
  out << ")";
  return out.str();
}

double IntegratedCurrent::weight_for(const JumpLabel& label) const {
  if (auto it = weights.find(label); it != weights.end()) return it->second;
  if (label.has_memory()) {
    if (auto it = weights.find(label.base()); it != weights.end()) return it->second;
  }
  return 0.0;
}

bool IntegratedCurrent::empty_weights() const {
  for (const auto& [label, w] : weights)
    if (w != 0.0) return false;
  return true;
}

bool LindbladSpec::has_label(const JumpLabel& label) const {
  for (const auto& [l, op] : jumps)
    if (l == label) return true;
  return false;
}

void LindbladSpec::validate() const {
  if (hamiltonian.rows() == 0 || hamiltonian.rows() != hamiltonian.cols())
    throw ValidationError("hamiltonian must be square and non-empty");
  require_finite(hamiltonian, "hamiltonian");
  const double scale = std::max(1.0, hamiltonian.norm());
  const double herm = (hamiltonian - hamiltonian.adjoint()).norm();
  if (herm > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "hamiltonian is not Hermitian: ||H - H^dagger|| = " << herm
        << " exceeds 1e-12 * max(1, ||H||) = " << 1e-12 * scale;
    throw ValidationError(msg.str());
  }
  std::set<JumpLabel> seen;
  for (const auto& [label, op] : jumps) {
    if (label.clockwork < 1)
      throw ValidationError("jump label " + label.str() + " has clockwork index < 1");
    if (label.jump.empty())
      throw ValidationError("jump label with empty jump type");
    if (!seen.insert(label).second)
      throw ValidationError("duplicate jump label " + label.str());
    if (op.rows() != dim() || op.cols() != dim())
      throw ValidationError("jump operator " + label.str() +
                            " does not match the Hilbert dimension");
    require_finite(op, "jump operator " + label.str());
  }
}

void ClassicalClockworkSpec::validate() const {
  if (rates.rows() == 0 || rates.rows() != rates.cols())
    throw ValidationError("rate matrix must be square and non-empty");
  if (!rates.allFinite())
    throw ValidationError("rate matrix contains NaN or infinite entries");
  for (int k = 0; k < rates.rows(); ++k) {
    if (rates(k, k) != 0.0)
      throw ValidationError("rate matrix diagonal must be zero (state " +
                            std::to_string(k) + ")");
    for (int l = 0; l < rates.cols(); ++l)
      if (rates(k, l) < 0.0)
        throw ValidationError("negative rate for transition " + std::to_string(l) +
                              "->" + std::to_string(k));
  }
}

LindbladSpec qubit_clockwork(double energy, double phi, double gamma) {
  if (!(gamma > 0.0))
    throw ValidationError("qubit clockwork needs Gamma > 0, got " + std::to_string(gamma));
  LindbladSpec spec;
  spec.hamiltonian = Matrix::Zero(2, 2);
  spec.hamiltonian(0, 0) = -energy / 2.0;
  spec.hamiltonian(1, 1) = energy / 2.0;
  // sqrt(Gamma) |phi><+| written out entrywise
  const Complex phase = std::exp(Complex(0.0, phi));
  Matrix j(2, 2);
  j << 1.0, 1.0, phase, phase;
  j *= std::sqrt(gamma) / 2.0;
  spec.jumps.emplace_back(JumpLabel{1, "tick"}, j);
  spec.validate();
  return spec;
}

LindbladSpec classical_to_lindblad(const ClassicalClockworkSpec& spec,
                                   int clockwork_index) {
  spec.validate();
  const int d = spec.num_states();
  LindbladSpec out;
  out.hamiltonian = Matrix::Zero(d, d);
  for (int l = 0; l < d; ++l) {
    for (int k = 0; k < d; ++k) {
      const double rate = spec.rates(k, l);
      if (rate == 0.0) continue;
      Matrix j = Matrix::Zero(d, d);
      j(k, l) = std::sqrt(rate);
      out.jumps.emplace_back(
          JumpLabel{clockwork_index, std::to_string(l) + "->" + std::to_string(k)}, j);
    }
  }
  return out;
}

Matrix embed_factor(const Matrix& op, const std::vector<Eigen::Index>& dims,
                    std::size_t pos) {
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t i = 0; i < dims.size(); ++i)
    out = kron(out, i == pos ? op : Matrix::Identity(dims[i], dims[i]));
  return out;
}

LindbladSpec compose_independent(const std::vector<LindbladSpec>& specs) {
  if (specs.empty())
    throw ValidationError("compose_independent needs at least one spec");
  for (const auto& s : specs) s.validate();

  std::vector<Eigen::Index> dims;
  dims.reserve(specs.size());
  for (const auto& s : specs) dims.push_back(s.dim());

  Eigen::Index total = 1;
  for (auto d : dims) total *= d;

  LindbladSpec out;
  out.hamiltonian = Matrix::Zero(total, total);
  int offset = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    out.hamiltonian += embed_factor(specs[i].hamiltonian, dims, i);
    int max_index = 0;
    for (const auto& [label, op] : specs[i].jumps) {
      JumpLabel shifted = label;
      shifted.clockwork += offset;
      out.jumps.emplace_back(shifted, embed_factor(op, dims, i));
      max_index = std::max(max_index, label.clockwork);
    }
    offset += std::max(max_index, 1);
  }
  out.validate();
  return out;
}

bool ParameterAxis::contains(double c) const {
  if (!values.empty()) {
    for (double v : values)
      if (c == v) return true;
    return false;
  }
  return c >= lo && c <= hi;
}

std::string ParameterAxis::str() const {
  std::ostringstream out;
  if (!values.empty()) {
    out << "{";
    for (std::size_t i = 0; i < values.size(); ++i)
      out << (i ? ", " : "") << values[i];
    out << "}";
  } else {
    out << "[" << lo << ", " << hi << "]";
  }
  return out.str();
}

LindbladSpec ControlledFamily::build(const std::vector<double>& c) const {
  if (c.size() != axes.size())
    throw ValidationError("control vector has " + std::to_string(c.size()) +
                          " coordinates, family expects " + std::to_string(axes.size()));
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!axes[i].contains(c[i]))
      throw ValidationError("control c[" + std::to_string(i) + "] = " +
                            std::to_string(c[i]) + " outside admissible " +
                            axes[i].str());
  LindbladSpec spec = builder(c);
  spec.validate();
  if (spec.jumps.size() != jump_names.size())
    throw ValidationError("family builder changed the jump alphabet size");
  for (std::size_t i = 0; i < jump_names.size(); ++i)
    if (spec.jumps[i].first.jump != jump_names[i])
      throw ValidationError("family builder changed jump label " +
                            spec.jumps[i].first.str());
  return spec;
}

bool ControlledFamily::symmetric_axes() const {
  for (const auto& axis : axes)
    if (!(axis == axes.front())) return false;
  return true;
}

namespace {

std::vector<std::string> alphabet_of(const LindbladSpec& spec) {
  std::vector<std::string> names;
  names.reserve(spec.jumps.size());
  for (const auto& [label, op] : spec.jumps) names.push_back(label.jump);
  return names;
}

void check_interval_axis(const ParameterAxis& axis) {
  if (axis.values.empty() && !(axis.lo <= axis.hi))
    throw ValidationError("parameter axis has lo > hi");
}

}  // namespace

ControlledFamily energy_family(const LindbladSpec& base, const ParameterAxis& axis) {
  base.validate();
  check_interval_axis(axis);
  ControlledFamily fam;
  fam.kind = ControlKind::energy;
  fam.axes = {axis};
  fam.jump_names = alphabet_of(base);
  fam.builder = [base](const std::vector<double>& c) {
    LindbladSpec spec = base;
    spec.hamiltonian *= c[0];
    return spec;
  };
  return fam;
}

ControlledFamily jump_strength_family(const LindbladSpec& base, const ParameterAxis& axis) {
  base.validate();
  check_interval_axis(axis);
  const auto admits_negative = [&] {
    if (!axis.values.empty()) {
      for (double v : axis.values)
        if (v < 0.0) return true;
      return false;
    }
    return axis.lo < 0.0;
  };
  if (admits_negative())
    throw ValidationError("jump-strength parameters must be non-negative, axis " +
                          axis.str());
  ControlledFamily fam;
  fam.kind = ControlKind::jump_strength;
  fam.axes = {axis};
  fam.jump_names = alphabet_of(base);
  fam.builder = [base](const std::vector<double>& c) {
    LindbladSpec spec = base;
    const double root = std::sqrt(c[0]);
    for (auto& [label, op] : spec.jumps) op *= root;
    return spec;
  };
  return fam;
}

ControlledFamily time_unitary_family(const LindbladSpec& base,
                                     std::function<Matrix(double)> unitary,
                                     const ParameterAxis& axis) {
  base.validate();
  check_interval_axis(axis);
  ControlledFamily fam;
  fam.kind = ControlKind::time_unitary;
  fam.axes = {axis};
  fam.jump_names = alphabet_of(base);
  fam.builder = [base, unitary = std::move(unitary)](const std::vector<double>& c) {
    const Matrix u = unitary(c[0]);
    if (u.rows() != base.dim() || u.cols() != base.dim())
      throw ValidationError("unitary family output has the wrong dimension");
    const double defect =
        (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
    if (defect > 1e-10)
      throw ValidationError("time-unitary family produced a non-unitary U: ||U^dagger U - 1|| = " +
                            std::to_string(defect));
    LindbladSpec spec = base;
    for (auto& [label, op] : spec.jumps) op = u * op;
    return spec;
  };
  return fam;
}

ControlledFamily coupling_family(const Matrix& h1, const Matrix& h2,
                                 const Matrix& h_int,
                                 const std::vector<std::pair<JumpLabel, Matrix>>& jumps,
                                 const ParameterAxis& axis) {
  check_interval_axis(axis);
  const Eigen::Index total = h1.rows() * h2.rows();
  if (h_int.rows() != total || h_int.cols() != total)
    throw ValidationError("interaction Hamiltonian must act on the joint space");
  ControlledFamily fam;
  fam.kind = ControlKind::coupling;
  fam.axes = {axis};
  for (const auto& [label, op] : jumps) fam.jump_names.push_back(label.jump);
  Matrix h0 = kron(h1, Matrix::Identity(h2.rows(), h2.cols())) +
              kron(Matrix::Identity(h1.rows(), h1.cols()), h2);
  fam.builder = [h0, h_int, jumps](const std::vector<double>& c) {
    LindbladSpec spec;
    spec.hamiltonian = h0 + c[0] * h_int;
    spec.jumps = jumps;
    return spec;
  };
  return fam;
}

ControlledFamily classical_ring_family(int num_states, const ParameterAxis& axis) {
  if (num_states < 2)
    throw ValidationError("classical ring needs at least 2 states");
  check_interval_axis(axis);
  if (axis.values.empty() ? axis.lo < 0.0 : *std::min_element(axis.values.begin(), axis.values.end()) < 0.0)
    throw ValidationError("classical rates must be non-negative, axis " + axis.str());
  ControlledFamily fam;
  fam.kind = ControlKind::classical_rates;
  fam.axes.assign(num_states, axis);
  fam.classical_states = num_states;
  for (int x = 0; x < num_states; ++x)
    fam.jump_names.push_back(std::to_string(x) + "->" +
                             std::to_string((x + 1) % num_states));
  fam.builder = [num_states](const std::vector<double>& c) {
    // Zero-rate jumps stay in the alphabet (with a zero operator) so that
    // label sets are stable across the whole parameter range.
    LindbladSpec spec;
    spec.hamiltonian = Matrix::Zero(num_states, num_states);
    for (int x = 0; x < num_states; ++x) {
      Matrix j = Matrix::Zero(num_states, num_states);
      j((x + 1) % num_states, x) = std::sqrt(c[x]);
      spec.jumps.emplace_back(
          JumpLabel{1, std::to_string(x) + "->" + std::to_string((x + 1) % num_states)},
          j);
    }
    return spec;
  };
  return fam;
}

}  // namespace clockfcs
