#include "clockfcs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "clockfcs/errors.hpp"

namespace clockfcs {
namespace {

using nlohmann::json;

json parse_document(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

const json& require_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object())
    throw ValidationError(where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw ValidationError(where + " is missing the \"" + key + "\" field");
  return *it;
}

double require_number(const json& value, const std::string& where) {
  if (!value.is_number())
    throw ValidationError(where + " must be a number");
  return value.get<double>();
}

int require_count(const json& value, const std::string& where, int lo) {
  if (!value.is_number_integer())
    throw ValidationError(where + " must be an integer");
  const auto n = value.get<long long>();
  if (n < lo)
    throw ValidationError(where + " = " + std::to_string(n) + " must be >= " +
                          std::to_string(lo));
  return static_cast<int>(n);
}

std::string require_name(const json& value, const std::string& where) {
  if (!value.is_string() || value.get<std::string>().empty())
    throw ValidationError(where + " must be a non-empty string");
  return value.get<std::string>();
}

RealMatrix parse_grid(const json& rows, Eigen::Index n, const std::string& where) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
    throw ValidationError(where + " must be an array of " + std::to_string(n) +
                          " rows");
  RealMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = rows[r];
    const std::string row_where = where + " row " + std::to_string(r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ValidationError(row_where + " must list " + std::to_string(n) +
                            " entries");
    for (Eigen::Index c = 0; c < n; ++c)
      out(r, c) = require_number(row[c], row_where + " entry " + std::to_string(c));
  }
  return out;
}

Matrix parse_complex_matrix(const json& obj, Eigen::Index n, const std::string& where) {
  Matrix out(n, n);
  out.real() = parse_grid(require_field(obj, "real", where), n, where + ".real");
  if (obj.contains("imag"))
    out.imag() = parse_grid(obj["imag"], n, where + ".imag");
  else
    out.imag().setZero();
  return out;
}

JumpLabel parse_label(const json& obj, const std::string& where) {
  JumpLabel label;
  label.clockwork = require_count(require_field(obj, "a", where), where + ".a", 1);
  label.jump = require_name(require_field(obj, "j", where), where + ".j");
  if (obj.contains("m"))
    label.memory = require_count(obj["m"], where + ".m", 0);
  return label;
}

void validate_with_context(const std::string& where, const auto& spec) {
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

bool resolves(const JumpLabel& key, const JumpLabel& candidate) {
  return key.clockwork == candidate.clockwork && key.jump == candidate.jump &&
         (key.memory < 0 || key.memory == candidate.memory);
}

template <typename Labels>
IntegratedCurrent resolve_weights(const IntegratedCurrent& weights,
                                  const Labels& labels) {
  for (const auto& [key, weight] : weights.weights) {
    bool found = false;
    for (const auto& label : labels)
      if (resolves(key, label)) {
        found = true;
        break;
      }
    if (!found)
      throw ValidationError("current weight on " + key.str() +
                            " matches no jump of the system");
    (void)weight;
  }
  return weights;
}

std::string csv_cell(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ModelKind probe_model_kind(const std::string& path) {
  const json doc = parse_document(slurp_file(path), path);
  if (doc.is_object() && doc.contains("num_states")) return ModelKind::classical;
  if (doc.is_object() && doc.contains("dim")) return ModelKind::quantum;
  throw ValidationError(path + " has neither \"dim\" nor \"num_states\"");
}

LindbladSpec parse_quantum_model(const std::string& text, const std::string& where) {
  const json doc = parse_document(text, where);
  const int dim = require_count(require_field(doc, "dim", where), where + ".dim", 1);

  LindbladSpec spec;
  spec.hamiltonian = parse_complex_matrix(require_field(doc, "hamiltonian", where),
                                          dim, where + ".hamiltonian");

  const json& jumps = require_field(doc, "jumps", where);
  if (!jumps.is_array())
    throw ValidationError(where + ".jumps must be an array");
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const std::string jump_where = where + ".jumps[" + std::to_string(i) + "]";
    const json& entry = jumps[i];
    JumpLabel label = parse_label(require_field(entry, "label", jump_where),
                                  jump_where + ".label");
    Matrix op = parse_complex_matrix(require_field(entry, "matrix", jump_where), dim,
                                     jump_where + ".matrix");
    spec.jumps.emplace_back(std::move(label), std::move(op));
  }

  validate_with_context(where, spec);
  return spec;
}

ClassicalClockworkSpec parse_classical_model(const std::string& text,
                                             const std::string& where) {
  const json doc = parse_document(text, where);
  const int n = require_count(require_field(doc, "num_states", where),
                              where + ".num_states", 1);
  ClassicalClockworkSpec spec;
  spec.rates = parse_grid(require_field(doc, "rates", where), n, where + ".rates");
  validate_with_context(where, spec);
  return spec;
}

FeedbackPolicy parse_policy(const std::string& text, const std::string& where) {
  const json doc = parse_document(text, where);
  FeedbackPolicy policy;
  policy.memory_states = require_count(require_field(doc, "memory_states", where),
                                       where + ".memory_states", 1);

  const json& update = require_field(doc, "update", where);
  if (!update.is_array())
    throw ValidationError(where + ".update must be an array");
  for (std::size_t i = 0; i < update.size(); ++i) {
    const std::string entry_where = where + ".update[" + std::to_string(i) + "]";
    const json& entry = update[i];
    const int a = require_count(require_field(entry, "a", entry_where),
                                entry_where + ".a", 1);
    const std::string j = require_name(require_field(entry, "j", entry_where),
                                       entry_where + ".j");
    const json& next = require_field(entry, "next", entry_where);
    if (!next.is_array() ||
        static_cast<int>(next.size()) != policy.memory_states)
      throw ValidationError(entry_where + ".next must list " +
                            std::to_string(policy.memory_states) + " entries");
    std::vector<int> targets(next.size());
    for (std::size_t m = 0; m < next.size(); ++m) {
      targets[m] = require_count(next[m],
                                 entry_where + ".next[" + std::to_string(m) + "]", 0);
      if (targets[m] >= policy.memory_states)
        throw ValidationError(entry_where + ".next[" + std::to_string(m) + "] = " +
                              std::to_string(targets[m]) + " is not a memory state");
    }
    if (!policy.update.emplace(std::make_pair(a, j), std::move(targets)).second)
      throw ValidationError(entry_where + " duplicates the (a=" + std::to_string(a) +
                            ", j=" + j + ") update rule");
  }

  const json& params = require_field(doc, "params", where);
  if (!params.is_array() ||
      static_cast<int>(params.size()) != policy.memory_states)
    throw ValidationError(where + ".params must list one entry per memory state (" +
                          std::to_string(policy.memory_states) + ")");
  for (std::size_t m = 0; m < params.size(); ++m) {
    const std::string m_where = where + ".params[" + std::to_string(m) + "]";
    const json& per_clockwork = params[m];
    if (!per_clockwork.is_array() || per_clockwork.empty())
      throw ValidationError(m_where + " must list at least one clockwork");
    if (m > 0 && per_clockwork.size() != policy.params.front().size())
      throw ValidationError(m_where + " lists " +
                            std::to_string(per_clockwork.size()) +
                            " clockworks, expected " +
                            std::to_string(policy.params.front().size()));
    std::vector<std::vector<double>> row;
    for (std::size_t a = 0; a < per_clockwork.size(); ++a) {
      const std::string a_where = m_where + "[" + std::to_string(a) + "]";
      const json& control = per_clockwork[a];
      if (!control.is_array() || control.empty())
        throw ValidationError(a_where + " must be a non-empty control vector");
      if (m > 0 && control.size() != policy.params.front()[a].size())
        throw ValidationError(a_where + " has arity " +
                              std::to_string(control.size()) + ", expected " +
                              std::to_string(policy.params.front()[a].size()));
      std::vector<double> c(control.size());
      for (std::size_t k = 0; k < control.size(); ++k)
        c[k] = require_number(control[k], a_where + "[" + std::to_string(k) + "]");
      row.push_back(std::move(c));
    }
    policy.params.push_back(std::move(row));
  }

  return policy;
}

CurrentConfig parse_current(const std::string& text, const std::string& where) {
  const json doc = parse_document(text, where);
  if (!doc.is_object())
    throw ValidationError(where + " must be an object");

  CurrentConfig config;
  if (doc.contains("total")) {
    if (!doc["total"].is_boolean())
      throw ValidationError(where + ".total must be a boolean");
    config.total = doc["total"].get<bool>();
  }
  if (config.total) {
    if (doc.contains("weights"))
      throw ValidationError(where + " sets both \"total\" and \"weights\"");
    return config;
  }

  const json& weights = require_field(doc, "weights", where);
  if (!weights.is_array())
    throw ValidationError(where + ".weights must be an array");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const std::string entry_where = where + ".weights[" + std::to_string(i) + "]";
    const json& entry = weights[i];
    JumpLabel label = parse_label(entry, entry_where);
    const double w = require_number(require_field(entry, "w", entry_where),
                                    entry_where + ".w");
    if (!std::isfinite(w))
      throw ValidationError(entry_where + ".w must be finite");
    if (!config.weights.weights.emplace(label, w).second)
      throw ValidationError(entry_where + " duplicates the weight on " + label.str());
  }
  return config;
}

LindbladSpec load_quantum_model(const std::string& path) {
  return parse_quantum_model(slurp_file(path), path);
}

ClassicalClockworkSpec load_classical_model(const std::string& path) {
  return parse_classical_model(slurp_file(path), path);
}

FeedbackPolicy load_policy(const std::string& path) {
  return parse_policy(slurp_file(path), path);
}

CurrentConfig load_current(const std::string& path) {
  return parse_current(slurp_file(path), path);
}

IntegratedCurrent CurrentConfig::resolve(const LindbladSpec& spec) const {
  if (total) return total_current(spec);
  std::vector<JumpLabel> labels;
  labels.reserve(spec.jumps.size());
  for (const auto& [label, op] : spec.jumps) labels.push_back(label);
  return resolve_weights(weights, labels);
}

IntegratedCurrent CurrentConfig::resolve(const ClassicalJointSystem& system) const {
  if (total) return total_current(system);
  std::vector<JumpLabel> labels;
  labels.reserve(system.transitions.size());
  for (const auto& t : system.transitions) labels.push_back(t.label);
  return resolve_weights(weights, labels);
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void CsvTable::append(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw ValidationError("csv row has " + std::to_string(row.size()) +
                          " cells, header has " + std::to_string(header.size()));
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << csv_cell(cells[i]);
    }
    out << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out.str();
}

void CsvTable::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ValidationError("cannot write " + path);
  out << str();
  if (!out)
    throw ValidationError("write to " + path + " failed");
}

}  // namespace clockfcs
