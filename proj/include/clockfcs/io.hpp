#pragma once

#include <string>
#include <vector>

#include "clockfcs/model.hpp"
#include "clockfcs/policy.hpp"

namespace clockfcs {

// Structured-text (JSON) input files.
//
//   quantum model    {"dim": n,
//                     "hamiltonian": {"real": [[..]], "imag": [[..]]},
//                     "jumps": [{"label": {"a": 1, "j": "tick", "m": 0},
//                                "matrix": {"real": .., "imag": ..}}]}
//   classical model  {"num_states": d, "rates": [[..]]}
//                     rates[k][l] is the rate of the l -> k transition
//   policy           {"memory_states": M,
//                     "update": [{"a": 1, "j": "tick", "next": [<M entries>]}],
//                     "params": [<per memory state> [<per clockwork> [..]]]}
//   current          {"total": true}
//                    {"weights": [{"a": 1, "j": "tick", "m": 0, "w": 1.0}]}
//
// "imag" defaults to the zero matrix, "m" to the memory-blind label. Parse
// and shape errors throw ValidationError naming the first offending entry;
// the semantic checks (Hermiticity, rate signs, ...) are the model types'
// own validate() diagnostics, prefixed with the file path.

enum class ModelKind { quantum, classical };

// Distinguishes the two model schemas by their mandatory dimension field.
ModelKind probe_model_kind(const std::string& path);

LindbladSpec load_quantum_model(const std::string& path);
ClassicalClockworkSpec load_classical_model(const std::string& path);
FeedbackPolicy load_policy(const std::string& path);

// A current file names either the all-jumps count or explicit weights. The
// label alphabet it must land in is only known once the target system is
// built, so resolution is a second step.
struct CurrentConfig {
  bool total = false;
  IntegratedCurrent weights;

  IntegratedCurrent resolve(const LindbladSpec& spec) const;
  IntegratedCurrent resolve(const ClassicalJointSystem& system) const;
};

CurrentConfig load_current(const std::string& path);

// The same parsers off an in-memory document (configs may inline currents
// and policies instead of referencing files); `where` labels diagnostics.
LindbladSpec parse_quantum_model(const std::string& text, const std::string& where);
ClassicalClockworkSpec parse_classical_model(const std::string& text,
                                             const std::string& where);
FeedbackPolicy parse_policy(const std::string& text, const std::string& where);
CurrentConfig parse_current(const std::string& text, const std::string& where);

std::string slurp_file(const std::string& path);

// CSV emission: 12 significant digits, shortest form.
std::string format_number(double value);

// Rectangular table; cells are quoted only when they contain a comma, quote,
// or newline. str() ends with a newline.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void append(std::vector<std::string> row);
  std::string str() const;
  void write_file(const std::string& path) const;
};

}  // namespace clockfcs
