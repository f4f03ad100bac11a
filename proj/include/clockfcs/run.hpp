#pragma once

#include <optional>
#include <string>

namespace clockfcs {

// One CLI invocation: a named command driven by the merge of a JSON config
// file (optional) and flag overrides, flags winning. Paths read from the
// config resolve relative to the config file's directory; override paths
// resolve relative to the working directory.
struct RunOverrides {
  std::optional<std::string> model;
  std::optional<std::string> policy;
  std::optional<std::string> current;
  std::optional<std::string> out;
  std::optional<std::string> objective;
  std::optional<std::string> comparison;
  std::optional<long long> seed;
  std::optional<long long> trajectories;
  std::optional<long long> trials;
  std::optional<double> horizon;
  std::optional<double> gamma;
  std::optional<int> threads;
};

struct RunOutcome {
  int status = 0;          // 0 ok, 2 validation, 3 numerical, 4 bound violation
  std::string summary;     // one JSON line; failures carry an error record
  std::string table;       // CSV text written to table_path
  std::string table_path;  // resolved output path; empty if nothing was written
};

// command is one of snr | bounds | sweep | optimize | simulate |
// verify-theorem1 | compare. Never throws: errors are folded into the
// outcome with the status the process should exit with.
RunOutcome run(const std::string& command, const std::string& config_path,
               const RunOverrides& overrides);

}  // namespace clockfcs
