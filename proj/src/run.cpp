#include "clockfcs/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <utility>

#include <json.hpp>

#include "clockfcs/errors.hpp"
#include "clockfcs/fcs.hpp"
#include "clockfcs/io.hpp"
#include "clockfcs/sweep.hpp"
#include "clockfcs/trajectory.hpp"

namespace clockfcs {
namespace {

using nlohmann::json;

constexpr double kDeltaStar = 0.8359266422;
constexpr double kPhiStar = 3.6167857244;

struct Options {
  json doc = json::object();
  std::string dir;  // config file directory, for relative input paths
  const RunOverrides* flags = nullptr;
};

const json* config_field(const Options& o, const char* key) {
  auto it = o.doc.find(key);
  return it == o.doc.end() ? nullptr : &*it;
}

std::string resolve_input_path(const Options& o, const std::string& path) {
  if (path.empty() || path.front() == '/' || o.dir.empty()) return path;
  return o.dir + "/" + path;
}

std::optional<std::string> string_option(const Options& o, const char* key,
                                         const std::optional<std::string>& flag,
                                         bool is_path) {
  if (flag) return *flag;
  const json* field = config_field(o, key);
  if (!field) return std::nullopt;
  if (!field->is_string())
    throw ValidationError(std::string("config field \"") + key +
                          "\" must be a string");
  const std::string value = field->get<std::string>();
  return is_path ? resolve_input_path(o, value) : value;
}

long long int_option(const Options& o, const char* key,
                     const std::optional<long long>& flag, long long fallback,
                     long long lo) {
  long long value = fallback;
  if (flag) {
    value = *flag;
  } else if (const json* field = config_field(o, key)) {
    if (!field->is_number_integer())
      throw ValidationError(std::string("config field \"") + key +
                            "\" must be an integer");
    value = field->get<long long>();
  }
  if (value < lo)
    throw ValidationError(std::string("\"") + key + "\" = " +
                          std::to_string(value) + " must be >= " +
                          std::to_string(lo));
  return value;
}

double number_option(const Options& o, const char* key,
                     const std::optional<double>& flag, double fallback) {
  if (flag) return *flag;
  const json* field = config_field(o, key);
  if (!field) return fallback;
  if (!field->is_number())
    throw ValidationError(std::string("config field \"") + key +
                          "\" must be a number");
  return field->get<double>();
}

double field_number(const json& obj, const char* key, const std::string& where,
                    std::optional<double> fallback = std::nullopt) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ValidationError(where + " is missing the \"" + key + "\" field");
  }
  if (!it->is_number())
    throw ValidationError(where + "." + key + " must be a number");
  return it->get<double>();
}

int threads_option(const Options& o) {
  if (o.flags->threads) return *o.flags->threads;
  return static_cast<int>(int_option(o, "threads", std::nullopt, 0, 0));
}

CurrentConfig current_option(const Options& o) {
  if (o.flags->current) return load_current(*o.flags->current);
  if (const json* field = config_field(o, "current")) {
    if (field->is_string())
      return load_current(resolve_input_path(o, field->get<std::string>()));
    if (field->is_object()) return parse_current(field->dump(), "config.current");
    throw ValidationError("config field \"current\" must be a path or an object");
  }
  CurrentConfig total;
  total.total = true;  // default: count every jump
  return total;
}

enum class SystemKind { quantum_spec, classical_chain, classical_feedback, quantum_feedback };

struct BuiltSystem {
  SystemKind kind = SystemKind::quantum_spec;
  LindbladSpec spec;               // quantum routes; joint.spec under feedback
  ClassicalJointSystem classical;  // classical routes
  JointSystem joint;
  FeedbackPolicy policy;  // feedback routes
  std::vector<int> clockwork_dims;

  bool is_classical() const {
    return kind == SystemKind::classical_chain ||
           kind == SystemKind::classical_feedback;
  }
};

BuiltSystem build_system(const Options& o) {
  const auto model = string_option(o, "model", o.flags->model, true);
  const auto policy_path = string_option(o, "policy", o.flags->policy, true);
  const json* system = config_field(o, "system");
  const int given = (model ? 1 : 0) + (policy_path ? 1 : 0) + (system ? 1 : 0);
  if (given == 0)
    throw ValidationError(
        "no system given: set \"model\", \"policy\" + \"clockwork_dims\", or "
        "\"system\"");
  if (given > 1)
    throw ValidationError(
        "give exactly one of \"model\", \"policy\", \"system\"");

  BuiltSystem out;
  if (model) {
    if (probe_model_kind(*model) == ModelKind::quantum) {
      out.kind = SystemKind::quantum_spec;
      out.spec = load_quantum_model(*model);
    } else {
      out.kind = SystemKind::classical_chain;
      out.classical = labeled_chain(load_classical_model(*model));
    }
    return out;
  }

  if (policy_path) {
    out.kind = SystemKind::classical_feedback;
    out.policy = load_policy(*policy_path);
    const json* dims = config_field(o, "clockwork_dims");
    if (!dims || !dims->is_array() || dims->empty())
      throw ValidationError(
          "a \"policy\" system needs a non-empty \"clockwork_dims\" array");
    for (std::size_t i = 0; i < dims->size(); ++i) {
      const json& d = (*dims)[i];
      if (!d.is_number_integer() || d.get<long long>() < 2)
        throw ValidationError("clockwork_dims[" + std::to_string(i) +
                              "] must be an integer >= 2");
      out.clockwork_dims.push_back(d.get<int>());
    }
    out.classical = classical_feedback_rate_matrix(out.clockwork_dims, out.policy);
    return out;
  }

  if (!system->is_object())
    throw ValidationError("config field \"system\" must be an object");
  auto name_it = system->find("name");
  if (name_it == system->end() || !name_it->is_string())
    throw ValidationError("config.system needs a \"name\" string");
  const std::string name = name_it->get<std::string>();
  if (name != "two_qubit_switching")
    throw ValidationError("unknown system \"" + name +
                          "\" (known: two_qubit_switching)");
  const double gamma = field_number(*system, "gamma", "config.system", 1.0);
  const double alpha1 = field_number(*system, "alpha1", "config.system");
  const double alpha2 = field_number(*system, "alpha2", "config.system");
  const double e_star =
      field_number(*system, "e_star", "config.system", kDeltaStar * gamma);
  const double phi_star =
      field_number(*system, "phi_star", "config.system", kPhiStar);
  SwitchingSetup setup =
      two_qubit_switching_policy(alpha1, alpha2, e_star, phi_star, gamma);
  out.kind = SystemKind::quantum_feedback;
  out.joint = build_joint(setup.families, setup.policy);
  out.spec = out.joint.spec;
  out.policy = std::move(setup.policy);
  return out;
}

FcsResult evaluate_fcs(const BuiltSystem& sys, const CurrentConfig& current) {
  if (sys.is_classical())
    return current_and_noise(sys.classical, current.resolve(sys.classical));
  return current_and_noise(sys.spec, current.resolve(sys.spec));
}

std::string output_path(const Options& o, const std::string& command) {
  if (o.flags->out) return *o.flags->out;
  if (const json* field = config_field(o, "out")) {
    if (!field->is_string())
      throw ValidationError("config field \"out\" must be a string");
    return field->get<std::string>();  // artifact destination: cwd-relative
  }
  return command + ".csv";
}

void emit_table(const Options& o, const std::string& command, const CsvTable& table,
                json& summary, RunOutcome& outcome) {
  const std::string path = output_path(o, command);
  table.write_file(path);
  outcome.table = table.str();
  outcome.table_path = path;
  summary["out"] = path;
}

// ---- named sweep/optimize objectives ----

struct NamedObjective {
  Objective fn;
  std::vector<std::string> axis_names;
};

NamedObjective find_objective(const std::string& name, const Options& o) {
  const double gamma = number_option(o, "gamma", o.flags->gamma, 1.0);
  if (name == "qubit") return {qubit_snr_objective(gamma), {"Delta", "phi"}};
  if (name == "two_qubit_feedback") {
    const double e_star =
        number_option(o, "e_star", std::nullopt, kDeltaStar * gamma);
    const double phi_star = number_option(o, "phi_star", std::nullopt, kPhiStar);
    return {switching_snr_objective(e_star, phi_star, gamma),
            {"alpha1", "alpha2"}};
  }
  if (name == "classical_ring") {
    const int d =
        static_cast<int>(int_option(o, "num_states", std::nullopt, 2, 1));
    std::vector<std::string> names;
    for (int x = 0; x < d; ++x) names.push_back("rate" + std::to_string(x));
    return {classical_ring_objective(d), std::move(names)};
  }
  if (name == "classical_feedback")
    return {classical_switching_objective(), {"m0c1", "m0c2", "m1c1", "m1c2"}};
  throw ValidationError("unknown objective \"" + name +
                        "\" (known: qubit, two_qubit_feedback, classical_ring, "
                        "classical_feedback)");
}

std::vector<SweepAxis> parse_axes(const Options& o, const NamedObjective& objective,
                                  bool need_points) {
  const json* axes = config_field(o, "axes");
  if (!axes || !axes->is_array())
    throw ValidationError("config needs an \"axes\" array");
  if (axes->size() != objective.axis_names.size())
    throw ValidationError("objective takes " +
                          std::to_string(objective.axis_names.size()) +
                          " axes, config gives " + std::to_string(axes->size()));
  std::vector<SweepAxis> out;
  for (std::size_t i = 0; i < axes->size(); ++i) {
    const json& entry = (*axes)[i];
    const std::string where = "config.axes[" + std::to_string(i) + "]";
    if (!entry.is_object())
      throw ValidationError(where + " must be an object");
    SweepAxis axis;
    axis.name = objective.axis_names[i];
    if (auto it = entry.find("name"); it != entry.end()) {
      if (!it->is_string())
        throw ValidationError(where + ".name must be a string");
      axis.name = it->get<std::string>();
    }
    axis.lo = field_number(entry, "min", where);
    axis.hi = field_number(entry, "max", where);
    auto points = entry.find("points");
    if (points == entry.end()) points = entry.find("n_points");
    if (points != entry.end()) {
      if (!points->is_number_integer() || points->get<long long>() < 1)
        throw ValidationError(where + ".points must be an integer >= 1");
      axis.points = points->get<int>();
    } else if (need_points) {
      throw ValidationError(where + " is missing the \"points\" field");
    } else {
      axis.points = 1;
    }
    if (auto it = entry.find("periodic"); it != entry.end()) {
      if (!it->is_boolean())
        throw ValidationError(where + ".periodic must be a boolean");
      axis.periodic = it->get<bool>();
    }
    out.push_back(std::move(axis));
  }
  return out;
}

std::vector<double> parse_start(const Options& o,
                                const std::vector<SweepAxis>& axes) {
  const json* start = config_field(o, "start");
  if (!start) {
    std::vector<double> mid;
    for (const auto& axis : axes) mid.push_back((axis.lo + axis.hi) / 2.0);
    return mid;
  }
  if (!start->is_array() || start->size() != axes.size())
    throw ValidationError("config.start must list " +
                          std::to_string(axes.size()) + " numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < start->size(); ++i) {
    const json& v = (*start)[i];
    if (!v.is_number())
      throw ValidationError("config.start[" + std::to_string(i) +
                            "] must be a number");
    out.push_back(v.get<double>());
  }
  return out;
}

// ---- command handlers ----

void run_snr(const Options& o, json& summary, RunOutcome& outcome) {
  const BuiltSystem sys = build_system(o);
  const FcsResult result = evaluate_fcs(sys, current_option(o));

  CsvTable table;
  table.header = {"F", "D", "S", "accuracy", "flags"};
  table.append({format_number(result.F), format_number(result.D),
                format_number(result.S), format_number(result.accuracy),
                result.degenerate ? "degenerate" : "ok"});
  summary["F"] = result.F;
  summary["D"] = result.D;
  summary["S"] = result.S;
  summary["accuracy"] = result.accuracy;
  summary["degenerate"] = result.degenerate;
  emit_table(o, "snr", table, summary, outcome);
}

void run_bounds(const Options& o, json& summary, RunOutcome& outcome) {
  const BuiltSystem sys = build_system(o);
  if (!sys.is_classical())
    throw ValidationError(
        "bounds needs a classical system: the kinetic bounds are classical "
        "diagnostics");
  const FcsResult result =
      current_and_noise(sys.classical, current_option(o).resolve(sys.classical));
  const double kur = kur_bound(sys.classical);
  const double cur = cur_bound(sys.classical);
  const bool two_state =
      sys.kind == SystemKind::classical_feedback &&
      std::all_of(sys.clockwork_dims.begin(), sys.clockwork_dims.end(),
                  [](int d) { return d == 2; });

  CsvTable table;
  table.header = {"F", "D", "S", "accuracy", "kur", "cur", "theorem1", "flags"};
  std::string theorem1;
  if (two_state) {
    const double bound = theorem1_bound(sys.policy);
    theorem1 = format_number(bound);
    summary["theorem1"] = bound;
  }
  table.append({format_number(result.F), format_number(result.D),
                format_number(result.S), format_number(result.accuracy),
                format_number(kur), format_number(cur), theorem1,
                result.degenerate ? "degenerate" : "ok"});
  summary["F"] = result.F;
  summary["D"] = result.D;
  summary["S"] = result.S;
  summary["accuracy"] = result.accuracy;
  summary["kur"] = kur;
  summary["cur"] = cur;
  summary["degenerate"] = result.degenerate;
  emit_table(o, "bounds", table, summary, outcome);
}

void run_sweep(const Options& o, json& summary, RunOutcome& outcome) {
  const auto name = string_option(o, "objective", o.flags->objective, false);
  if (!name) throw ValidationError("sweep needs an \"objective\" name");
  const NamedObjective objective = find_objective(*name, o);
  SweepGrid grid{parse_axes(o, objective, true), *name};
  grid.validate();

  const std::vector<SweepRow> rows = sweep(grid, objective.fn, threads_option(o));

  CsvTable table;
  for (const auto& axis : grid.axes) table.header.push_back(axis.name);
  table.header.insert(table.header.end(), {"F", "D", "S", "flags"});
  const SweepRow* best = nullptr;
  for (const auto& row : rows) {
    std::vector<std::string> cells;
    for (double p : row.params) cells.push_back(format_number(p));
    cells.push_back(format_number(row.F));
    cells.push_back(format_number(row.D));
    cells.push_back(format_number(row.S));
    cells.push_back(row.flag());
    table.append(std::move(cells));
    if (row.flag() == "ok" && (!best || row.S > best->S)) best = &row;
  }
  summary["objective"] = *name;
  summary["rows"] = rows.size();
  if (best) {
    summary["best_S"] = best->S;
    summary["best_params"] = best->params;
  }
  emit_table(o, "sweep", table, summary, outcome);
}

void run_optimize(const Options& o, json& summary, RunOutcome& outcome) {
  const auto name = string_option(o, "objective", o.flags->objective, false);
  if (!name) throw ValidationError("optimize needs an \"objective\" name");
  const NamedObjective objective = find_objective(*name, o);
  const std::vector<SweepAxis> axes = parse_axes(o, objective, false);
  const std::vector<double> start = parse_start(o, axes);

  const OptimumReport report = refine(start, objective.fn, axes);

  CsvTable table;
  table.header = {"evaluations"};
  for (const auto& axis : axes) table.header.push_back(axis.name);
  table.header.push_back("S");
  for (const auto& entry : report.trace) {
    std::vector<std::string> cells = {std::to_string(entry.evaluations)};
    for (double p : entry.params) cells.push_back(format_number(p));
    cells.push_back(format_number(entry.value));
    table.append(std::move(cells));
  }
  summary["objective"] = *name;
  summary["start"] = report.start;
  summary["start_value"] = report.start_value;
  summary["argmax"] = report.argmax;
  summary["value"] = report.value;
  summary["evaluations"] = report.evaluations;
  emit_table(o, "optimize", table, summary, outcome);
}

void run_simulate(const Options& o, json& summary, RunOutcome& outcome) {
  const BuiltSystem sys = build_system(o);
  const CurrentConfig current = current_option(o);
  const int threads = threads_option(o);
  const long long n =
      int_option(o, "trajectories", o.flags->trajectories, kDefaultTrajectories, 1);
  const auto seed = static_cast<std::uint64_t>(
      int_option(o, "seed", o.flags->seed, 12345, 0));

  double fallback_horizon;
  if (sys.is_classical())
    fallback_horizon = default_horizon(sys.classical);
  else
    fallback_horizon = default_horizon(sys.spec);
  const double horizon =
      number_option(o, "horizon", o.flags->horizon, fallback_horizon);
  if (!(horizon > 0.0))
    throw ValidationError("\"horizon\" must be positive");

  TrajectoryStats stats;
  FcsResult exact;
  if (sys.is_classical()) {
    const IntegratedCurrent cur = current.resolve(sys.classical);
    stats = simulate_classical(sys.classical, cur, horizon,
                               static_cast<int>(n), seed, threads);
    exact = current_and_noise(sys.classical, cur);
  } else if (sys.kind == SystemKind::quantum_feedback) {
    const IntegratedCurrent cur = current.resolve(sys.spec);
    stats = simulate_quantum(sys.joint, sys.policy, cur, horizon,
                             static_cast<int>(n), seed, threads);
    exact = current_and_noise(sys.spec, cur);
  } else {
    const IntegratedCurrent cur = current.resolve(sys.spec);
    stats = simulate_quantum(sys.spec, cur, horizon, static_cast<int>(n), seed,
                             std::nullopt, threads);
    exact = current_and_noise(sys.spec, cur);
  }
  const double z_F =
      stats.se_F > 0.0 ? (stats.F_hat - exact.F) / stats.se_F : 0.0;
  const double z_D =
      stats.se_D > 0.0 ? (stats.D_hat - exact.D) / stats.se_D : 0.0;

  CsvTable table;
  table.header = {"horizon", "trajectories", "seed", "mean_N", "var_N",
                  "F_hat",   "D_hat",        "se_F", "se_D",   "F_exact",
                  "D_exact", "z_F",          "z_D"};
  table.append({format_number(stats.horizon), std::to_string(stats.n_traj),
                std::to_string(stats.seed), format_number(stats.mean_N),
                format_number(stats.var_N), format_number(stats.F_hat),
                format_number(stats.D_hat), format_number(stats.se_F),
                format_number(stats.se_D), format_number(exact.F),
                format_number(exact.D), format_number(z_F),
                format_number(z_D)});
  summary["horizon"] = stats.horizon;
  summary["trajectories"] = stats.n_traj;
  summary["seed"] = stats.seed;
  summary["F_hat"] = stats.F_hat;
  summary["D_hat"] = stats.D_hat;
  summary["se_F"] = stats.se_F;
  summary["se_D"] = stats.se_D;
  summary["F_exact"] = exact.F;
  summary["D_exact"] = exact.D;
  summary["z_F"] = z_F;
  summary["z_D"] = z_D;
  emit_table(o, "simulate", table, summary, outcome);
}

void run_verify_theorem1(const Options& o, json& summary, RunOutcome& outcome) {
  const long long trials = int_option(o, "trials", o.flags->trials, 100, 1);
  const auto seed =
      static_cast<std::uint64_t>(int_option(o, "seed", o.flags->seed, 42, 0));
  const double rate_lo = number_option(o, "rate_lo", std::nullopt, 0.1);
  const double rate_hi = number_option(o, "rate_hi", std::nullopt, 5.0);
  if (!(rate_lo > 0.0) || rate_hi < rate_lo)
    throw ValidationError("need 0 < rate_lo <= rate_hi");
  const int max_clockworks =
      static_cast<int>(int_option(o, "max_clockworks", std::nullopt, 3, 1));
  const int max_memory =
      static_cast<int>(int_option(o, "max_memory", std::nullopt, 4, 1));
  const int currents = static_cast<int>(
      int_option(o, "currents_per_instance", std::nullopt, 20, 1));

  RngStream rng(seed, 0);
  double max_ratio = 0.0;
  long long violations = 0;
  CsvTable table;
  table.header = {"trial", "clockworks", "memory_states", "bound", "best_S",
                  "ratio"};
  for (long long trial = 0; trial < trials; ++trial) {
    const RandomFeedbackInstance instance = random_ergodic_feedback_instance(
        rng, max_clockworks, max_memory, rate_lo, rate_hi);
    const double bound = theorem1_bound(instance.policy);

    double best = 0.0;
    for (int c = 0; c < currents; ++c) {
      const IntegratedCurrent cur =
          random_current(rng, instance.system, c % 2 == 1);
      const FcsResult result = current_and_noise(instance.system, cur);
      if (!result.degenerate) best = std::max(best, result.S);
    }
    const double ratio = best / bound;
    max_ratio = std::max(max_ratio, ratio);
    if (ratio > 1.0 + 1e-9) ++violations;
    table.append({std::to_string(trial),
                  std::to_string(instance.clockwork_dims.size()),
                  std::to_string(instance.policy.memory_states),
                  format_number(bound), format_number(best),
                  format_number(ratio)});
  }

  summary["trials"] = trials;
  summary["seed"] = seed;
  summary["max_ratio"] = max_ratio;
  summary["violations"] = violations;
  emit_table(o, "verify-theorem1", table, summary, outcome);
  if (violations > 0) {
    outcome.status = 4;
    summary["error"] = {{"type", "bound_violation"},
                        {"message", std::to_string(violations) +
                                        " instances exceed the feedback bound"}};
  }
}

void run_compare(const Options& o, json& summary, RunOutcome& outcome) {
  const auto kind =
      string_option(o, "comparison", o.flags->comparison, false)
          .value_or("two_qubit");
  ComparisonOptions options;
  if (kind == "two_qubit")
    options.kind = ComparisonKind::two_qubit;
  else if (kind == "classical_pair")
    options.kind = ComparisonKind::classical_pair;
  else
    throw ValidationError("unknown comparison \"" + kind +
                          "\" (known: two_qubit, classical_pair)");
  options.gamma = number_option(o, "gamma", o.flags->gamma, options.gamma);
  options.delta_lo = number_option(o, "delta_lo", std::nullopt, options.delta_lo);
  options.delta_hi = number_option(o, "delta_hi", std::nullopt, options.delta_hi);
  options.alpha_lo = number_option(o, "alpha_lo", std::nullopt, options.alpha_lo);
  options.alpha_hi = number_option(o, "alpha_hi", std::nullopt, options.alpha_hi);
  options.rate_lo = number_option(o, "rate_lo", std::nullopt, options.rate_lo);
  options.rate_hi = number_option(o, "rate_hi", std::nullopt, options.rate_hi);

  const ComparisonReport report = compare_constant_vs_feedback(options);

  CsvTable table;
  table.header = {"ceiling", "feedback", "ratio", "advantage"};
  table.append({format_number(report.ceiling), format_number(report.feedback.value),
                format_number(report.ratio),
                report.advantage ? "true" : "false"});
  summary["comparison"] = kind;
  summary["ceiling"] = report.ceiling;
  summary["feedback"] = report.feedback.value;
  summary["ratio"] = report.ratio;
  summary["advantage"] = report.advantage;
  summary["single_argmax"] = report.single_clockwork.argmax;
  summary["feedback_argmax"] = report.feedback.argmax;
  emit_table(o, "compare", table, summary, outcome);
}

}  // namespace

RunOutcome run(const std::string& command, const std::string& config_path,
               const RunOverrides& overrides) {
  RunOutcome outcome;
  json summary;
  summary["command"] = command;
  try {
    Options o;
    o.flags = &overrides;
    if (!config_path.empty()) {
      try {
        o.doc = json::parse(slurp_file(config_path));
      } catch (const json::parse_error& e) {
        throw ValidationError(config_path + ": " + e.what());
      }
      if (!o.doc.is_object())
        throw ValidationError(config_path + " must hold a JSON object");
      o.dir = std::filesystem::path(config_path).parent_path().string();
      if (const json* declared = config_field(o, "command")) {
        const std::string name =
            declared->is_string() ? declared->get<std::string>() : declared->dump();
        if (name != command)
          throw ValidationError("config declares command \"" + name +
                                "\" but \"" + command + "\" was invoked");
      }
    }

    if (command == "snr")
      run_snr(o, summary, outcome);
    else if (command == "bounds")
      run_bounds(o, summary, outcome);
    else if (command == "sweep")
      run_sweep(o, summary, outcome);
    else if (command == "optimize")
      run_optimize(o, summary, outcome);
    else if (command == "simulate")
      run_simulate(o, summary, outcome);
    else if (command == "verify-theorem1")
      run_verify_theorem1(o, summary, outcome);
    else if (command == "compare")
      run_compare(o, summary, outcome);
    else
      throw ValidationError("unknown command \"" + command + "\"");
  } catch (const ValidationError& e) {
    outcome.status = 2;
    summary["error"] = {{"type", "validation"}, {"message", e.what()}};
  } catch (const NumericalError& e) {
    outcome.status = 3;
    summary["error"] = {{"type", "numerical"}, {"message", e.what()}};
  } catch (const BoundViolationError& e) {
    outcome.status = 4;
    summary["error"] = {{"type", "bound_violation"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    outcome.status = 3;
    summary["error"] = {{"type", "internal"}, {"message", e.what()}};
  }
  summary["status"] = outcome.status;
  outcome.summary = summary.dump();
  return outcome;
}

}  // namespace clockfcs
