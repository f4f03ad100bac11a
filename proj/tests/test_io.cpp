#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "clockfcs/errors.hpp"
#include "clockfcs/fcs.hpp"
#include "clockfcs/io.hpp"
#include "test_util.hpp"

using namespace clockfcs;
using nlohmann::json;

namespace {

constexpr double kDeltaStar = 0.8359266422;
constexpr double kPhiStar = 3.6167857244;
constexpr double kSnrStar = 1.18734422175190;
constexpr double kFeedbackAnchor = 2.59341761579315;

json matrix_json(const Matrix& m) {
  json real = json::array();
  json imag = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json real_row = json::array();
    json imag_row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      real_row.push_back(m(r, c).real());
      imag_row.push_back(m(r, c).imag());
    }
    real.push_back(real_row);
    imag.push_back(imag_row);
  }
  return {{"real", real}, {"imag", imag}};
}

json label_json(const JumpLabel& label) {
  json out = {{"a", label.clockwork}, {"j", label.jump}};
  if (label.has_memory()) out["m"] = label.memory;
  return out;
}

json model_json(const LindbladSpec& spec) {
  json jumps = json::array();
  for (const auto& [label, op] : spec.jumps)
    jumps.push_back({{"label", label_json(label)}, {"matrix", matrix_json(op)}});
  return {{"dim", spec.dim()},
          {"hamiltonian", matrix_json(spec.hamiltonian)},
          {"jumps", jumps}};
}

json policy_json(const FeedbackPolicy& policy) {
  json update = json::array();
  for (const auto& [key, next] : policy.update)
    update.push_back({{"a", key.first}, {"j", key.second}, {"next", next}});
  return {{"memory_states", policy.memory_states},
          {"update", update},
          {"params", policy.params}};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = temp_path(name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

template <typename Fn>
std::string rejection(Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "<no error>";
}

bool contains(const std::string& message, const std::string& needle) {
  return message.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("a quantum model file round-trips through the loader") {
  const LindbladSpec spec = qubit_clockwork(kDeltaStar, kPhiStar, 1.0);
  const LindbladSpec loaded =
      parse_quantum_model(model_json(spec).dump(), "model");

  CHECK((loaded.hamiltonian - spec.hamiltonian).norm() == 0.0);
  REQUIRE(loaded.jumps.size() == spec.jumps.size());
  CHECK(loaded.jumps[0].first == spec.jumps[0].first);
  CHECK((loaded.jumps[0].second - spec.jumps[0].second).norm() == 0.0);

  const FcsResult got = current_and_noise(loaded, total_current(loaded));
  CHECK(test::rel_err(got.S, kSnrStar) < 1e-12);
}

TEST_CASE("an omitted imag block means a real matrix") {
  const std::string text = R"({"dim": 2,
    "hamiltonian": {"real": [[0.5, 0.0], [0.0, -0.5]]},
    "jumps": [{"label": {"a": 1, "j": "hop"},
               "matrix": {"real": [[0.0, 1.0], [0.0, 0.0]]}}]})";
  const LindbladSpec spec = parse_quantum_model(text, "model");
  CHECK(spec.hamiltonian(0, 0) == Complex(0.5, 0.0));
  CHECK(spec.jumps[0].second.imag().norm() == 0.0);
}

TEST_CASE("a non-Hermitian hamiltonian is rejected naming the norm") {
  json doc = model_json(qubit_clockwork(1.0, 1.0, 1.0));
  doc["hamiltonian"]["real"][0][1] = 0.3;
  const std::string message =
      rejection([&] { parse_quantum_model(doc.dump(), "bad.json"); });
  CHECK(contains(message, "bad.json"));
  CHECK(contains(message, "not Hermitian"));
  CHECK(contains(message, "||H - H^dagger||"));
}

TEST_CASE("quantum shape violations name the first offending entry") {
  json doc = model_json(qubit_clockwork(1.0, 1.0, 1.0));

  json no_dim = doc;
  no_dim.erase("dim");
  CHECK(contains(rejection([&] { parse_quantum_model(no_dim.dump(), "m"); }),
                 "missing the \"dim\" field"));

  json short_row = doc;
  short_row["hamiltonian"]["real"][1] = json::array({1.0});
  CHECK(contains(rejection([&] { parse_quantum_model(short_row.dump(), "m"); }),
                 "m.hamiltonian.real row 1 must list 2 entries"));

  json bad_entry = doc;
  bad_entry["jumps"][0]["matrix"]["imag"][0][1] = "x";
  CHECK(contains(rejection([&] { parse_quantum_model(bad_entry.dump(), "m"); }),
                 "m.jumps[0].matrix.imag row 0 entry 1 must be a number"));

  json bad_index = doc;
  bad_index["jumps"][0]["label"]["a"] = 0;
  CHECK(contains(rejection([&] { parse_quantum_model(bad_index.dump(), "m"); }),
                 "m.jumps[0].label.a = 0 must be >= 1"));

  json dup = doc;
  dup["jumps"].push_back(dup["jumps"][0]);
  CHECK(contains(rejection([&] { parse_quantum_model(dup.dump(), "m"); }),
                 "duplicate jump label (a=1, j=tick)"));

  CHECK(contains(rejection([&] { parse_quantum_model("{", "m"); }), "m:"));
}

TEST_CASE("a classical model file loads the l->k rate convention") {
  const std::string text = R"({"num_states": 2, "rates": [[0, 2], [1, 0]]})";
  const ClassicalClockworkSpec chain = parse_classical_model(text, "chain");
  CHECK(chain.rates(0, 1) == 2.0);  // 1 -> 0 at rate 2
  CHECK(chain.rates(1, 0) == 1.0);  // 0 -> 1 at rate 1

  const ClassicalJointSystem system = labeled_chain(chain);
  const FcsResult got = current_and_noise(system, total_current(system));
  CHECK(test::rel_err(got.S, 1.2) < 1e-12);
}

TEST_CASE("classical rejections carry state coordinates") {
  CHECK(contains(
      rejection([] {
        parse_classical_model(R"({"num_states": 2, "rates": [[1, 2], [1, 0]]})",
                              "c");
      }),
      "diagonal must be zero (state 0)"));
  CHECK(contains(
      rejection([] {
        parse_classical_model(R"({"num_states": 2, "rates": [[0, 2], [-1, 0]]})",
                              "c");
      }),
      "negative rate for transition 0->1"));
  CHECK(contains(
      rejection([] {
        parse_classical_model(R"({"num_states": 3, "rates": [[0, 1], [1, 0]]})",
                              "c");
      }),
      "c.rates must be an array of 3 rows"));
  CHECK(contains(
      rejection([] { parse_classical_model(R"({"num_states": 0, "rates": []})", "c"); }),
      "c.num_states = 0 must be >= 1"));
}

TEST_CASE("a policy file drives the switching system to the frozen value") {
  const SwitchingSetup setup =
      two_qubit_switching_policy(1.20, 0.88, kDeltaStar, kPhiStar, 1.0);
  const FeedbackPolicy loaded =
      parse_policy(policy_json(setup.policy).dump(), "policy");

  CHECK(loaded.memory_states == setup.policy.memory_states);
  CHECK(loaded.update == setup.policy.update);
  CHECK(loaded.params == setup.policy.params);

  const JointSystem joint = build_joint(setup.families, loaded);
  const FcsResult got = current_and_noise(joint.spec, total_current(joint.spec));
  CHECK(test::rel_err(got.S, kFeedbackAnchor) < 1e-10);
}

TEST_CASE("policy rejections carry update and params coordinates") {
  json doc = policy_json(two_qubit_switching_policy(1.2, 0.88, 1.0, 1.0, 1.0).policy);

  json short_next = doc;
  short_next["update"][0]["next"] = json::array({0});
  CHECK(contains(rejection([&] { parse_policy(short_next.dump(), "p"); }),
                 "p.update[0].next must list 2 entries"));

  json bad_target = doc;
  bad_target["update"][1]["next"][1] = 5;
  CHECK(contains(rejection([&] { parse_policy(bad_target.dump(), "p"); }),
                 "p.update[1].next[1] = 5 is not a memory state"));

  json dup = doc;
  dup["update"].push_back(dup["update"][0]);
  CHECK(contains(rejection([&] { parse_policy(dup.dump(), "p"); }),
                 "duplicates the (a=1, j=tick) update rule"));

  json arity = doc;
  arity["params"][1][0] = json::array({1.0, 2.0});
  CHECK(contains(rejection([&] { parse_policy(arity.dump(), "p"); }),
                 "p.params[1][0] has arity 2, expected 1"));

  json rows = doc;
  rows["params"].erase(1);
  CHECK(contains(rejection([&] { parse_policy(rows.dump(), "p"); }),
                 "one entry per memory state (2)"));
}

TEST_CASE("current files resolve against the target label alphabet") {
  const LindbladSpec qubit = qubit_clockwork(1.0, 1.0, 1.0);

  const CurrentConfig total = parse_current(R"({"total": true})", "cur");
  CHECK(total.total);
  CHECK(total.resolve(qubit).weights == total_current(qubit).weights);

  const CurrentConfig weighted = parse_current(
      R"({"weights": [{"a": 1, "j": "tick", "w": 2.5}]})", "cur");
  CHECK(weighted.resolve(qubit).weight_for({1, "tick"}) == 2.5);

  const SwitchingSetup flat = two_qubit_switching_policy(1.0, 1.0, 1.0, 1.0, 1.0);
  const JointSystem joint = build_joint(flat.families, flat.policy);
  const CurrentConfig tagged = parse_current(
      R"({"weights": [{"a": 2, "j": "tick", "m": 0, "w": 1.0}]})", "cur");
  CHECK(tagged.resolve(joint.spec).weight_for({2, "tick", 0}) == 1.0);

  const CurrentConfig stray = parse_current(
      R"({"weights": [{"a": 3, "j": "tick", "w": 1.0}]})", "cur");
  CHECK(contains(rejection([&] { stray.resolve(qubit); }),
                 "current weight on (a=3, j=tick) matches no jump"));

  const CurrentConfig empty = parse_current(R"({"weights": []})", "cur");
  CHECK(empty.resolve(qubit).empty_weights());
}

TEST_CASE("current files reject contradictions and duplicates") {
  CHECK(contains(
      rejection([] { parse_current(R"({"total": true, "weights": []})", "cur"); }),
      "sets both \"total\" and \"weights\""));
  CHECK(contains(rejection([] {
                   parse_current(R"({"weights": [{"a": 1, "j": "t", "w": 1.0},
                                                 {"a": 1, "j": "t", "w": 2.0}]})",
                                 "cur");
                 }),
                 "duplicates the weight on (a=1, j=t)"));
  CHECK(contains(rejection([] { parse_current(R"({"total": false})", "cur"); }),
                 "missing the \"weights\" field"));
  CHECK(contains(
      rejection([] {
        parse_current(R"({"weights": [{"a": 1, "j": "t", "w": "big"}]})", "cur");
      }),
      "cur.weights[0].w must be a number"));
}

TEST_CASE("the classical resolve route uses transition labels") {
  ClassicalClockworkSpec chain;
  chain.rates = RealMatrix::Zero(2, 2);
  chain.rates(1, 0) = 1.0;
  chain.rates(0, 1) = 2.0;
  const ClassicalJointSystem system = labeled_chain(chain);

  const CurrentConfig forward =
      parse_current(R"({"weights": [{"a": 1, "j": "0->1", "w": 1.0}]})", "cur");
  CHECK(forward.resolve(system).weight_for({1, "0->1"}) == 1.0);

  const CurrentConfig stray =
      parse_current(R"({"weights": [{"a": 1, "j": "0->2", "w": 1.0}]})", "cur");
  CHECK(contains(rejection([&] { stray.resolve(system); }), "(a=1, j=0->2)"));
}

TEST_CASE("csv numbers carry twelve significant digits") {
  CHECK(format_number(1.18734422175190) == "1.18734422175");
  CHECK(format_number(0.05539779665728) == "0.0553977966573");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1e-13) == "1e-13");
  CHECK(format_number(-1.5) == "-1.5");
}

TEST_CASE("csv tables stay rectangular and quote only when needed") {
  CsvTable table;
  table.header = {"Delta", "phi", "F", "D", "S", "flags"};
  table.append({"1", "3.14", "0.25", "0.05", "1.18", "ok"});
  table.append({"2", "3.14", "0", "0", "0", "failed: a, b"});
  CHECK(table.str() ==
        "Delta,phi,F,D,S,flags\n"
        "1,3.14,0.25,0.05,1.18,ok\n"
        "2,3.14,0,0,0,\"failed: a, b\"\n");
  CHECK_THROWS_AS(table.append({"too", "short"}), ValidationError);

  const std::string path = temp_path("clockfcs_io_table.csv");
  table.write_file(path);
  CHECK(slurp_file(path) == table.str());
}

TEST_CASE("model kind probing distinguishes the two schemas") {
  const std::string quantum = write_temp(
      "clockfcs_io_q.json", model_json(qubit_clockwork(1.0, 1.0, 1.0)).dump());
  const std::string classical = write_temp(
      "clockfcs_io_c.json", R"({"num_states": 2, "rates": [[0, 1], [1, 0]]})");
  const std::string neither = write_temp("clockfcs_io_n.json", R"({"x": 1})");

  CHECK(probe_model_kind(quantum) == ModelKind::quantum);
  CHECK(probe_model_kind(classical) == ModelKind::classical);
  CHECK(contains(rejection([&] { probe_model_kind(neither); }),
                 "neither \"dim\" nor \"num_states\""));

  CHECK(load_quantum_model(quantum).dim() == 2);
  CHECK(load_classical_model(classical).num_states() == 2);
}

TEST_CASE("missing files report the path") {
  CHECK(contains(rejection([] { slurp_file("/nonexistent/clockfcs.json"); }),
                 "cannot open /nonexistent/clockfcs.json"));
}

}  // TEST_SUITE
