#include <doctest.h>

#include <cmath>

#include "clockfcs/model.hpp"
#include "test_util.hpp"

using namespace clockfcs;

TEST_SUITE("model") {

TEST_CASE("jump labels order, print, and strip memory") {
  JumpLabel a{1, "tick"};
  JumpLabel b{1, "tick", 2};
  JumpLabel c{2, "absorb"};
  CHECK(a < b);         // memoryless sorts before memory-tagged
  CHECK(a < c);
  CHECK(!a.has_memory());
  CHECK(b.has_memory());
  CHECK(b.base() == a);
  CHECK(a.str() == "(a=1, j=tick)");
  CHECK(b.str() == "(a=1, j=tick, m=2)");
}

TEST_CASE("current weights fall back from memory-tagged to plain labels") {
  IntegratedCurrent cur;
  cur.weights[{1, "tick"}] = 2.0;
  cur.weights[{1, "tick", 3}] = 5.0;
  CHECK(cur.weight_for({1, "tick"}) == 2.0);
  CHECK(cur.weight_for({1, "tick", 3}) == 5.0);   // exact match wins
  CHECK(cur.weight_for({1, "tick", 0}) == 2.0);   // falls back to (a, j)
  CHECK(cur.weight_for({2, "tick"}) == 0.0);
  CHECK(!cur.empty_weights());
  IntegratedCurrent zero;
  zero.weights[{1, "tick"}] = 0.0;
  CHECK(zero.empty_weights());
}

TEST_CASE("spec validation catches the usual mistakes") {
  LindbladSpec spec;
  spec.hamiltonian = Matrix::Zero(2, 2);
  spec.jumps.emplace_back(JumpLabel{1, "down"}, Matrix::Zero(2, 2));
  CHECK_NOTHROW(spec.validate());

  SUBCASE("non-Hermitian Hamiltonian") {
    spec.hamiltonian(0, 1) = Complex(0.0, 1.0);
    CHECK_THROWS_WITH_AS(spec.validate(),
                         doctest::Contains("not Hermitian"), ValidationError);
  }
  SUBCASE("jump dimension mismatch") {
    spec.jumps.emplace_back(JumpLabel{1, "up"}, Matrix::Zero(3, 3));
    CHECK_THROWS_AS(spec.validate(), ValidationError);
  }
  SUBCASE("duplicate label") {
    spec.jumps.emplace_back(JumpLabel{1, "down"}, Matrix::Zero(2, 2));
    CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("duplicate"),
                         ValidationError);
  }
  SUBCASE("clockwork index must be positive") {
    spec.jumps.emplace_back(JumpLabel{0, "up"}, Matrix::Zero(2, 2));
    CHECK_THROWS_AS(spec.validate(), ValidationError);
  }
}

TEST_CASE("classical rate matrices validate shape and signs") {
  ClassicalClockworkSpec chain;
  chain.rates = RealMatrix::Zero(2, 2);
  chain.rates(1, 0) = 2.0;
  chain.rates(0, 1) = 3.0;
  CHECK_NOTHROW(chain.validate());
  CHECK(chain.num_states() == 2);

  SUBCASE("negative rate") {
    chain.rates(1, 0) = -1.0;
    CHECK_THROWS_AS(chain.validate(), ValidationError);
  }
  SUBCASE("nonzero diagonal") {
    chain.rates(0, 0) = 1.0;
    CHECK_THROWS_AS(chain.validate(), ValidationError);
  }
}

TEST_CASE("qubit clockwork matches its defining matrices") {
  const double E = 1.7, phi = 0.9, G = 2.0;
  LindbladSpec spec = qubit_clockwork(E, phi, G);
  CHECK(spec.dim() == 2);
  CHECK(spec.jumps.size() == 1);
  CHECK(spec.jumps[0].first == JumpLabel{1, "tick"});

  CHECK(std::abs(spec.hamiltonian(0, 0) - Complex(-E / 2)) < 1e-15);
  CHECK(std::abs(spec.hamiltonian(1, 1) - Complex(E / 2)) < 1e-15);
  CHECK(std::abs(spec.hamiltonian(0, 1)) == 0.0);

  const Matrix& j = spec.jumps[0].second;
  const double r = std::sqrt(G) / 2.0;
  CHECK(std::abs(j(0, 0) - Complex(r)) < 1e-15);
  CHECK(std::abs(j(0, 1) - Complex(r)) < 1e-15);
  CHECK(std::abs(j(1, 0) - r * std::exp(Complex(0, phi))) < 1e-15);
  CHECK(std::abs(j(1, 1) - r * std::exp(Complex(0, phi))) < 1e-15);

  // escape operator is G times the projector on |+>
  Matrix jdj = j.adjoint() * j;
  Matrix expect(2, 2);
  expect << G / 2.0, G / 2.0, G / 2.0, G / 2.0;
  CHECK((jdj - expect).norm() < 1e-14);

  CHECK_THROWS_AS(qubit_clockwork(1.0, 0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(qubit_clockwork(1.0, 0.0, -1.0), ValidationError);
}

TEST_CASE("classical chains convert to jump operators per transition") {
  ClassicalClockworkSpec chain;
  chain.rates = RealMatrix::Zero(2, 2);
  chain.rates(1, 0) = 2.0;
  chain.rates(0, 1) = 3.0;
  LindbladSpec spec = classical_to_lindblad(chain, 4);
  CHECK(spec.hamiltonian.norm() == 0.0);
  REQUIRE(spec.jumps.size() == 2);
  CHECK(spec.has_label({4, "0->1"}));
  CHECK(spec.has_label({4, "1->0"}));
  for (const auto& [label, op] : spec.jumps) {
    if (label.jump == "0->1") {
      CHECK(std::abs(op(1, 0) - Complex(std::sqrt(2.0))) < 1e-15);
      CHECK(op.cwiseAbs().sum() == doctest::Approx(std::sqrt(2.0)));
    } else {
      CHECK(std::abs(op(0, 1) - Complex(std::sqrt(3.0))) < 1e-15);
    }
  }
}

TEST_CASE("embedding places an operator at one tensor slot") {
  Matrix op(2, 2);
  op << 0, 1, 0, 0;
  std::vector<Eigen::Index> dims{2, 2};
  Matrix left = embed_factor(op, dims, 0);
  Matrix right = embed_factor(op, dims, 1);
  CHECK((left - kron(op, Matrix::Identity(2, 2))).norm() == 0.0);
  CHECK((right - kron(Matrix::Identity(2, 2), op)).norm() == 0.0);
}

TEST_CASE("independent composition offsets clockwork indices") {
  LindbladSpec q1 = qubit_clockwork(1.0, 0.5, 1.0);
  LindbladSpec q2 = qubit_clockwork(2.0, 1.5, 3.0);
  LindbladSpec joint = compose_independent({q1, q2});
  CHECK(joint.dim() == 4);
  REQUIRE(joint.jumps.size() == 2);
  CHECK(joint.has_label({1, "tick"}));
  CHECK(joint.has_label({2, "tick"}));

  Matrix h_expect = kron(q1.hamiltonian, Matrix::Identity(2, 2)) +
                    kron(Matrix::Identity(2, 2), q2.hamiltonian);
  CHECK((joint.hamiltonian - h_expect).norm() < 1e-15);
  CHECK((joint.jumps[0].second - kron(q1.jumps[0].second, Matrix::Identity(2, 2)))
            .norm() == 0.0);
  CHECK((joint.jumps[1].second - kron(Matrix::Identity(2, 2), q2.jumps[0].second))
            .norm() == 0.0);
}

TEST_CASE("parameter axes distinguish intervals from finite sets") {
  ParameterAxis interval{0.5, 2.0, {}};
  CHECK(interval.contains(0.5));
  CHECK(interval.contains(2.0));
  CHECK(!interval.contains(0.49));
  CHECK(interval.str() == "[0.5, 2]");

  ParameterAxis discrete{0.0, 0.0, {0.0, 1.0}};
  CHECK(discrete.contains(0.0));
  CHECK(discrete.contains(1.0));
  CHECK(!discrete.contains(0.5));
  CHECK(discrete.str() == "{0, 1}");
}

TEST_CASE("energy family rescales the Hamiltonian only") {
  LindbladSpec base = qubit_clockwork(2.0, 0.3, 1.5);
  ControlledFamily fam = energy_family(base, {0.5, 2.0, {}});
  CHECK(fam.kind == ControlKind::energy);
  CHECK(fam.symmetric_axes());
  LindbladSpec out = fam.build({1.5});
  CHECK((out.hamiltonian - 1.5 * base.hamiltonian).norm() < 1e-15);
  CHECK((out.jumps[0].second - base.jumps[0].second).norm() == 0.0);
  CHECK_THROWS_AS(fam.build({2.5}), ValidationError);
  CHECK_THROWS_AS(fam.build({1.0, 1.0}), ValidationError);
}

TEST_CASE("jump strength family scales operators by sqrt(c)") {
  LindbladSpec base = qubit_clockwork(1.0, 0.0, 1.0);
  ControlledFamily fam = jump_strength_family(base, {0.0, 4.0, {}});
  LindbladSpec out = fam.build({4.0});
  CHECK((out.jumps[0].second - 2.0 * base.jumps[0].second).norm() < 1e-15);
  CHECK((out.hamiltonian - base.hamiltonian).norm() == 0.0);
  LindbladSpec off = fam.build({0.0});
  CHECK(off.jumps[0].second.norm() == 0.0);
  CHECK(off.jumps.size() == 1);  // zero-strength jump keeps its label
  CHECK_THROWS_AS(jump_strength_family(base, {-1.0, 1.0, {}}), ValidationError);
}

TEST_CASE("time-unitary family rotates jumps and rejects bad unitaries") {
  LindbladSpec base = qubit_clockwork(1.0, 0.0, 1.0);
  auto rot = [](double t) {
    Matrix u(2, 2);
    u << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return u;
  };
  ControlledFamily fam = time_unitary_family(base, rot, {0.0, 3.2, {}});
  LindbladSpec out = fam.build({0.7});
  CHECK((out.jumps[0].second - rot(0.7) * base.jumps[0].second).norm() < 1e-15);
  CHECK((out.hamiltonian - base.hamiltonian).norm() == 0.0);

  auto bad = [](double t) { return Matrix::Identity(2, 2) * (1.0 + t); };
  ControlledFamily broken = time_unitary_family(base, bad, {0.5, 1.0, {}});
  CHECK_THROWS_AS(broken.build({0.5}), ValidationError);
}

TEST_CASE("coupling family interpolates the interaction term") {
  Matrix sz(2, 2);
  sz << 1, 0, 0, -1;
  Matrix h_int = kron(sz, sz);
  std::vector<std::pair<JumpLabel, Matrix>> jumps;
  jumps.emplace_back(JumpLabel{1, "decay"},
                     kron(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) * 0.1);
  ControlledFamily fam = coupling_family(0.5 * sz, -0.25 * sz, h_int, jumps,
                                         {0.0, 1.0, {}});
  LindbladSpec weak = fam.build({0.0});
  LindbladSpec strong = fam.build({1.0});
  CHECK((strong.hamiltonian - weak.hamiltonian - h_int).norm() < 1e-15);
  Matrix h0 = kron(0.5 * sz, Matrix::Identity(2, 2)) +
              kron(Matrix::Identity(2, 2), -0.25 * sz);
  CHECK((weak.hamiltonian - h0).norm() < 1e-15);
}

TEST_CASE("classical ring family keeps zero-rate jumps in the alphabet") {
  ControlledFamily fam = classical_ring_family(3, {0.0, 5.0, {}});
  CHECK(fam.classical_states == 3);
  CHECK(fam.axes.size() == 3);
  CHECK(fam.symmetric_axes());
  LindbladSpec out = fam.build({1.0, 0.0, 4.0});
  REQUIRE(out.jumps.size() == 3);
  CHECK(out.jumps[0].first.jump == "0->1");
  CHECK(out.jumps[1].first.jump == "1->2");
  CHECK(out.jumps[2].first.jump == "2->0");
  CHECK(std::abs(out.jumps[0].second(1, 0) - Complex(1.0)) < 1e-15);
  CHECK(out.jumps[1].second.norm() == 0.0);
  CHECK(std::abs(out.jumps[2].second(0, 2) - Complex(2.0)) < 1e-15);
  CHECK_THROWS_AS(classical_ring_family(1, {0.0, 1.0, {}}), ValidationError);
  CHECK_THROWS_AS(classical_ring_family(3, {-0.5, 1.0, {}}), ValidationError);
}

}  // TEST_SUITE
