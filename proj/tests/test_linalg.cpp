#include <doctest.h>

#include "clockfcs/linalg.hpp"
#include "test_util.hpp"

using namespace clockfcs;

TEST_SUITE("linalg") {

TEST_CASE("kron identity and diagonal cases") {
  Matrix i2 = Matrix::Identity(2, 2);
  CHECK((kron(i2, i2) - Matrix::Identity(4, 4)).norm() == 0.0);

  Matrix a = Vector{{1.0, 2.0}}.asDiagonal();
  Matrix b = Vector{{3.0, 4.0}}.asDiagonal();
  Matrix expect = Vector{{3.0, 4.0, 6.0, 8.0}}.asDiagonal();
  CHECK((kron(a, b) - expect).norm() == 0.0);
}

TEST_CASE("kron mixed-product identity on random factors") {
  RngStream rng(1, 0);
  Matrix a = test::random_matrix(2, 2, rng);
  Matrix b = test::random_matrix(2, 2, rng);
  Vector x = test::random_matrix(2, 1, rng);
  Vector y = test::random_matrix(2, 1, rng);
  Vector lhs = kron(a, b) * kron(x, y);
  Vector rhs = kron(a * x, b * y);
  CHECK((lhs - rhs).norm() <= 1e-14);
}

TEST_CASE("kron associativity is exact on integer matrices") {
  Matrix a(2, 2), b(2, 2), c(2, 2);
  a << 1, 2, 3, 4;
  b << 5, -6, 7, 8;
  c << -9, 10, 11, 12;
  CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).norm() == 0.0);
}

TEST_CASE("vectorize stacks columns") {
  Matrix a(2, 2);
  a << 1, 3, 2, 4;
  Vector v = vectorize(a);
  CHECK(v(0) == Complex(1));
  CHECK(v(1) == Complex(2));
  CHECK(v(2) == Complex(3));
  CHECK(v(3) == Complex(4));
  CHECK((unvectorize(v) - a).norm() == 0.0);
}

TEST_CASE("vectorize round trip and trace identity") {
  RngStream rng(2, 0);
  Matrix a = test::random_matrix(4, 4, rng);
  CHECK((unvectorize(vectorize(a)) - a).norm() == 0.0);

  Vector one = vectorize(Matrix::Identity(4, 4));
  Complex tr = one.adjoint() * vectorize(a);
  CHECK(std::abs(tr - a.trace()) <= 1e-14);
}

TEST_CASE("vec(BXC) = kron(C^T, B) vec(X)") {
  RngStream rng(3, 0);
  Matrix b = test::random_matrix(3, 3, rng);
  Matrix x = test::random_matrix(3, 3, rng);
  Matrix c = test::random_matrix(3, 3, rng);
  Vector lhs = vectorize(b * x * c);
  Vector rhs = kron(c.transpose(), b) * vectorize(x);
  CHECK((lhs - rhs).norm() <= 1e-13);
}

TEST_CASE("moore_penrose on invertible diagonal") {
  Matrix a = Vector{{2.0, 4.0}}.asDiagonal();
  Matrix expect = Vector{{0.5, 0.25}}.asDiagonal();
  CHECK((moore_penrose(a) - expect).norm() <= 1e-15);
}

TEST_CASE("moore_penrose of a projector is itself") {
  Matrix a(2, 2);
  a << 1, 0, 0, 0;
  CHECK((moore_penrose(a) - a).norm() <= 1e-15);
}

TEST_CASE("Penrose identities on random rank-deficient matrices") {
  RngStream rng(4, 0);
  Matrix b = test::random_matrix(4, 2, rng);
  Matrix c = test::random_matrix(2, 4, rng);
  Matrix a = b * c;  // rank 2
  Matrix p = moore_penrose(a);
  CHECK((a * p * a - a).norm() <= 1e-10 * a.norm());
  CHECK((p * a * p - p).norm() <= 1e-10 * p.norm());
  CHECK(((a * p).adjoint() - a * p).norm() <= 1e-10);
  CHECK(((p * a).adjoint() - p * a).norm() <= 1e-10);
}

TEST_CASE("Penrose identities hold up to 64x64") {
  RngStream rng(5, 0);
  for (Eigen::Index n : {8, 32, 64}) {
    Matrix b = test::random_matrix(n, n / 2, rng);
    Matrix c = test::random_matrix(n / 2, n, rng);
    Matrix a = b * c;
    Matrix p = moore_penrose(a);
    CHECK((a * p * a - a).norm() <= 1e-10 * a.norm());
    CHECK((p * a * p - p).norm() <= 1e-10 * p.norm());
    CHECK(((a * p).adjoint() - a * p).norm() <= 1e-10 * (a * p).norm());
    CHECK(((p * a).adjoint() - p * a).norm() <= 1e-10 * (p * a).norm());
  }
}

TEST_CASE("null_space of diag(0,1)") {
  Matrix a = Vector{{0.0, 1.0}}.asDiagonal();
  Matrix ns = null_space(a);
  REQUIRE(ns.cols() == 1);
  CHECK(std::abs(std::abs(ns(0, 0)) - 1.0) <= 1e-14);
  CHECK(std::abs(ns(1, 0)) <= 1e-14);
}

TEST_CASE("null_space of an invertible matrix is empty") {
  RngStream rng(6, 0);
  Matrix a = test::random_matrix(3, 3, rng) + 5.0 * Matrix::Identity(3, 3);
  CHECK(null_space(a).cols() == 0);
  CHECK(kernel_dimension(a) == 0);
}

TEST_CASE("null_space of the 2-state rate matrix spans (2,1)/sqrt(5)") {
  Matrix a(2, 2);
  a << -1, 2, 1, -2;
  Matrix ns = null_space(a);
  REQUIRE(ns.cols() == 1);
  // kernel direction is fixed up to a global phase
  Complex ratio = ns(0, 0) / ns(1, 0);
  CHECK(std::abs(ratio - Complex(2.0)) <= 1e-10);
  CHECK(std::abs(ns.col(0).norm() - 1.0) <= 1e-12);
}

TEST_CASE("null_space vectors annihilate the matrix on singular inputs") {
  RngStream rng(7, 0);
  Matrix b = test::random_matrix(6, 4, rng);
  Matrix c = test::random_matrix(4, 6, rng);
  Matrix a = b * c;  // 6x6 of rank 4
  Matrix ns = null_space(a);
  REQUIRE(ns.cols() == 2);
  CHECK((a * ns).norm() <= 1e-10 * a.norm());
  CHECK((ns.adjoint() * ns - Matrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("validation of malformed inputs") {
  Matrix bad(2, 2);
  bad << 1, 2, 3, std::nan("");
  CHECK_THROWS_AS(moore_penrose(bad), ValidationError);
  CHECK_THROWS_AS(vectorize(Matrix::Zero(2, 3)), ValidationError);
  CHECK_THROWS_AS(unvectorize(Vector::Zero(3)), ValidationError);
  CHECK_THROWS_AS(moore_penrose(Matrix::Identity(2, 2), 0.0), ValidationError);
}

TEST_CASE("EigenPropagator matches a hand-computed exponential") {
  Matrix a(2, 2);
  a << -1, 2, 1, -2;  // rate matrix: exp(a t) relaxes onto (2,1)/3
  EigenPropagator prop(a);
  Vector v(2);
  v << 1, 0;
  Vector w = prop.apply(v, 50.0);
  CHECK(std::abs(w(0) - Complex(2.0 / 3.0)) <= 1e-12);
  CHECK(std::abs(w(1) - Complex(1.0 / 3.0)) <= 1e-12);

  // split form agrees with the direct application
  Vector mixed = prop.mix(v);
  CHECK((prop.unmix_at(mixed, 0.7) - prop.apply(v, 0.7)).norm() <= 1e-13);
}

TEST_CASE("EigenPropagator rejects defective generators") {
  Matrix jordan(2, 2);
  jordan << 0, 1, 0, 0;
  CHECK_THROWS_AS(EigenPropagator{jordan}, NumericalError);
}

}  // TEST_SUITE
