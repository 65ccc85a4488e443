#include <doctest.h>

#include <cmath>
#include <string>

#include "afbench/error.hpp"
#include "afbench/matrix.hpp"
#include "afbench/random.hpp"

using namespace afbench;

TEST_CASE("matmul examples") {
  const Matrix a{{3, 4}, {5, 6}};
  CHECK(matmul(Matrix::identity(2), a) == a);
  CHECK(matmul(Matrix{{1, 2}, {3, 4}}, Matrix{{5, 6}, {7, 8}}) == Matrix{{19, 22}, {43, 50}});
  CHECK(matmul(Matrix(2, 2), a) == Matrix(2, 2));
}

TEST_CASE("matmul shape error names both shapes") {
  try {
    static_cast<void>(matmul(Matrix(2, 3), Matrix(2, 3)));
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("2x3") != std::string::npos);
    CHECK(msg.find("by 2x3") != std::string::npos);
  }
}

TEST_CASE("transposed products agree with explicit transpose") {
  RandomStream rng(3);
  const Matrix a = rng_uniform(rng, -1, 1, 4, 3);
  const Matrix b = rng_uniform(rng, -1, 1, 4, 5);
  const Matrix c = rng_uniform(rng, -1, 1, 6, 3);
  const Matrix tn = matmul_tn(a, b);
  const Matrix tn_ref = matmul(transpose(a), b);
  const Matrix nt = matmul_nt(a, c);
  const Matrix nt_ref = matmul(a, transpose(c));
  for (std::size_t i = 0; i < tn.size(); ++i) CHECK(tn.values()[i] == doctest::Approx(tn_ref.values()[i]));
  for (std::size_t i = 0; i < nt.size(); ++i) CHECK(nt.values()[i] == doctest::Approx(nt_ref.values()[i]));
}

TEST_CASE("matmul is associative on random small matrices") {
  RandomStream rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.index(8), k = 1 + rng.index(8), n = 1 + rng.index(8),
                      p = 1 + rng.index(8);
    const Matrix a = rng_uniform(rng, -1, 1, m, k);
    const Matrix b = rng_uniform(rng, -1, 1, k, n);
    const Matrix c = rng_uniform(rng, -1, 1, n, p);
    const Matrix left = matmul(matmul(a, b), c);
    const Matrix right = matmul(a, matmul(b, c));
    double worst = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) {
      worst = std::max(worst, std::abs(left.values()[i] - right.values()[i]));
    }
    REQUIRE(worst < 1e-9);
  }
}

TEST_CASE("identity multiplication is exact") {
  RandomStream rng(5);
  const Matrix a = rng_uniform(rng, -1, 1, 5, 7);
  CHECK(matmul(a, Matrix::identity(7)) == a);
  CHECK(matmul(Matrix::identity(5), a) == a);
}

TEST_CASE("map and reduce") {
  const Matrix a{{1, 2}, {3, 4}};
  CHECK(map(a, [](double x) { return x; }) == a);
  CHECK(reduce(a, Axis::Rows, ReduceOp::Sum) == Matrix{{3}, {7}});
  CHECK(reduce(a, Axis::Cols, ReduceOp::Sum) == Matrix{{4, 6}});
  CHECK(reduce(a, Axis::Rows, ReduceOp::Max) == Matrix{{2}, {4}});
  CHECK(reduce(a, Axis::Cols, ReduceOp::Mean) == Matrix{{2, 3}});
  CHECK(reduce(Matrix{{0.2, 0.5, 0.5}}, Axis::Rows, ReduceOp::ArgMax) == Matrix{{1}});
  const std::vector<double> tie = {0.2, 0.5, 0.5};
  CHECK(argmax(tie) == 1);
  const std::vector<double> all_equal = {0.0, 0.0, 0.0};
  CHECK(argmax(all_equal) == 0);
  CHECK_THROWS_AS(reduce(a, static_cast<Axis>(7), ReduceOp::Sum), ShapeError);
  CHECK_THROWS_AS(map(a, [](double) { return NAN; }), DomainError);
}

TEST_CASE("matrix construction checks value count") {
  CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
  CHECK_THROWS_AS((Matrix{{1, 2}, {3}}), ShapeError);
}

TEST_CASE("rng_uniform") {
  RandomStream s(1);
  const Matrix c = rng_uniform(s, 0.3, 0.3, 3, 4);
  for (double v : c.values()) CHECK(v == 0.3);

  RandomStream a(99), b(99);
  CHECK(rng_uniform(a, -2, 5, 10, 10) == rng_uniform(b, -2, 5, 10, 10));

  RandomStream big(7);
  const Matrix m = rng_uniform(big, 0, 1, 1000, 1000);
  double sum = 0.0;
  for (double v : m.values()) {
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    sum += v;
  }
  CHECK(std::abs(sum / 1e6 - 0.5) < 0.001);

  CHECK_THROWS_AS(rng_uniform(s, 1.0, 0.0, 1, 1), DomainError);
}

TEST_CASE("rng_normal") {
  RandomStream s(1);
  const Matrix constant = rng_normal(s, 2.0, 0.0, 4, 4);
  for (double v : constant.values()) CHECK(v == 2.0);

  RandomStream big(8);
  const Matrix m = rng_normal(big, 0.0, 1.0, 1000, 1000);
  double sum = 0.0, sq = 0.0;
  for (double v : m.values()) {
    sum += v;
    sq += v * v;
  }
  CHECK(std::abs(sum / 1e6) < 0.004);
  CHECK(std::abs(sq / 1e6 - 1.0) < 0.01);

  RandomStream a(42), b(42);
  CHECK(rng_normal(a, 0, 1, 7, 3) == rng_normal(b, 0, 1, 7, 3));
  CHECK_THROWS_AS(rng_normal(s, 0.0, -1.0, 1, 1), DomainError);
}

TEST_CASE("rng_bernoulli_mask") {
  RandomStream s(2);
  const Matrix all_kept = rng_bernoulli_mask(s, 1.0, 10, 10);
  const Matrix none_kept = rng_bernoulli_mask(s, 0.0, 10, 10);
  for (double v : all_kept.values()) CHECK(v == 1.0);
  for (double v : none_kept.values()) CHECK(v == 0.0);

  const Matrix m = rng_bernoulli_mask(s, 0.5, 1000, 1000);
  double ones = 0.0;
  for (double v : m.values()) {
    REQUIRE((v == 0.0 || v == 1.0));
    ones += v;
  }
  CHECK(std::abs(ones / 1e6 - 0.5) < 0.0016);

  CHECK_THROWS_AS(rng_bernoulli_mask(s, 1.5, 1, 1), DomainError);
  CHECK_THROWS_AS(rng_bernoulli_mask(s, -0.1, 1, 1), DomainError);
}

TEST_CASE("child streams are deterministic and distinct") {
  const RandomStream parent(123);
  RandomStream c1 = parent.child(0), c1b = parent.child(0), c2 = parent.child(1);
  const auto x = c1.next_u64();
  CHECK(x == c1b.next_u64());
  CHECK(x != c2.next_u64());
}

TEST_CASE("permutation is a permutation") {
  RandomStream s(4);
  auto p = s.permutation(1000);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) REQUIRE(p[i] == i);
  CHECK_THROWS_AS(s.index(0), DomainError);
}
