#include <doctest.h>

#include <random>

#include "rbf/linalg.hpp"

using namespace rbf;

TEST_CASE("identity solve") {
  Matrix a = Matrix::Identity(4, 4);
  Vector b(4);
  b << 1, -2, 3, 0.5;
  const SolveReport r = solve_dense(a, b);
  CHECK((r.solution.col(0) - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.condition == doctest::Approx(1.0));
  CHECK(r.method == SolveMethod::lu_partial_pivot);
}

TEST_CASE("diagonal solve") {
  Matrix a(2, 2);
  a << 2, 0, 0, 4;
  Vector b(2);
  b << 2, 8;
  const SolveReport r = solve_dense(a, b);
  CHECK(r.solution(0, 0) == doctest::Approx(1.0));
  CHECK(r.solution(1, 0) == doctest::Approx(2.0));
}

TEST_CASE("seeded random system reproduces an all-ones solution") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Matrix a(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) a(i, j) = coeff(rng) + (i == j ? 4.0 : 0.0);
  const Vector b = a * Vector::Ones(8);
  const SolveReport r = solve_dense(a, b);
  CHECK((r.solution.col(0) - Vector::Ones(8)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("residual contract on well-conditioned systems") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + trial;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = coeff(rng) + (i == j ? 3.0 : 0.0);
    Vector b(n);
    for (int i = 0; i < n; ++i) b[i] = coeff(rng);
    const SolveReport r = solve_dense(a, b);
    REQUIRE(r.condition < 1e10);
    const double bound =
        1e-8 * (a.cwiseAbs().rowwise().sum().maxCoeff() *
                    r.solution.cwiseAbs().maxCoeff() +
                b.cwiseAbs().maxCoeff());
    CHECK(r.residual_norm <= bound);
  }
}

TEST_CASE("singular matrix reports an error") {
  Matrix a = Matrix::Zero(3, 3);
  Vector b = Vector::Ones(3);
  CHECK_THROWS_AS(solve_dense(a, b), NumericalError);
}

TEST_CASE("near-singular system falls back to truncated SVD and is flagged") {
  Matrix a(3, 3);
  a << 1, 2, 3, 2, 4, 6.0000000000000009, 1, 0, 1;  // nearly rank 2
  Vector b(3);
  b << 1, 2, 1;
  const SolveReport r = solve_dense(a, b);
  CHECK(r.method == SolveMethod::truncated_svd);
  CHECK(r.solution.allFinite());
}

TEST_CASE("symmetry defect") {
  Matrix s(3, 3);
  s << 1, 2, 3, 2, 5, -1, 3, -1, 0;
  CHECK(symmetry_defect(s) == 0.0);

  Matrix u(2, 2);
  u << 0, 1, 0, 0;
  CHECK(symmetry_defect(u) == doctest::Approx(0.5));
}

namespace {

Matrix random_centrosymmetric(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = coeff(rng) + (i == j ? 2.5 : 0.0);
  Matrix c = 0.5 * (a + a.reverse().eval());
  return c;
}

}  // namespace

TEST_CASE("centrosymmetric split: 2x2 textbook case") {
  Matrix a(2, 2);
  a << 3, 1, 1, 3;
  Vector b(2);
  b << 4, 8;
  const SolveReport split = centrosymmetric_split_solve(a, b);
  const SolveReport dense = solve_dense(a, b);
  CHECK((split.solution - dense.solution).cwiseAbs().maxCoeff() < 1e-14);
  // Half systems are the scalars a+b = 4 and a-b = 2.
  CHECK(split.solution(0, 0) == doctest::Approx((4 + 8) / 2.0 / 4.0 +
                                                (4 - 8) / 2.0 / 2.0));
}

TEST_CASE("centrosymmetric split equals dense solve, even and odd sizes") {
  for (int n : {6, 7, 12, 13}) {
    Matrix a = random_centrosymmetric(n, 100 + n);
    CHECK(centrosymmetry_defect(a) < 1e-12);
    Vector b(n);
    std::mt19937 rng(n);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int i = 0; i < n; ++i) b[i] = coeff(rng);
    const SolveReport split = centrosymmetric_split_solve(a, b);
    const SolveReport dense = solve_dense(a, b);
    const double scale = dense.solution.cwiseAbs().maxCoeff();
    CHECK((split.solution - dense.solution).cwiseAbs().maxCoeff() <=
          1e-10 * (1.0 + scale));
  }
}

TEST_CASE("non-centrosymmetric input is rejected") {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  Vector b = Vector::Ones(2);
  CHECK_THROWS_WITH_AS(centrosymmetric_split_solve(a, b), "not centrosymmetric",
                       NumericalError);
}

TEST_CASE("block sparse: single block equals dense") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Matrix a(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) a(i, j) = coeff(rng) + (i == j ? 3.0 : 0.0);
  Vector b(6);
  for (int i = 0; i < 6; ++i) b[i] = coeff(rng);

  BlockSparseSystem system = assemble_block_sparse(6, 6, {{0, 0, a}});
  const SolveReport sparse = solve_block_sparse(system, b);
  const SolveReport dense = solve_dense(a, b);
  CHECK((sparse.solution - dense.solution).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((system.densified() - a).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("block sparse: disjoint diagonal blocks solve independently") {
  Matrix a1(2, 2), a2(2, 2);
  a1 << 2, 0, 0, 2;
  a2 << 4, 1, 1, 4;
  Vector b(4);
  b << 2, 4, 5, 9;
  BlockSparseSystem system = assemble_block_sparse(4, 4, {{0, 0, a1}, {2, 2, a2}});
  const SolveReport r = solve_block_sparse(system, b);
  CHECK(r.solution(0, 0) == doctest::Approx(1.0));
  CHECK(r.solution(1, 0) == doctest::Approx(2.0));
  // Second block solved on its own: [4 1; 1 4] x = (5, 9).
  Matrix d = system.densified();
  CHECK((d * r.solution.col(0) - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("block sparse: overlapping contributions are summed") {
  Matrix half = 0.5 * Matrix::Identity(3, 3);
  BlockSparseSystem system =
      assemble_block_sparse(3, 3, {{0, 0, half}, {0, 0, half}});
  Vector b(3);
  b << 1, 2, 3;
  const SolveReport r = solve_block_sparse(system, b);
  CHECK((r.solution.col(0) - b).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(system.nonzeros() == 3);
}

TEST_CASE("block sparse: out-of-range block rejected") {
  CHECK_THROWS_AS(assemble_block_sparse(2, 2, {{1, 1, Matrix::Identity(2, 2)}}),
                  ValidationError);
}
