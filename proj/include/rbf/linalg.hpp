#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "rbf/errors.hpp"

namespace rbf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class SolveMethod { lu_partial_pivot, truncated_svd };

/// Result of a linear solve, with the diagnostics the collocation schemes
/// report: a 1-norm condition estimate, the recomputed infinity-norm
/// residual, and which path ran.
struct SolveReport {
  Matrix solution;           // one column per right-hand side
  double condition = 0.0;    // 1-norm condition estimate
  SolveMethod method = SolveMethod::lu_partial_pivot;
  double residual_norm = 0.0;  // max over rhs columns of ||A x - b||_inf
};

/// LU with partial pivoting plus iterative refinement. Falls back to a
/// truncated SVD (discarding singular values below 1e-12 * sigma_max) when
/// the condition estimate exceeds 1e14, and flags the report.
SolveReport solve_dense(const Matrix& a, const Matrix& b);

/// Reusable factorization for repeated right-hand sides.
class DenseFactorization {
 public:
  explicit DenseFactorization(Matrix a);
  Vector solve(const Vector& b) const;
  double condition() const { return condition_; }
  SolveMethod method() const { return method_; }

 private:
  Matrix a_;
  Eigen::PartialPivLU<Matrix> lu_;
  Eigen::JacobiSVD<Matrix> svd_;
  double condition_ = 0.0;
  SolveMethod method_ = SolveMethod::lu_partial_pivot;
};

/// max_{i,j} |A_ij - A_ji| / (1 + max |A|); zero iff symmetric.
double symmetry_defect(const Matrix& a);

/// ||A - JAJ||_inf with J the exchange (anti-identity) permutation.
double centrosymmetry_defect(const Matrix& a);

/// Solves a centrosymmetric system through the half-size symmetric and
/// antisymmetric subproblems (center-bordered reduction for odd dimension).
/// Requires ||A - JAJ||_inf <= 1e-10 ||A||_inf.
SolveReport centrosymmetric_split_solve(const Matrix& a, const Vector& b);

/// One dense contribution to a block-sparse system; overlapping
/// contributions are summed.
struct Block {
  int row = 0;
  int col = 0;
  Matrix values;
};

class BlockSparseSystem {
 public:
  BlockSparseSystem(int rows, int cols, std::vector<Block> blocks);
  int rows() const { return rows_; }
  int nonzeros() const;
  Matrix densified() const;

 private:
  friend SolveReport solve_block_sparse(const BlockSparseSystem&, const Vector&);
  int rows_, cols_;
  std::vector<Block> blocks_;
};

BlockSparseSystem assemble_block_sparse(int rows, int cols,
                                        std::vector<Block> blocks);
SolveReport solve_block_sparse(const BlockSparseSystem& system, const Vector& b);

}  // namespace rbf
