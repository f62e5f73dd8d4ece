#include "rbf/linalg.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace rbf {

namespace {

constexpr double kConditionFallback = 1e14;
constexpr double kSvdCutoff = 1e-12;

// Hager/Higham 1-norm power iteration for ||A^-1||_1 using the LU factors.
// Transpose solves go through the packed factors of P A = L U.
double estimate_inverse_norm1(const Matrix& a,
                              const Eigen::PartialPivLU<Matrix>& lu) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;
  auto solve_t = [&](const Vector& rhs) -> Vector {
    // A^T z = rhs  with  A = P^T L U  =>  z = P^T L^-T U^-T rhs.
    Vector w = lu.matrixLU()
                   .triangularView<Eigen::Upper>()
                   .transpose()
                   .solve(rhs);
    Vector y = lu.matrixLU()
                   .triangularView<Eigen::UnitLower>()
                   .transpose()
                   .solve(w);
    return lu.permutationP().transpose() * y;
  };

  Vector x = Vector::Constant(n, 1.0 / double(n));
  double est = 0.0;
  for (int it = 0; it < 5; ++it) {
    Vector y = lu.solve(x);
    est = y.lpNorm<1>();
    Vector xi(n);
    for (Eigen::Index i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    Vector z = solve_t(xi);
    Eigen::Index j;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x)) break;
    x.setZero();
    x[j] = 1.0;
  }
  return est;
}

double residual_inf(const Matrix& a, const Matrix& x, const Matrix& b) {
  return (a * x - b).cwiseAbs().maxCoeff();
}

Matrix truncated_svd_solve(const Eigen::JacobiSVD<Matrix>& svd, const Matrix& b) {
  const Vector& sv = svd.singularValues();
  const double cutoff = kSvdCutoff * sv[0];
  if (!(sv[0] > 0.0)) throw NumericalError("singular system");
  Matrix y = svd.matrixU().transpose() * b;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff)
      y.row(i) /= sv[i];
    else
      y.row(i).setZero();
  }
  return svd.matrixV() * y;
}

}  // namespace

SolveReport solve_dense(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols()) throw ValidationError("matrix must be square");
  if (a.rows() != b.rows()) throw ValidationError("rhs row count mismatch");
  if (!a.allFinite() || !b.allFinite())
    throw NumericalError("non-finite entries in linear system");

  SolveReport report;
  Eigen::PartialPivLU<Matrix> lu(a);
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  const double inv_norm1 = estimate_inverse_norm1(a, lu);
  report.condition = norm1 * inv_norm1;

  if (std::isfinite(report.condition) && report.condition <= kConditionFallback) {
    Matrix x = lu.solve(b);
    // Two steps of iterative refinement keep nodal collocation residuals at
    // the data scale rather than cond * eps.
    for (int it = 0; it < 2; ++it) x += lu.solve(b - a * x);
    if (x.allFinite()) {
      report.method = SolveMethod::lu_partial_pivot;
      report.solution = std::move(x);
      report.residual_norm = residual_inf(a, report.solution, b);
      return report;
    }
  }

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  report.method = SolveMethod::truncated_svd;
  report.solution = truncated_svd_solve(svd, b);
  if (!report.solution.allFinite()) throw NumericalError("singular system");
  report.residual_norm = residual_inf(a, report.solution, b);
  return report;
}

DenseFactorization::DenseFactorization(Matrix a) : a_(std::move(a)), lu_(a_) {
  const double norm1 = a_.cwiseAbs().colwise().sum().maxCoeff();
  condition_ = norm1 * estimate_inverse_norm1(a_, lu_);
  if (!std::isfinite(condition_) || condition_ > kConditionFallback) {
    method_ = SolveMethod::truncated_svd;
    svd_.compute(a_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  }
}

Vector DenseFactorization::solve(const Vector& b) const {
  if (method_ == SolveMethod::truncated_svd) return truncated_svd_solve(svd_, b);
  Vector x = lu_.solve(b);
  for (int it = 0; it < 2; ++it) x += lu_.solve(b - a_ * x);
  return x;
}

double symmetry_defect(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("matrix must be square");
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

double centrosymmetry_defect(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("matrix must be square");
  return (a - a.reverse()).cwiseAbs().maxCoeff();
}

SolveReport centrosymmetric_split_solve(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols()) throw ValidationError("matrix must be square");
  const Eigen::Index n = a.rows();
  const double norm_inf = a.cwiseAbs().rowwise().sum().maxCoeff();
  if (centrosymmetry_defect(a) > 1e-10 * norm_inf)
    throw NumericalError("not centrosymmetric");

  const Eigen::Index m = n / 2;
  // A = [[P, Q], [JQJ, JPJ]]; with y2 = J x2 the system decouples into
  // (P + QJ)(x1 + y2) = b1 + J b2 and (P - QJ)(x1 - y2) = b1 - J b2.
  Matrix p = a.topLeftCorner(m, m);
  Matrix qj = a.topRightCorner(m, m).rowwise().reverse();
  Vector b1 = b.head(m);
  Vector c2 = b.tail(m).reverse();

  SolveReport report;
  Vector x(n);
  if (n % 2 == 0) {
    SolveReport sum = solve_dense(p + qj, b1 + c2);
    SolveReport diff = solve_dense(p - qj, b1 - c2);
    Vector s = sum.solution.col(0), d = diff.solution.col(0);
    x.head(m) = 0.5 * (s + d);
    x.tail(m) = (0.5 * (s - d)).reverse();
    report.condition = std::max(sum.condition, diff.condition);
    report.method = sum.method;
  } else {
    // Bordered reduction: center row/column handled with the symmetric half.
    Vector u = a.col(m).head(m);
    Vector v = a.row(m).head(m);
    const double alpha = a(m, m);
    Matrix sym(m + 1, m + 1);
    sym.topLeftCorner(m, m) = p + qj;
    sym.topRightCorner(m, 1) = 2.0 * u;
    sym.bottomLeftCorner(1, m) = v.transpose();
    sym(m, m) = alpha;
    Vector rhs(m + 1);
    rhs.head(m) = b1 + c2;
    rhs[m] = b[m];
    SolveReport sum = solve_dense(sym, rhs);
    SolveReport diff = solve_dense(p - qj, b1 - c2);
    Vector s = sum.solution.col(0).head(m), d = diff.solution.col(0);
    x.head(m) = 0.5 * (s + d);
    x[m] = sum.solution(m, 0);
    x.tail(m) = (0.5 * (s - d)).reverse();
    report.condition = std::max(sum.condition, diff.condition);
    report.method = sum.method;
  }
  report.solution = x;
  report.residual_norm = (a * x - b).cwiseAbs().maxCoeff();
  return report;
}

BlockSparseSystem::BlockSparseSystem(int rows, int cols, std::vector<Block> blocks)
    : rows_(rows), cols_(cols), blocks_(std::move(blocks)) {
  for (const auto& blk : blocks_) {
    if (blk.row < 0 || blk.col < 0 || blk.row + blk.values.rows() > rows_ ||
        blk.col + blk.values.cols() > cols_)
      throw ValidationError("block range out of bounds");
  }
}

namespace {

Eigen::SparseMatrix<double> to_sparse(int rows, int cols,
                                      const std::vector<Block>& blocks) {
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& blk : blocks)
    for (Eigen::Index i = 0; i < blk.values.rows(); ++i)
      for (Eigen::Index j = 0; j < blk.values.cols(); ++j)
        if (blk.values(i, j) != 0.0)
          trip.emplace_back(blk.row + i, blk.col + j, blk.values(i, j));
  Eigen::SparseMatrix<double> s(rows, cols);
  s.setFromTriplets(trip.begin(), trip.end());
  s.prune(0.0);
  return s;
}

}  // namespace

int BlockSparseSystem::nonzeros() const {
  return static_cast<int>(to_sparse(rows_, cols_, blocks_).nonZeros());
}

Matrix BlockSparseSystem::densified() const {
  Matrix a = Matrix::Zero(rows_, cols_);
  for (const auto& blk : blocks_)
    a.block(blk.row, blk.col, blk.values.rows(), blk.values.cols()) += blk.values;
  return a;
}

BlockSparseSystem assemble_block_sparse(int rows, int cols,
                                        std::vector<Block> blocks) {
  return BlockSparseSystem(rows, cols, std::move(blocks));
}

SolveReport solve_block_sparse(const BlockSparseSystem& system, const Vector& b) {
  if (system.rows_ != system.cols_) throw ValidationError("matrix must be square");
  if (b.size() != system.rows_) throw ValidationError("rhs row count mismatch");
  Eigen::SparseMatrix<double> a = to_sparse(system.rows_, system.cols_,
                                            system.blocks_);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) throw NumericalError("singular system");
  Vector x = lu.solve(b);
  x += lu.solve(b - a * x);
  if (!x.allFinite()) throw NumericalError("singular system");

  SolveReport report;
  report.method = SolveMethod::lu_partial_pivot;
  report.solution = x;
  report.residual_norm = (a * x - b).cwiseAbs().maxCoeff();
  // 1-norm condition estimate via a factorization of the transpose.
  Eigen::SparseMatrix<double> at = a.transpose();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lut;
  lut.analyzePattern(at);
  lut.factorize(at);
  const Eigen::Index n = a.rows();
  Vector xe = Vector::Constant(n, 1.0 / double(n));
  double est = 0.0;
  for (int it = 0; it < 5 && lut.info() == Eigen::Success; ++it) {
    Vector y = lu.solve(xe);
    est = y.lpNorm<1>();
    Vector xi(n);
    for (Eigen::Index i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    Vector z = lut.solve(xi);
    Eigen::Index j;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(xe)) break;
    xe.setZero();
    xe[j] = 1.0;
  }
  double norm1 = 0.0;
  for (int j = 0; j < a.cols(); ++j) {
    double colsum = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, j); it; ++it)
      colsum += std::abs(it.value());
    norm1 = std::max(norm1, colsum);
  }
  report.condition = norm1 * est;
  return report;
}

}  // namespace rbf
