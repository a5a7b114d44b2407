#include "hmbem/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hmbem/errors.hpp"

namespace hmbem {

namespace {

// Residual entries below this multiple of the largest sampled |a_ij| are
// treated as exact zeros.
constexpr double kZeroResidual = 64 * std::numeric_limits<double>::epsilon();

std::size_t first_unused(const std::vector<char>& used) {
  auto it = std::find(used.begin(), used.end(), char{0});
  return static_cast<std::size_t>(it - used.begin());
}

}  // namespace

RkMatrix aca(const EntryEvaluator& ev, std::span<const std::size_t> rows,
             std::span<const std::size_t> cols, const AcaConfig& cfg, AcaPivots* pivots) {
  if (rows.empty() || cols.empty()) throw std::invalid_argument("aca on an empty block");
  if (cfg.k_max == 0) throw std::invalid_argument("aca needs k_max >= 1");

  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto n = static_cast<Eigen::Index>(cols.size());
  const auto cap = static_cast<Eigen::Index>(std::min({cfg.k_max, rows.size(), cols.size()}));

  Eigen::MatrixXd U(m, cap), V(n, cap);
  Eigen::VectorXd r(n), c(m);
  std::vector<char> row_used(rows.size(), 0), col_used(cols.size(), 0);
  if (pivots) *pivots = {};

  double scale = 0.0;
  double first_norm = 0.0;
  Eigen::Index k = 0;
  std::size_t pivot_row = 0;

  while (k < cap) {
    // Find a row whose residual is not (numerically) zero.
    Eigen::Index pivot_col = -1;
    while (pivot_row < rows.size()) {
      row_used[pivot_row] = 1;
      for (Eigen::Index j = 0; j < n; ++j) r(j) = ev.get_matrix_entry(rows[pivot_row], cols[j]);
      scale = std::max(scale, r.cwiseAbs().maxCoeff());
      if (k > 0) r.noalias() -= V.leftCols(k) * U.row(static_cast<Eigen::Index>(pivot_row)).head(k).transpose();

      double best = -1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!col_used[j] && std::abs(r(j)) > best) best = std::abs(r(j)), pivot_col = j;
      }
      if (best > kZeroResidual * scale) break;
      pivot_col = -1;
      pivot_row = first_unused(row_used);
    }
    if (pivot_col < 0) break;  // every row reproduced exactly

    col_used[pivot_col] = 1;
    V.col(k) = r / r(pivot_col);
    for (Eigen::Index i = 0; i < m; ++i) c(i) = ev.get_matrix_entry(rows[i], cols[pivot_col]);
    scale = std::max(scale, c.cwiseAbs().maxCoeff());
    if (k > 0) c.noalias() -= U.leftCols(k) * V.row(pivot_col).head(k).transpose();
    U.col(k) = c;
    if (pivots) {
      pivots->rows.push_back(pivot_row);
      pivots->cols.push_back(static_cast<std::size_t>(pivot_col));
    }

    const double step_norm = U.col(k).norm() * V.col(k).norm();
    ++k;
    if (k == 1) first_norm = step_norm;
    if (cfg.rel_tol > 0.0 && step_norm <= cfg.rel_tol * first_norm) break;

    // Next row pivot: largest entry of the new column among unused rows.
    double best = -1.0;
    std::size_t next = rows.size();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!row_used[i] && std::abs(c(i)) > best) best = std::abs(c(i)), next = static_cast<std::size_t>(i);
    }
    pivot_row = next;
  }

  return RkMatrix{U.leftCols(k), V.leftCols(k)};
}

Eigen::VectorXd rk_matvec(const RkMatrix& R, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != R.cols()) throw DimensionError("rk_matvec: vector length does not match the column count");
  if (R.rank() == 0) return Eigen::VectorXd::Zero(R.rows());
  return R.U * (R.V.transpose() * x);
}

void rk_matvec_add(const RkMatrix& R, std::span<const double> x, std::span<double> y) {
  if (R.rank() == 0) return;
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  const Eigen::VectorXd t = R.V.transpose() * xv;
  yv.noalias() += R.U * t;
}

}  // namespace hmbem
