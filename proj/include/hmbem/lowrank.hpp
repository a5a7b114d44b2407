#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hmbem/entry.hpp"

namespace hmbem {

/// Outer-product matrix U * V^T with U of size rows x k and V of size cols x k.
struct RkMatrix {
  Eigen::MatrixXd U;
  Eigen::MatrixXd V;

  Eigen::Index rank() const { return U.cols(); }
  Eigen::Index rows() const { return U.rows(); }
  Eigen::Index cols() const { return V.rows(); }
  Eigen::MatrixXd dense() const { return U * V.transpose(); }
};

struct AcaConfig {
  std::size_t k_max = 32;
  /// Stop once |u_m||v_m| <= rel_tol |u_1||v_1|; 0 runs to k_max.
  double rel_tol = 0.0;
};

/// Pivot sequence chosen by ACA, as positions within the rows/cols arguments.
struct AcaPivots {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

/// Adaptive cross approximation with partial pivoting of ev(rows, cols).
///
/// The residual is never formed. Step m evaluates one residual row at the
/// pivot i_m (row 0 first, then the unused row maximising |u_{m-1}|), takes
/// the column pivot j_m as its largest entry, and builds v_m = r / r(j_m) and
/// u_m from the residual column j_m. A numerically zero residual row moves on
/// to the next unused row; if every row is exhausted the block is reproduced
/// and the factorisation ends early.
RkMatrix aca(const EntryEvaluator& ev, std::span<const std::size_t> rows,
             std::span<const std::size_t> cols, const AcaConfig& cfg, AcaPivots* pivots = nullptr);

/// y = U (V^T x). Throws DimensionError if x.size() != R.cols().
Eigen::VectorXd rk_matvec(const RkMatrix& R, const Eigen::Ref<const Eigen::VectorXd>& x);

/// y += U (V^T x), without size checks.
void rk_matvec_add(const RkMatrix& R, std::span<const double> x, std::span<double> y);

}  // namespace hmbem
