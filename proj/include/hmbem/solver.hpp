#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>

#include <Eigen/Dense>

namespace hmbem {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct CgConfig {
  double rel_residual_tol = 1e-8;
  /// 0 selects ceil(10 sqrt(N)), clamped to [20, kMaxIterationCap].
  std::size_t max_iters = 0;
  /// When set, receives one "iter,rel_residual,seconds" line per iteration.
  std::ostream* log = nullptr;

  static constexpr std::size_t kMaxIterationCap = 100000;
};

struct CgResult {
  Eigen::VectorXd alpha;
  std::size_t iters = 0;
  double final_rel_residual = 0.0;
  bool converged = false;
  double per_iter_seconds = 0.0;
};

/// Unpreconditioned conjugate gradients from a zero initial guess. Throws
/// BreakdownError if p^T A p <= 0; running out of iterations is reported
/// through CgResult::converged.
CgResult cg_solve(const LinearOperator& apply_A, const Eigen::VectorXd& f, const CgConfig& cfg = {});

}  // namespace hmbem
