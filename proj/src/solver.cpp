#include "hmbem/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "hmbem/errors.hpp"

namespace hmbem {

CgResult cg_solve(const LinearOperator& apply_A, const Eigen::VectorXd& f, const CgConfig& cfg) {
  if (!(cfg.rel_residual_tol > 0.0)) throw std::invalid_argument("CG tolerance must be positive");
  if (!f.allFinite()) throw std::invalid_argument("CG right-hand side is not finite");

  const auto n = static_cast<double>(f.size());
  const std::size_t max_iters =
      cfg.max_iters ? cfg.max_iters
                    : std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(10.0 * std::sqrt(n))), 20,
                                              CgConfig::kMaxIterationCap);

  CgResult res;
  res.alpha = Eigen::VectorXd::Zero(f.size());
  const double f_norm = f.norm();
  if (f_norm == 0.0) {
    res.converged = true;
    return res;
  }

  Eigen::VectorXd r = f, p = f;
  double rr = r.squaredNorm();
  res.final_rel_residual = 1.0;
  const auto start = std::chrono::steady_clock::now();
  auto last = start;

  while (res.iters < max_iters) {
    const Eigen::VectorXd Ap = apply_A(p);
    if (Ap.size() != f.size()) throw DimensionError("operator returned a vector of the wrong length");
    const double curvature = p.dot(Ap);
    if (!(curvature > 0.0)) throw BreakdownError("CG breakdown: p^T A p <= 0, operator is not positive definite");

    const double step = rr / curvature;
    res.alpha += step * p;
    r -= step * Ap;
    const double rr_next = r.squaredNorm();
    ++res.iters;
    res.final_rel_residual = std::sqrt(rr_next) / f_norm;

    if (cfg.log) {
      const auto now = std::chrono::steady_clock::now();
      *cfg.log << res.iters << ',' << res.final_rel_residual << ','
               << std::chrono::duration<double>(now - last).count() << '\n';
      last = now;
    }
    if (res.final_rel_residual <= cfg.rel_residual_tol) {
      res.converged = true;
      break;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  if (res.iters > 0) {
    res.per_iter_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / static_cast<double>(res.iters);
  }
  return res;
}

}  // namespace hmbem
