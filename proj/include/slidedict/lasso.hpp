#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace slidedict {

struct LassoOptions {
  double lambda = 0.1;
  double tol = 1e-7;      // max coordinate change per sweep
  int max_iter = 1000;    // sweeps
  double kkt_tol = 1e-6;  // certificate tolerance checked before stopping
  bool record_objective = false;
};

/// Solution of  min_a ||f - D a||^2 + lambda ||a||_1  (no 1/2 on the quadratic term).
template <typename Scalar>
struct SparseCodeT {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> alpha;
  Scalar lambda = 0;
  Scalar objective = 0;
  int sweeps = 0;
  std::vector<Scalar> objective_history;  // per sweep, when requested
};
using SparseCode = SparseCodeT<double>;

template <typename Scalar>
Scalar soft_threshold(Scalar x, Scalar kappa) {
  const Scalar mag = std::abs(x) - kappa;
  return mag > 0 ? std::copysign(mag, x) : Scalar(0);
}

template <typename DerivedD, typename DerivedF, typename DerivedA>
typename DerivedD::Scalar lasso_objective(const Eigen::MatrixBase<DerivedD>& atoms,
                                          const Eigen::MatrixBase<DerivedF>& target,
                                          const Eigen::MatrixBase<DerivedA>& alpha,
                                          typename DerivedD::Scalar lambda) {
  return (target - atoms * alpha).squaredNorm() + lambda * alpha.template lpNorm<1>();
}

/// Largest violation of the subgradient optimality conditions, in units of the
/// gradient 2 D^T (D a - f). Zero at an exact minimizer.
template <typename DerivedD, typename DerivedF, typename DerivedA>
typename DerivedD::Scalar lasso_kkt_violation(const Eigen::MatrixBase<DerivedD>& atoms,
                                              const Eigen::MatrixBase<DerivedF>& target,
                                              const Eigen::MatrixBase<DerivedA>& alpha,
                                              typename DerivedD::Scalar lambda) {
  using Scalar = typename DerivedD::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grad = 2 * atoms.transpose() * (atoms * alpha - target);
  Scalar worst = 0;
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    if (atoms.col(j).squaredNorm() == 0) continue;  // such coordinates are pinned at zero
    const Scalar v = alpha(j) != 0 ? std::abs(grad(j) + lambda * (alpha(j) > 0 ? 1 : -1))
                                   : std::max(Scalar(0), std::abs(grad(j)) - lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

namespace detail {

// Cyclic coordinate descent on the Gram form: gram = D^T D, corr = D^T f.
template <typename Scalar>
SparseCodeT<Scalar> lasso_cd(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram,
                             const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& corr, Scalar target_sqnorm,
                             const LassoOptions& opts) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index m = corr.size();
  const Scalar lambda = static_cast<Scalar>(opts.lambda);
  const Scalar kappa = lambda / 2;

  SparseCodeT<Scalar> code;
  code.lambda = lambda;
  code.alpha = Vec::Zero(m);
  Vec g_alpha = Vec::Zero(m);  // gram * alpha

  auto objective = [&] {
    return std::max(Scalar(0), target_sqnorm - 2 * corr.dot(code.alpha) + code.alpha.dot(g_alpha)) +
           lambda * code.alpha.template lpNorm<1>();
  };
  auto kkt = [&] {
    Scalar worst = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (gram(j, j) <= 0) continue;
      const Scalar grad = 2 * (g_alpha(j) - corr(j));
      const Scalar a = code.alpha(j);
      const Scalar v = a != 0 ? std::abs(grad + lambda * (a > 0 ? 1 : -1))
                              : std::max(Scalar(0), std::abs(grad) - lambda);
      worst = std::max(worst, v);
    }
    return worst;
  };

  for (int sweep = 0; sweep < opts.max_iter; ++sweep) {
    Scalar max_change = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const Scalar diag = gram(j, j);
      if (diag <= 0) continue;
      const Scalar old = code.alpha(j);
      const Scalar rho = corr(j) - g_alpha(j) + diag * old;
      const Scalar updated = soft_threshold(rho, kappa) / diag;
      const Scalar delta = updated - old;
      if (delta != 0) {
        code.alpha(j) = updated;
        g_alpha.noalias() += delta * gram.col(j);
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    code.sweeps = sweep + 1;
    if (opts.record_objective) code.objective_history.push_back(objective());
    if (max_change < static_cast<Scalar>(opts.tol) && kkt() <= static_cast<Scalar>(opts.kkt_tol) / 2) break;
  }
  return code;
}

}  // namespace detail

/// Lasso over a precomputed Gram matrix. The objective is left at zero; use
/// `solve_lasso` when the dense atoms are at hand.
template <typename Scalar>
SparseCodeT<Scalar> solve_lasso_gram(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& corr,
                                     Scalar target_sqnorm, const LassoOptions& opts) {
  if (!(opts.lambda > 0)) throw std::invalid_argument("lasso: lambda must be > 0");
  if (!gram.allFinite() || !corr.allFinite() || !std::isfinite(target_sqnorm))
    throw std::invalid_argument("lasso: non-finite input");
  return detail::lasso_cd<Scalar>(gram, corr, target_sqnorm, opts);
}

/// Cyclic coordinate descent from alpha = 0 with soft threshold lambda/2.
/// Zero-norm atoms keep a zero coefficient.
template <typename DerivedD, typename DerivedF>
SparseCodeT<typename DerivedD::Scalar> solve_lasso(const Eigen::MatrixBase<DerivedD>& atoms,
                                                   const Eigen::MatrixBase<DerivedF>& target,
                                                   const LassoOptions& opts = {}) {
  using Scalar = typename DerivedD::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (atoms.rows() != target.size()) throw std::invalid_argument("lasso: dimension mismatch");
  if (!atoms.allFinite() || !target.allFinite()) throw std::invalid_argument("lasso: non-finite input");
  const Mat gram = atoms.transpose() * atoms;
  const Vec corr = atoms.transpose() * target;
  auto code = solve_lasso_gram<Scalar>(gram, corr, target.squaredNorm(), opts);
  code.objective = lasso_objective(atoms, target, code.alpha, code.lambda);
  return code;
}

}  // namespace slidedict
