#pragma once

#include <Eigen/Dense>
#include <memory>

#include "longwave/whittle.hpp"

namespace longwave {

// Asymptotic covariance matrices for the estimator in the "all scales"
// (j1 - j0 -> infinity) regime: Vd is the limiting variance of
// sqrt(n)(d_hat - d), VG of vec(sqrt(n)(G_hat - G)) (column-major vec).
struct AsymptoticVariance {
  Eigen::MatrixXd Vd;
  Eigen::MatrixXcd VG;
  int u_max = 0;
  int t_max = 0;
  double tail_estimate = 0.0;  // relative size of the last cross-scale term
};

// Cross-scale spectral kernel between coefficients at a scale and the block of
// coefficients u scales coarser:
// sum_{tau=0}^{2^u-1} sum_{|t|<=t_max} |l+2tpi|^{-delta} conj(psi(l+2tpi))
//   2^{u/2} psi(2^u (l+2tpi)) e^{-i 2^u tau (l+2tpi)}.
cplx D_u(double lambda, double delta, int u, int t_max, const ComplexFilterBank& bank);

// Normalized cross-scale inner product:
// (2 pi / (K(delta1) K(delta2))) * integral_{-pi}^{pi} conj(D_u(.;delta1)) D_u(.;delta2).
cplx I_tilde(int u, double delta1, double delta2, const ComplexFilterBank& bank);

// Variance of sqrt(n)(d_hat - d) at (G0, d0); callers pass estimates for
// plug-in standard errors. Throws SeriesNotConverged if the u-series tail
// estimate exceeds 1e-6.
Eigen::MatrixXd variance_d_inf(const Eigen::MatrixXcd& G0, const Eigen::VectorXd& d0, int u_max,
                               const ComplexFilterBank& bank);

// Variance of vec(sqrt(n)(G_hat - G0)) (p^2 x p^2, column-major vec ordering).
Eigen::MatrixXcd variance_G_inf(const Eigen::MatrixXcd& G0, const Eigen::VectorXd& d0, int u_max,
                                const ComplexFilterBank& bank);

// Stateful variant: the wavelet-transform evaluation grids are the dominant
// cost and do not depend on (G0, d0), so repeated plug-in calls (one per
// Monte-Carlo replication, say) should share one calculator instance.
// Not thread-safe; use one instance per thread.
class AsymptoticCalculator {
public:
  explicit AsymptoticCalculator(const ComplexFilterBank& bank, int t_max = 16);
  ~AsymptoticCalculator();
  AsymptoticCalculator(const AsymptoticCalculator&) = delete;
  AsymptoticCalculator& operator=(const AsymptoticCalculator&) = delete;

  Eigen::MatrixXd variance_d_inf(const Eigen::MatrixXcd& G0, const Eigen::VectorXd& d0,
                                 int u_max);
  Eigen::MatrixXcd variance_G_inf(const Eigen::MatrixXcd& G0, const Eigen::VectorXd& d0,
                                  int u_max);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace longwave
