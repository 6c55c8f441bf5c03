#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "longwave/scalogram.hpp"

namespace longwave {

struct WhittleConfig {
  int j0 = 4;
  int j1 = -1;  // -1: auto = largest j with n_j >= 4
  int M = 4;
  int L = 4;
  FilterVariant variant = FilterVariant::CfwC;
  double d_min = -0.4;
  double d_max = 3.0;  // clamped to M - 0.6 at estimation time
  double simplex_tol = 1e-8;
  int max_iter = 4000;
  int grid_points = 200;  // univariate initialization grid
};

struct WhittleFit {
  Eigen::VectorXd d_hat;
  Eigen::MatrixXcd G_hat;       // Hermitian wavelet variance matrix at d_hat
  Eigen::MatrixXcd Theta_hat;   // long-run covariance (magnitude * e^{i phase})
  Eigen::MatrixXd Omega_hat;    // |Theta_hat|
  Eigen::MatrixXd Phi_hat;      // arg(Theta_hat), antisymmetric, zero diagonal
  Eigen::MatrixXd rho_hat;      // Omega-normalized correlations, unit diagonal
  double criterion = 0.0;       // R(d_hat)
  int iterations = 0;
  bool converged = false;
  long n = 0;                   // total coefficient count over [j0, j1]
  std::vector<long> n_j;        // per-scale counts over [j0, j1]
  int j0 = 0, j1 = 0;
};

// Wavelet normalization constant: 4 * integral_0^inf lambda^{-delta} |psi_h(lambda)|^2 dlambda,
// by adaptive quadrature (relative error < 1e-8). Defined for 1-2M < delta < 2M+1;
// throws DomainError outside that strip.
double K(double delta, const ComplexFilterBank& bank);

// Memoizing wrapper around K. Entries are keyed by delta only, so a cache
// instance must not be shared between different filter banks.
class KCache {
public:
  double operator()(double delta, const ComplexFilterBank& bank);

private:
  std::map<long long, double> cache_;
};

// Closed-form profile optimum of the likelihood for fixed d:
// (1/n) sum_j diag(2^{-j d}) I(j) diag(2^{-j d}) over scales j0..j1.
Eigen::MatrixXcd G_hat(const Scalogram& sc, const Eigen::VectorXd& d, int j0, int j1);

// Reduced criterion: logdet G_hat(d) + 2 log(2) * ((1/n) sum_j j*n_j) * sum_l d_l.
// Returns +infinity when G_hat(d) is numerically singular.
double R(const Eigen::VectorXd& d, const Scalogram& sc, int j0, int j1);

// Full estimation pipeline: pyramid -> scalogram -> minimize R (Nelder-Mead on
// a logistic reparameterization of the (d_min, d_max) box, started at
// per-channel univariate grid minimizers) -> recover Theta, Omega, Phi, rho.
WhittleFit estimate(const Eigen::MatrixXd& X, const WhittleConfig& cfg);

// The divisor applied to G_hat entries to recover Theta entries; depends on the
// bank (quasi-analytic two-tree banks vs the real comparison bank).
double theta_normalization(double delta, const ComplexFilterBank& bank, KCache& cache);

}  // namespace longwave
