#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "longwave/errors.hpp"

namespace longwave {

enum class ModelKind { Arfima0d0, Mfbm };

// Ground truth for simulators and test oracles: memory parameters d, long-run
// magnitude Omega, phase Phi (antisymmetric), short-range regularity exponent
// beta (documentation only).
struct ModelSpec {
  Eigen::VectorXd d;
  Eigen::MatrixXd Omega;
  Eigen::MatrixXd Phi;
  double beta = 1.0;
  ModelKind kind = ModelKind::Arfima0d0;
};

// Parameters of multivariate fractional Brownian motion: per-channel scales
// sigma, symmetric cross-correlation coefficients r (unit diagonal),
// antisymmetric asymmetry coefficients eta, and d in (0.5, 1.5) per channel
// (self-similarity index H = d - 1/2).
struct MfbmParams {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd r;
  Eigen::MatrixXd eta;
  Eigen::VectorXd d;

  void validate() const;
};

// Fractionally integrated noise: X_l = (1-B)^{-d_l} u_l with u ~ iid N(0, Sigma),
// realized by a truncated MA filter of length 4N with a 4N-sample burn-in;
// memory parameters >= 0.5 are handled by integer integration of a stationary
// fractional series (integer part floor(d + 1/2)). Bit-reproducible given seed.
Eigen::MatrixXd sim_arfima0d0(long N, const Eigen::VectorXd& d, const Eigen::MatrixXd& Sigma,
                              std::uint64_t seed);

// Closed-form long-run magnitude and phase implied by mFBM parameters:
// Omega_lm = sigma_l sigma_m Gamma(d_l+d_m) sqrt(r^2 cos^2(pi s/2) + eta^2 sin^2(pi s/2)),
// Phi_lm = atan(eta/r * tan(pi s/2)), with the s = d_l+d_m = 2 limit branch.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> mfbm_theta(const MfbmParams& params);

// Spectral synthesis of mFBM: Hermitian square root of the folded increment
// spectral matrix on the Fourier grid, complex Gaussian coefficients, inverse
// FFT, cumulative sum. N must be a power of two >= 256.
Eigen::MatrixXd sim_mfbm(long N, const MfbmParams& params, std::uint64_t seed);

}  // namespace longwave
