#pragma once

#include <Eigen/Dense>
#include <vector>

#include "longwave/transform.hpp"

namespace longwave {

// Per-scale Hermitian second-moment matrices of the complex wavelet
// coefficients. Uncentered: I(j) = sum_k W_{j,k} W_{j,k}^H (the statistic the
// likelihood criterion consumes). Centered: per-scale means are subtracted and
// the sum is divided by n_j (per-coefficient covariance, for diagnostics).
struct Scalogram {
  std::vector<Eigen::MatrixXcd> I;  // I[j-1] is the scale-j matrix (p x p)
  std::vector<long> n;
  bool centered = false;
  int p = 0;
};

Scalogram scalogram(const WaveletPyramid& pyr, bool centered);

// Entrywise correlation at scale j: I_lm / sqrt(I_ll * I_mm).
// Throws DegenerateScale if a diagonal entry is not positive.
Eigen::MatrixXcd wavelet_correlation(const Scalogram& sc, int j);

}  // namespace longwave
