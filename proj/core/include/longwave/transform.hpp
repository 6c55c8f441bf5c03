#pragma once

#include <Eigen/Dense>
#include <vector>

#include "longwave/filters.hpp"

namespace longwave {

// Complex wavelet coefficients of a multichannel series, one matrix per scale.
// Scale j holds an n_j x p complex matrix; W = W_h + i*W_g combines the two
// real filter-bank cascades. Only coefficients computed entirely from observed
// samples are retained: each cascade stage keeps floor((n - T + 1)/2) outputs,
// dropping boundary positions that would touch unobserved samples.
struct WaveletPyramid {
  std::vector<Eigen::MatrixXcd> W;  // W[j-1] is the scale-j matrix
  std::vector<long> n;              // n[j-1] = rows of W[j-1]
  long N = 0;
  int p = 0;
  int j_max = 0;
  int T = 0;  // filter support length used
};

// Number of fully-supported scale-j coefficients: j-fold iterate of
// n -> max(0, floor((n - T + 1)/2)) starting from N.
long n_coeffs(long N, int j, int T);

// Dual-tree cascade: per channel, a low-pass recursion with hL (resp. gL) and
// detail extraction with the causal high-pass taps; standard dyadic
// downsampling keeping even-indexed outputs. The fixed alignment (causal
// filters, delay T-2 on the high-pass) is immaterial to the estimators, which
// use per-scale second moments only.
WaveletPyramid pyramid(const Eigen::MatrixXd& X, const ComplexFilterBank& bank, int j_max);

}  // namespace longwave
