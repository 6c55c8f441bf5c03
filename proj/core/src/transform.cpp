#include "longwave/transform.hpp"

#include <algorithm>
#include <cmath>

namespace longwave {

long n_coeffs(long N, int j, int T) {
  if (j < 1) throw UserError("n_coeffs requires j >= 1");
  long v = N;
  for (int i = 0; i < j; ++i) {
    v = std::max(0L, (v - T + 1) / 2);
  }
  return v;
}

namespace {

// One analysis stage under the correlation convention
// out[k] = sum_m taps[m] * in[2k + m]. Only coefficients whose full window
// lies inside the input are produced; boundary positions that would touch
// unobserved samples are dropped.
std::vector<double> stage(const std::vector<double>& in, const std::vector<double>& taps) {
  const long n = static_cast<long>(in.size());
  const long T = static_cast<long>(taps.size());
  const long out_len = std::max(0L, (n - T + 1) / 2);
  std::vector<double> out(out_len, 0.0);
  for (long k = 0; k < out_len; ++k) {
    double acc = 0.0;
    const long base = 2 * k;
    for (long m = 0; m < T; ++m) acc += taps[m] * in[base + m];
    out[k] = acc;
  }
  return out;
}

}  // namespace

WaveletPyramid pyramid(const Eigen::MatrixXd& X, const ComplexFilterBank& bank, int j_max) {
  const long N = X.rows();
  const int p = static_cast<int>(X.cols());
  const int T = bank.support_length;
  if (N <= T) throw InputTooShort("pyramid requires more samples than the filter support");
  if (j_max < 1 || (1L << j_max) > N) {
    throw UserError("pyramid requires 1 <= j_max <= log2(N)");
  }
  if (!X.allFinite()) throw NonFiniteInput("pyramid input contains non-finite values");

  // Causal high-pass taps: the stored [2-T, 1] support read from index 0.
  const std::vector<double>& hH = bank.hH.taps;
  const std::vector<double>& gH = bank.gH.taps;

  WaveletPyramid pyr;
  pyr.N = N;
  pyr.p = p;
  pyr.j_max = j_max;
  pyr.T = T;
  pyr.W.resize(j_max);
  pyr.n.resize(j_max);

  std::vector<std::vector<double>> ah(p), ag(p);
  for (int c = 0; c < p; ++c) {
    ah[c].assign(X.col(c).data(), X.col(c).data() + N);
    ag[c] = ah[c];
  }

  for (int j = 1; j <= j_max; ++j) {
    const long nj = n_coeffs(N, j, T);
    Eigen::MatrixXcd W(nj, p);
    for (int c = 0; c < p; ++c) {
      const std::vector<double> wh = stage(ah[c], hH);
      const std::vector<double> wg = stage(ag[c], gH);
      for (long k = 0; k < nj; ++k) W(k, c) = cplx{wh[k], wg[k]};
      ah[c] = stage(ah[c], bank.hL.taps);
      ag[c] = stage(ag[c], bank.gL.taps);
    }
    pyr.W[j - 1] = std::move(W);
    pyr.n[j - 1] = nj;
  }
  return pyr;
}

}  // namespace longwave
