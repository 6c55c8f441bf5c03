#include "longwave/scalogram.hpp"

#include <cmath>

namespace longwave {

Scalogram scalogram(const WaveletPyramid& pyr, bool centered) {
  bool any = false;
  for (long nj : pyr.n) any = any || nj > 0;
  if (!any) throw EmptyPyramid("scalogram requires at least one non-empty scale");

  Scalogram sc;
  sc.centered = centered;
  sc.p = pyr.p;
  sc.n = pyr.n;
  sc.I.resize(pyr.W.size());
  for (std::size_t s = 0; s < pyr.W.size(); ++s) {
    const Eigen::MatrixXcd& W = pyr.W[s];
    const long nj = W.rows();
    if (nj == 0) {
      sc.I[s] = Eigen::MatrixXcd::Zero(pyr.p, pyr.p);
      continue;
    }
    if (centered) {
      Eigen::MatrixXcd Wc = W.rowwise() - W.colwise().mean();
      sc.I[s] = (Wc.transpose() * Wc.conjugate()) / static_cast<double>(nj);
    } else {
      sc.I[s] = W.transpose() * W.conjugate();
    }
    // Enforce exact Hermitian symmetry against rounding.
    sc.I[s] = 0.5 * (sc.I[s] + sc.I[s].adjoint()).eval();
  }
  return sc;
}

Eigen::MatrixXcd wavelet_correlation(const Scalogram& sc, int j) {
  if (j < 1 || j > static_cast<int>(sc.I.size())) throw UserError("wavelet_correlation: bad scale");
  const Eigen::MatrixXcd& I = sc.I[j - 1];
  const int p = sc.p;
  Eigen::MatrixXcd C(p, p);
  for (int l = 0; l < p; ++l) {
    if (!(I(l, l).real() > 0.0)) {
      throw DegenerateScale("wavelet_correlation: non-positive diagonal at scale " +
                            std::to_string(j));
    }
  }
  for (int l = 0; l < p; ++l) {
    for (int m = 0; m < p; ++m) {
      C(l, m) = I(l, m) / std::sqrt(I(l, l).real() * I(m, m).real());
    }
    C(l, l) = cplx{1.0, 0.0};
  }
  return C;
}

}  // namespace longwave
