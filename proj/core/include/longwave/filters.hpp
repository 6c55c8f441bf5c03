#pragma once

#include <complex>
#include <vector>

#include "longwave/errors.hpp"

namespace longwave {

using cplx = std::complex<double>;

enum class FilterVariant { CfwC, CfwPr, Daubechies };

// A real FIR filter with an explicit (possibly negative) support offset:
// frequency response  sum_n taps[n] * exp(-i*lambda*(offset+n)).
struct Fir {
  std::vector<double> taps;
  int offset = 0;

  cplx freq(double lambda) const;
};

// The two low-pass/high-pass pairs of a dual-tree complex filter bank.
// High-pass filters satisfy b^(H)(lambda) = conj(b^(L)(lambda+pi)) * e^{-i*lambda}
// and are stored on their natural support [2-T, 1]; because that support has
// exactly T taps, `hH.taps` read with offset 0 is the causal (delay T-2) version
// used by the pyramid cascade.
struct ComplexFilterBank {
  int M = 0;  // vanishing moments
  int L = 0;  // analyticity degree
  FilterVariant variant = FilterVariant::CfwC;
  Fir hL, hH, gL, gH;
  int support_length = 0;  // T: M+L+1 (common-factor, q=1) or 2(M+L) (perfect reconstruction)
};

// Common factor d_L in the quasi-analytic construction:
// e^{i*lambda*(-L/2+1/4)} * [cos(lambda/4)^{2L+1} + i*(-1)^{L+1} sin(lambda/4)^{2L+1}].
// Modulus is at most 1.
cplx d_hat_L(double lambda, int L);

// Quasi-analytic bank with trivial common multiplier (q = 1); support M+L+1.
// Taps are extracted by inverse DFT of the closed-form frequency responses on a
// power-of-two grid; throws NumericalResidual if off-support energy exceeds 1e-10.
ComplexFilterBank build_cfw_c(int M, int L);

// Perfect-reconstruction variant: the squared common multiplier |q|^2 solves a
// Bezout identity in cos(lambda), and q is extracted by minimum-phase root
// splitting; support 2(M+L). Throws FactorizationFailed on residual > 1e-8.
// Document: intended for M+L <= 12 (root finding stability).
ComplexFilterBank build_cfw_pr(int M, int L);

// Real comparison bank: both trees carry the same orthonormal Daubechies filters
// with M vanishing moments (M in {2, 4}). Phase information is not identifiable
// with a real bank; it exists for speed/benchmark comparisons and real-filter
// memory estimation.
ComplexFilterBank build_daubechies(int M);

struct PsiParts {
  cplx h;    // real-tree wavelet transform value
  cplx g;    // imaginary-tree wavelet transform value
  cplx psi;  // h + i*g, the quasi-analytic combination
};

// Frequency-domain wavelet evaluated through the truncated infinite products
// (truncation at max(30, ceil(log2|lambda|)+30) factors, relative error < 1e-12).
// Normalization: |psi_h| -> 2^{-1/2} * product form, i.e. phi_h(0) = 2^{-1/2}.
PsiParts psi_hat_parts(double lambda, const ComplexFilterBank& bank);

// Scaling-function transforms for each tree and their complex combination
// phi_h + i*phi_g (phi(0) = 2^{-1/2} * (1+i)).
cplx phi_hat_h(double lambda, const ComplexFilterBank& bank);
cplx phi_hat_g(double lambda, const ComplexFilterBank& bank);
cplx phi_hat(double lambda, const ComplexFilterBank& bank);

// |psi(lambda) - 2*1_{lambda>0}*psi_h(lambda)| / |psi_h(lambda)|: how far the
// complex combination is from a perfectly analytic (one-sided) transform.
// Throws DegenerateDenominator when |psi_h(lambda)| < 1e-14.
double analyticity_defect(double lambda, const ComplexFilterBank& bank);

// Explicit envelope bounding the defect, decreasing in L:
// 2*sqrt(2) * (log2(max(4pi,|l|)/(2pi)) + 2) * (1 - dist(l, 4pi*Z)/max(4pi,|l|))^{2L+1}.
double analyticity_bound(double lambda, int L);

// Scale-j analysis kernel as a sum over frequency aliases:
// 2^{j/2} * sum_{|k|<=k_max} phi(lambda+2k*pi) * conj(psi(2^j*(lambda+2k*pi))).
cplx tau_hat(int j, double lambda, const ComplexFilterBank& bank, int k_max);

}  // namespace longwave
