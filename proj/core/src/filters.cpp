#include "longwave/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

namespace longwave {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// Number of product factors needed so that the omitted tail of the dyadic
// product differs from 1 by less than ~1e-12 relative.
int product_depth(double lambda) {
  double a = std::abs(lambda);
  int j = 30;
  if (a > 1.0) j = std::max(30, static_cast<int>(std::ceil(std::log2(a))) + 30);
  return j;
}

// Scaling-function transform of one tree in the "unit at zero" normalization:
// prod_{j>=1} lowpass(lambda/2^j)/sqrt(2); equals 1 at lambda = 0.
cplx phi_prod(double lambda, const Fir& lowpass) {
  const int depth = product_depth(lambda);
  cplx out{1.0, 0.0};
  double x = lambda;
  for (int j = 1; j <= depth; ++j) {
    x *= 0.5;
    out *= lowpass.freq(x) / kSqrt2;
  }
  return out;
}

cplx psi_tree(double lambda, const Fir& lowpass, const Fir& highpass) {
  return 0.5 * highpass.freq(0.5 * lambda) * phi_prod(0.5 * lambda, lowpass);
}

// High-pass taps from the quadrature-mirror relation
// b^(H)(lambda) = conj(b^(L)(lambda+pi)) e^{-i lambda}: support becomes [2-T, 1].
Fir qmf_highpass(const Fir& lowpass) {
  const int T = static_cast<int>(lowpass.taps.size());
  Fir hp;
  hp.offset = 2 - T;
  hp.taps.resize(T);
  for (int m = 0; m < T; ++m) {
    const int n = T - 1 - m;
    hp.taps[m] = ((n % 2 == 0) ? 1.0 : -1.0) * lowpass.taps[n];
  }
  return hp;
}

int next_pow2(int x) {
  int n = 1;
  while (n < x) n *= 2;
  return n;
}

// Extract a length-T real FIR from samples of its frequency response on an
// N-point grid: inverse DFT, then keep the contiguous (circular) window of
// maximal energy. Throws NumericalResidual if the off-window or imaginary
// residual mass exceeds `tol` relative to the total energy.
template <typename F>
Fir extract_taps(const F& response, int grid, int T, double tol) {
  std::vector<cplx> x(grid, cplx{0.0, 0.0});
  std::vector<cplx> samples(grid);
  for (int k = 0; k < grid; ++k) samples[k] = response(2.0 * kPi * k / grid);
  for (int n = 0; n < grid; ++n) {
    cplx acc{0.0, 0.0};
    for (int k = 0; k < grid; ++k) {
      const double ang = 2.0 * kPi * k * n / grid;
      acc += samples[k] * cplx{std::cos(ang), std::sin(ang)};
    }
    x[n] = acc / static_cast<double>(grid);
  }

  std::vector<double> energy(grid);
  double total = 0.0;
  for (int n = 0; n < grid; ++n) {
    energy[n] = std::norm(x[n]);
    total += energy[n];
  }

  double best = -1.0;
  int best_start = 0;
  double window = 0.0;
  for (int n = 0; n < T; ++n) window += energy[n];
  for (int s = 0; s < grid; ++s) {
    if (window > best) {
      best = window;
      best_start = s;
    }
    window -= energy[s];
    window += energy[(s + T) % grid];
  }

  Fir out;
  out.taps.resize(T);
  double kept = 0.0;
  for (int m = 0; m < T; ++m) {
    const cplx v = x[(best_start + m) % grid];
    out.taps[m] = v.real();
    kept += v.real() * v.real();
  }
  out.offset = (best_start < grid / 2) ? best_start : best_start - grid;

  const double residual = (total - kept) / total;
  if (!(residual < tol)) {
    throw NumericalResidual("filter tap extraction residual " + std::to_string(residual) +
                            " exceeds tolerance");
  }
  return out;
}

void check_args(int M, int L) {
  if (M < 2) throw UserError("filter construction requires M >= 2");
  if (L < 1) throw UserError("filter construction requires L >= 1");
}

// ((1 + e^{-i lambda})/2)^M
cplx half_band(double lambda, int M) {
  const cplx b = 0.5 * (cplx{1.0, 0.0} + std::polar(1.0, -lambda));
  return std::pow(b, M);
}

ComplexFilterBank build_from_multiplier(int M, int L, FilterVariant variant,
                                        const std::vector<double>& q_taps, int T) {
  auto q_hat = [&](double lam) {
    cplx acc{0.0, 0.0};
    for (std::size_t n = 0; n < q_taps.size(); ++n) acc += q_taps[n] * std::polar(1.0, -lam * n);
    return acc;
  };
  auto hL_hat = [&](double lam) { return kSqrt2 * half_band(lam, M) * q_hat(lam) * d_hat_L(lam, L); };
  auto gL_hat = [&](double lam) {
    return kSqrt2 * half_band(lam, M) * q_hat(lam) * std::conj(d_hat_L(lam, L)) *
           std::polar(1.0, -lam * L);
  };

  const int grid = next_pow2(8 * (M + L + 1));
  ComplexFilterBank bank;
  bank.M = M;
  bank.L = L;
  bank.variant = variant;
  bank.support_length = T;
  bank.hL = extract_taps(hL_hat, grid, T, 1e-10);
  bank.gL = extract_taps(gL_hat, grid, T, 1e-10);
  if (bank.hL.offset != 0 || bank.gL.offset != 0) {
    throw NumericalResidual("low-pass filter support did not start at zero");
  }
  bank.hH = qmf_highpass(bank.hL);
  bank.gH = qmf_highpass(bank.gL);
  return bank;
}

}  // namespace

cplx Fir::freq(double lambda) const {
  cplx acc{0.0, 0.0};
  for (std::size_t n = 0; n < taps.size(); ++n) {
    acc += taps[n] * std::polar(1.0, -lambda * (offset + static_cast<double>(n)));
  }
  return acc;
}

cplx d_hat_L(double lambda, int L) {
  if (L < 1) throw UserError("d_hat_L requires L >= 1");
  const double c = std::cos(lambda / 4.0);
  const double s = std::sin(lambda / 4.0);
  const double sign = (L % 2 == 0) ? -1.0 : 1.0;  // (-1)^{L+1}
  const cplx body{std::pow(c, 2 * L + 1), sign * std::pow(s, 2 * L + 1)};
  return std::polar(1.0, lambda * (-0.5 * L + 0.25)) * body;
}

ComplexFilterBank build_cfw_c(int M, int L) {
  check_args(M, L);
  return build_from_multiplier(M, L, FilterVariant::CfwC, {1.0}, M + L + 1);
}

ComplexFilterBank build_cfw_pr(int M, int L) {
  check_args(M, L);
  if (M + L > 12) throw UserError("perfect-reconstruction construction supports M+L <= 12");

  // Solve for P(cos lambda) = |q(lambda)|^2 of degree M+L-1 from the Bezout
  // identity P(cos l) s(l) + P(cos(l+pi)) s(l+pi) = 1, where
  // s(l) = 2^{-M} (1+cos l)^M |d_L(l)|^2 (so that s(0) = 1 and q(0) = 1).
  const int deg = M + L - 1;
  auto s_of = [&](double lam) {
    const double c4 = std::cos(lam / 4.0), s4 = std::sin(lam / 4.0);
    const double dmag2 = std::pow(c4, 4 * L + 2) + std::pow(s4, 4 * L + 2);
    return std::pow(2.0, -M) * std::pow(1.0 + std::cos(lam), M) * dmag2;
  };
  const int rows = 4 * (deg + 2);
  Eigen::MatrixXd A(rows, deg + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(rows);
  for (int i = 0; i < rows; ++i) {
    const double lam = kPi * i / (rows - 1);
    const double s1 = s_of(lam), s2 = s_of(lam + kPi);
    const double c1 = std::cos(lam), c2 = std::cos(lam + kPi);
    for (int k = 0; k <= deg; ++k) {
      A(i, k) = s1 * std::pow(c1, k) + s2 * std::pow(c2, k);
    }
  }
  Eigen::VectorXd P = A.colPivHouseholderQr().solve(b);

  // Verify the identity on a fine grid.
  auto P_of = [&](double lam) {
    double acc = 0.0;
    const double c = std::cos(lam);
    for (int k = 0; k <= deg; ++k) acc += P[k] * std::pow(c, k);
    return acc;
  };
  for (int i = 0; i < 1024; ++i) {
    const double lam = -kPi + 2.0 * kPi * i / 1024;
    const double resid = std::abs(P_of(lam) * s_of(lam) + P_of(lam + kPi) * s_of(lam + kPi) - 1.0);
    if (!(resid < 1e-8)) {
      throw FactorizationFailed("Bezout residual " + std::to_string(resid) + " exceeds 1e-8");
    }
  }

  // Laurent coefficients of P((z+1/z)/2): c[m+deg], m = -deg..deg.
  std::vector<double> c(2 * deg + 1, 0.0);
  c[deg] = P[0];
  std::vector<double> base{1.0};  // ((z+1/z)/2)^k over z^{-k..k}
  for (int k = 1; k <= deg; ++k) {
    std::vector<double> nb(base.size() + 2, 0.0);
    for (std::size_t i = 0; i < base.size(); ++i) {
      nb[i] += 0.5 * base[i];
      nb[i + 2] += 0.5 * base[i];
    }
    base = nb;
    for (int m = -k; m <= k; ++m) c[deg + m] += P[k] * base[m + k];
  }

  // Roots of z^deg * P -> minimum-phase spectral factor.
  Eigen::VectorXd poly(2 * deg + 1);  // ascending coefficients
  for (int i = 0; i <= 2 * deg; ++i) poly[i] = c[i];
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
  solver.compute(poly);
  const auto& roots = solver.roots();

  std::vector<cplx> keep;
  std::vector<cplx> on_circle;
  for (int i = 0; i < roots.size(); ++i) {
    const cplx r = roots[i];
    const double m = std::abs(r);
    if (m < 1.0 - 1e-9) {
      keep.push_back(r);
    } else if (m <= 1.0 + 1e-9) {
      on_circle.push_back(r);
    }
  }
  if (on_circle.size() % 2 != 0) throw FactorizationFailed("unpaired unit-circle root");
  std::sort(on_circle.begin(), on_circle.end(),
            [](const cplx& a, const cplx& b) { return std::arg(a) < std::arg(b); });
  for (std::size_t i = 0; i < on_circle.size(); i += 2) keep.push_back(on_circle[i]);
  if (static_cast<int>(keep.size()) != deg) {
    throw FactorizationFailed("spectral factorization kept " + std::to_string(keep.size()) +
                              " roots, expected " + std::to_string(deg));
  }

  std::vector<cplx> qc{1.0};
  for (const cplx& r : keep) {
    std::vector<cplx> nq(qc.size() + 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < qc.size(); ++i) {
      nq[i] -= r * qc[i];
      nq[i + 1] += qc[i];
    }
    qc = nq;
  }
  std::vector<double> q(qc.size());
  double qsum = 0.0;
  for (std::size_t i = 0; i < qc.size(); ++i) {
    q[i] = qc[i].real();
    qsum += q[i];
  }
  // Normalize so q(0) = sqrt(P(1)) = 1.
  const double scale = std::sqrt(std::max(P_of(0.0), 0.0)) / qsum;
  for (double& v : q) v *= scale;

  // Verify |q(lambda)|^2 matches P.
  for (int i = 0; i < 512; ++i) {
    const double lam = -kPi + 2.0 * kPi * i / 512;
    cplx qh{0.0, 0.0};
    for (std::size_t n = 0; n < q.size(); ++n) qh += q[n] * std::polar(1.0, -lam * n);
    if (!(std::abs(std::norm(qh) - P_of(lam)) < 1e-8)) {
      throw FactorizationFailed("minimum-phase factor does not reproduce |q|^2");
    }
  }

  return build_from_multiplier(M, L, FilterVariant::CfwPr, q, 2 * (M + L));
}

ComplexFilterBank build_daubechies(int M) {
  static const std::vector<double> db2{
      0.48296291314453414, 0.8365163037378079, 0.22414386804201339, -0.12940952255126037};
  static const std::vector<double> db4{
      0.23037781330889650, 0.71484657055291564, 0.63088076792985890, -0.02798376941685985,
      -0.18703481171909309, 0.03084138183556076, 0.03288301166688520, -0.01059740178506903};
  ComplexFilterBank bank;
  bank.M = M;
  bank.L = 0;
  bank.variant = FilterVariant::Daubechies;
  if (M == 2) {
    bank.hL.taps = db2;
  } else if (M == 4) {
    bank.hL.taps = db4;
  } else {
    throw UserError("Daubechies comparison bank supports M in {2, 4}");
  }
  bank.hL.offset = 0;
  bank.support_length = static_cast<int>(bank.hL.taps.size());
  bank.hH = qmf_highpass(bank.hL);
  bank.gL = bank.hL;
  bank.gH = bank.hH;
  return bank;
}

PsiParts psi_hat_parts(double lambda, const ComplexFilterBank& bank) {
  PsiParts out;
  out.h = psi_tree(lambda, bank.hL, bank.hH);
  out.g = psi_tree(lambda, bank.gL, bank.gH);
  out.psi = out.h + cplx{0.0, 1.0} * out.g;
  return out;
}

cplx phi_hat_h(double lambda, const ComplexFilterBank& bank) {
  return phi_prod(lambda, bank.hL) / kSqrt2;
}

cplx phi_hat_g(double lambda, const ComplexFilterBank& bank) {
  return phi_prod(lambda, bank.gL) / kSqrt2;
}

cplx phi_hat(double lambda, const ComplexFilterBank& bank) {
  return phi_hat_h(lambda, bank) + cplx{0.0, 1.0} * phi_hat_g(lambda, bank);
}

double analyticity_defect(double lambda, const ComplexFilterBank& bank) {
  const PsiParts p = psi_hat_parts(lambda, bank);
  const double denom = std::abs(p.h);
  if (denom < 1e-14) throw DegenerateDenominator("analyticity defect: |psi_h| < 1e-14");
  const cplx target = (lambda > 0.0) ? 2.0 * p.h : cplx{0.0, 0.0};
  return std::abs(p.psi - target) / denom;
}

double analyticity_bound(double lambda, int L) {
  const double a = std::max(4.0 * kPi, std::abs(lambda));
  const double dist = std::abs(lambda - 4.0 * kPi * std::round(lambda / (4.0 * kPi)));
  const double base = 1.0 - dist / a;
  return 2.0 * kSqrt2 * (std::log2(a / (2.0 * kPi)) + 2.0) * std::pow(base, 2 * L + 1);
}

cplx tau_hat(int j, double lambda, const ComplexFilterBank& bank, int k_max) {
  if (j < 0) throw UserError("tau_hat requires j >= 0");
  if (k_max < 1) throw UserError("tau_hat requires k_max >= 1");
  const double scale = std::pow(2.0, j);
  cplx acc{0.0, 0.0};
  for (int k = -k_max; k <= k_max; ++k) {
    const double a = lambda + 2.0 * kPi * k;
    const cplx phi = phi_hat(a, bank);
    const PsiParts psi = psi_hat_parts(scale * a, bank);
    acc += phi * std::conj(psi.psi);
  }
  return std::sqrt(scale) * acc;
}

}  // namespace longwave
