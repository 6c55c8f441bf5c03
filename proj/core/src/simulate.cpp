#include "longwave/simulate.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "fft.hpp"
#include "longwave/rng.hpp"

namespace longwave {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

long next_pow2(long x) {
  long n = 1;
  while (n < x) n *= 2;
  return n;
}

// Linear convolution of a and b via zero-padded FFTs.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  const long n = static_cast<long>(a.size() + b.size()) - 1;
  const long m = next_pow2(n);
  std::vector<cplx> fa(m, cplx{0.0, 0.0}), fb(m, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  detail::fft_inplace(fa, -1);
  detail::fft_inplace(fb, -1);
  for (long i = 0; i < m; ++i) fa[i] *= fb[i];
  detail::fft_inplace(fa, +1);
  std::vector<double> out(n);
  for (long i = 0; i < n; ++i) out[i] = fa[i].real() / static_cast<double>(m);
  return out;
}

}  // namespace

Eigen::MatrixXd sim_arfima0d0(long N, const Eigen::VectorXd& d, const Eigen::MatrixXd& Sigma,
                              std::uint64_t seed) {
  const int p = static_cast<int>(d.size());
  if (N < 64) throw UserError("sim_arfima0d0 requires N >= 64");
  for (int c = 0; c < p; ++c) {
    if (!(d[c] > -0.5)) throw InvalidD("sim_arfima0d0 requires d > -0.5");
  }
  if (Sigma.rows() != p || Sigma.cols() != p) {
    throw DimensionMismatch("sim_arfima0d0: Sigma dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(Sigma);
  if (llt.info() != Eigen::Success) throw NonPsdSigma("sim_arfima0d0: Sigma is not positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();

  const long ma_len = 4 * N;   // truncated MA filter length (plus the leading 1)
  const long total = 5 * N;    // burn-in 4N + N retained samples

  // Correlated innovations, drawn channel-major within each time step so that
  // the stream layout is well-defined and reproducible.
  GaussianRng rng(seed);
  Eigen::MatrixXd u(total, p);
  Eigen::VectorXd g(p);
  for (long t = 0; t < total; ++t) {
    for (int c = 0; c < p; ++c) g[c] = rng.normal();
    u.row(t) = (chol * g).transpose();
  }

  Eigen::MatrixXd X(N, p);
  for (int c = 0; c < p; ++c) {
    const double dd = d[c];
    const int D = static_cast<int>(std::floor(dd + 0.5));  // integer integrations
    const double df = dd - D;                              // stationary fractional part
    std::vector<double> pik(ma_len + 1);
    pik[0] = 1.0;
    for (long k = 1; k <= ma_len; ++k) pik[k] = pik[k - 1] * (k - 1 + df) / k;
    std::vector<double> uc(total);
    for (long t = 0; t < total; ++t) uc[t] = u(t, c);
    const std::vector<double> conv = convolve(uc, pik);
    std::vector<double> z(conv.begin() + ma_len, conv.begin() + ma_len + N);
    for (int rep = 0; rep < D; ++rep) {
      double acc = 0.0;
      for (long t = 0; t < N; ++t) {
        acc += z[t];
        z[t] = acc;
      }
    }
    for (long t = 0; t < N; ++t) X(t, c) = z[t];
  }
  return X;
}

void MfbmParams::validate() const {
  const int p = static_cast<int>(d.size());
  if (sigma.size() != p || r.rows() != p || r.cols() != p || eta.rows() != p || eta.cols() != p) {
    throw DimensionMismatch("MfbmParams: inconsistent dimensions");
  }
  for (int l = 0; l < p; ++l) {
    if (!(sigma[l] > 0.0)) throw UserError("MfbmParams: sigma must be positive");
    if (!(d[l] > 0.5 && d[l] < 1.5)) throw InvalidD("MfbmParams: d must lie in (0.5, 1.5)");
    if (std::abs(r(l, l) - 1.0) > 1e-12) throw UserError("MfbmParams: diag(r) must be 1");
    for (int m = 0; m < p; ++m) {
      if (std::abs(r(l, m)) > 1.0 + 1e-12) throw UserError("MfbmParams: |r| must be <= 1");
      if (std::abs(r(l, m) - r(m, l)) > 1e-12) throw UserError("MfbmParams: r must be symmetric");
      if (std::abs(eta(l, m) + eta(m, l)) > 1e-12) {
        throw UserError("MfbmParams: eta must be antisymmetric");
      }
    }
  }
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> mfbm_theta(const MfbmParams& params) {
  params.validate();
  const int p = static_cast<int>(params.d.size());
  Eigen::MatrixXd Omega(p, p), Phi(p, p);
  for (int l = 0; l < p; ++l) {
    for (int m = 0; m < p; ++m) {
      const double s = params.d[l] + params.d[m];
      if (!(s > 1.0 && s < 3.0)) throw InvalidD("mfbm_theta requires d_l + d_m in (1, 3)");
      const double ss = params.sigma[l] * params.sigma[m];
      const double rv = params.r(l, m);
      const double ev = params.eta(l, m);
      if (std::abs(s - 2.0) < 1e-12) {
        // Limit branch: tan(pi*s/2) ~ pi/2 * (s-2) cancellation gives
        // cos^2 -> (pi/2)^2 (s-2)^2 ... net closed form below.
        Omega(l, m) = ss * std::tgamma(2.0) * std::sqrt(rv * rv + ev * ev * kPi * kPi / 4.0);
        Phi(l, m) = (rv != 0.0) ? std::atan(ev / rv * kPi / 2.0)
                                : ((ev == 0.0) ? 0.0 : (ev > 0 ? kPi / 2 : -kPi / 2));
      } else {
        const double c = std::cos(kPi * s / 2.0);
        const double sn = std::sin(kPi * s / 2.0);
        Omega(l, m) = ss * std::tgamma(s) * std::sqrt(rv * rv * c * c + ev * ev * sn * sn);
        const double t = std::tan(kPi * s / 2.0);
        Phi(l, m) = (rv != 0.0) ? std::atan(ev / rv * t)
                                : ((ev * t == 0.0) ? 0.0 : (ev * t > 0 ? kPi / 2 : -kPi / 2));
      }
    }
  }
  return {Omega, Phi};
}

namespace {

// Folded spectral matrix of the sampled increments at frequency lambda.
Eigen::MatrixXcd increment_spectrum(double lambda, const Eigen::MatrixXd& Omega,
                                    const Eigen::MatrixXd& Phi, const Eigen::VectorXd& d,
                                    int t_max) {
  const int p = static_cast<int>(d.size());
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(p, p);
  const double win = 2.0 * (1.0 - std::cos(lambda));
  for (int t = -t_max; t <= t_max; ++t) {
    const double lt = lambda + 2.0 * kPi * t;
    if (std::abs(lt) < 1e-300) continue;
    const double sign = (lt > 0) ? 1.0 : -1.0;
    for (int l = 0; l < p; ++l) {
      for (int m = 0; m < p; ++m) {
        const double s = d[l] + d[m];
        S(l, m) += win * Omega(l, m) * std::pow(std::abs(lt), -s) *
                   std::polar(1.0, -Phi(l, m) * sign);
      }
    }
  }
  return 0.5 * (S + S.adjoint()).eval();
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
  Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-8 * scale) {
      throw NonPsdSpectrum("sim_mfbm: spectral matrix has a negative eigenvalue");
    }
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Eigen::MatrixXd sim_mfbm(long N, const MfbmParams& params, std::uint64_t seed) {
  params.validate();
  if (N < 256 || (N & (N - 1)) != 0) {
    throw UserError("sim_mfbm requires N a power of two >= 256");
  }
  const int p = static_cast<int>(params.d.size());
  const auto [Omega, Phi] = mfbm_theta(params);
  const int t_max = 20;

  GaussianRng rng(seed);
  std::vector<std::vector<cplx>> C(p, std::vector<cplx>(N, cplx{0.0, 0.0}));
  const double inv_sqrt2 = std::sqrt(0.5);
  Eigen::VectorXcd xi(p), ck(p);
  for (long k = 1; k < N / 2; ++k) {
    const double lam = 2.0 * kPi * k / N;
    const Eigen::MatrixXcd B = hermitian_sqrt(increment_spectrum(lam, Omega, Phi, params.d, t_max));
    for (int c = 0; c < p; ++c) {
      const double re = rng.normal();
      const double im = rng.normal();
      xi[c] = cplx{re, im} * inv_sqrt2;
    }
    ck = B * xi;
    for (int c = 0; c < p; ++c) {
      C[c][k] = ck[c];
      C[c][N - k] = std::conj(ck[c]);
    }
  }
  {
    // Nyquist bin: real coefficient.
    const Eigen::MatrixXcd B = hermitian_sqrt(increment_spectrum(kPi, Omega, Phi, params.d, t_max));
    Eigen::VectorXd gr(p);
    for (int c = 0; c < p; ++c) gr[c] = rng.normal();
    const Eigen::VectorXcd cN = B.real() * gr;
    for (int c = 0; c < p; ++c) C[c][N / 2] = cN[c];
  }

  Eigen::MatrixXd X(N, p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  for (int c = 0; c < p; ++c) {
    detail::fft_inplace(C[c], +1);  // unnormalized backward transform
    double acc = 0.0;
    for (long t = 0; t < N; ++t) {
      acc += C[c][t].real() * scale;  // increment
      X(t, c) = acc;
    }
  }
  return X;
}

}  // namespace longwave
