#include "longwave/asymptotics.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

namespace longwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGridSize = 2048;   // midpoint quadrature nodes on [-pi, pi]
constexpr int kDefaultTmax = 16;  // frequency-alias truncation

// Geometric sum over the coarse-scale coefficient block:
// sum_{tau=0}^{2^u-1} e^{-i 2^u tau lambda} (the e^{-i 2^u tau 2 t pi} factor
// is 1, so the tau-sum factors out of the alias sum).
cplx block_sum(double lambda, int u) {
  const double step = std::pow(2.0, u);
  const long count = 1L << u;
  const cplx z = std::polar(1.0, -step * lambda);
  if (std::abs(z - cplx{1.0, 0.0}) < 1e-12) return cplx{static_cast<double>(count), 0.0};
  return (std::pow(z, static_cast<double>(count)) - 1.0) / (z - 1.0);
}

// Shared evaluation grid with cached wavelet transforms, so the variance
// assembly does not repeat the (scale, alias, node) evaluations per delta pair.
class Context {
public:
  Context(const ComplexFilterBank& bank, int t_max) : bank_(bank), t_max_(t_max) {
    lam_.resize(kGridSize);
    for (int i = 0; i < kGridSize; ++i) {
      lam_[i] = -kPi + (i + 0.5) * 2.0 * kPi / kGridSize;
    }
    psi0_.resize(2 * t_max + 1, std::vector<cplx>(kGridSize));
    for (int t = -t_max; t <= t_max; ++t) {
      for (int i = 0; i < kGridSize; ++i) {
        psi0_[t + t_max][i] = psi_hat_parts(lam_[i] + 2.0 * kPi * t, bank).psi;
      }
    }
  }

  // D_u values over the grid for one (u, delta).
  const std::vector<cplx>& d_grid(int u, double delta) {
    const auto key = std::make_pair(u, std::llround(delta * 1e12));
    auto it = dcache_.find(key);
    if (it != dcache_.end()) return it->second;

    const auto& psiu = psi_scaled(u);
    std::vector<cplx> out(kGridSize, cplx{0.0, 0.0});
    const double amp = std::pow(2.0, 0.5 * u);
    for (int t = -t_max_; t <= t_max_; ++t) {
      const auto& p0 = psi0_[t + t_max_];
      const auto& pu = psiu[t + t_max_];
      for (int i = 0; i < kGridSize; ++i) {
        const double lt = lam_[i] + 2.0 * kPi * t;
        out[i] += std::pow(std::abs(lt), -delta) * std::conj(p0[i]) * amp * pu[i];
      }
    }
    for (int i = 0; i < kGridSize; ++i) out[i] *= block_sum(lam_[i], u);
    return dcache_.emplace(key, std::move(out)).first->second;
  }

  cplx i_tilde(int u, double d1, double d2) {
    const auto key = std::make_tuple(u, std::llround(d1 * 1e12), std::llround(d2 * 1e12));
    auto it = icache_.find(key);
    if (it != icache_.end()) return it->second;
    const auto& a = d_grid(u, d1);
    const auto& b = d_grid(u, d2);
    cplx acc{0.0, 0.0};
    for (int i = 0; i < kGridSize; ++i) acc += std::conj(a[i]) * b[i];
    acc *= 2.0 * kPi / kGridSize;
    const cplx v = 2.0 * kPi / (kcache_(d1, bank_) * kcache_(d2, bank_)) * acc;
    return icache_.emplace(key, v).first->second;
  }

  // I_tilde(0) + sum_{u=1}^{u_max} (2^{u d1} + 2^{u d2}) 2^{-u} I_tilde(u);
  // records the relative magnitude of the final term in `tail`.
  cplx series(double d1, double d2, int u_max, double* tail) {
    cplx acc = i_tilde(0, d1, d2);
    double last = 0.0;
    for (int u = 1; u <= u_max; ++u) {
      const cplx term = (std::pow(2.0, u * d1) + std::pow(2.0, u * d2)) * std::pow(2.0, -u) *
                        i_tilde(u, d1, d2);
      acc += term;
      last = std::abs(term);
    }
    if (tail) *tail = last / std::max(std::abs(acc), 1e-300);
    return acc;
  }

private:
  const std::vector<std::vector<cplx>>& psi_scaled(int u) {
    auto it = psiu_.find(u);
    if (it != psiu_.end()) return it->second;
    std::vector<std::vector<cplx>> v(2 * t_max_ + 1, std::vector<cplx>(kGridSize));
    const double scale = std::pow(2.0, u);
    for (int t = -t_max_; t <= t_max_; ++t) {
      for (int i = 0; i < kGridSize; ++i) {
        v[t + t_max_][i] = psi_hat_parts(scale * (lam_[i] + 2.0 * kPi * t), bank_).psi;
      }
    }
    return psiu_.emplace(u, std::move(v)).first->second;
  }

  const ComplexFilterBank& bank_;
  int t_max_;
  std::vector<double> lam_;
  std::vector<std::vector<cplx>> psi0_;
  std::map<int, std::vector<std::vector<cplx>>> psiu_;
  std::map<std::pair<int, long long>, std::vector<cplx>> dcache_;
  std::map<std::tuple<int, long long, long long>, cplx> icache_;
  KCache kcache_;
};

// The p^2 x p^2 "sandwich" diag(vec G0) [series(d_a+d_b, d_a'+d_b')] diag(vec G0),
// with column-major vec index (a, b) -> a + p*b.
Eigen::MatrixXcd sandwich(Context& ctx, const Eigen::MatrixXcd& G0, const Eigen::VectorXd& d0,
                          int u_max, double* tail) {
  const int p = static_cast<int>(d0.size());
  Eigen::MatrixXcd out(p * p, p * p);
  double worst = 0.0;
  for (int b = 0; b < p; ++b) {
    for (int a = 0; a < p; ++a) {
      for (int b2 = 0; b2 < p; ++b2) {
        for (int a2 = 0; a2 < p; ++a2) {
          double t = 0.0;
          const cplx s = ctx.series(d0[a] + d0[b], d0[a2] + d0[b2], u_max, &t);
          worst = std::max(worst, t);
          out(a + p * b, a2 + p * b2) = G0(a, b) * s * G0(a2, b2);
        }
      }
    }
  }
  if (tail) *tail = worst;
  if (worst > 1e-6) {
    throw SeriesNotConverged("cross-scale series tail estimate " + std::to_string(worst) +
                             " exceeds 1e-6; increase u_max or reduce max(d)");
  }
  return out;
}

Eigen::MatrixXd variance_d_impl(Context& ctx, const Eigen::MatrixXcd& G0,
                                const Eigen::VectorXd& d0, int u_max) {
  const int p = static_cast<int>(d0.size());
  double tail = 0.0;
  const Eigen::MatrixXcd GIG = sandwich(ctx, G0, d0, u_max, &tail);
  const Eigen::MatrixXcd Ginv = G0.inverse();

  Eigen::MatrixXcd Upsilon(p, p);
  for (int a = 0; a < p; ++a) {
    for (int a2 = 0; a2 < p; ++a2) {
      cplx acc{0.0, 0.0};
      for (int b = 0; b < p; ++b) {
        for (int b2 = 0; b2 < p; ++b2) {
          acc += Ginv(a, b) * Ginv(a2, b2) *
                 (GIG(a + p * a2, b + p * b2) + GIG(a + p * b2, a2 + p * b));
        }
      }
      Upsilon(a, a2) = acc;
    }
  }

  const Eigen::MatrixXcd H =
      (Ginv.cwiseProduct(G0) + Eigen::MatrixXcd::Identity(p, p)).inverse();
  const Eigen::MatrixXcd V =
      (1.0 / (2.0 * std::log(2.0) * std::log(2.0))) * H * Upsilon * H;
  return 0.5 * (V.real() + V.real().transpose());
}

Eigen::MatrixXcd variance_G_impl(Context& ctx, const Eigen::MatrixXcd& G0,
                                 const Eigen::VectorXd& d0, int u_max) {
  const int p = static_cast<int>(d0.size());
  double tail = 0.0;
  const Eigen::MatrixXcd GIG = sandwich(ctx, G0, d0, u_max, &tail);

  Eigen::MatrixXcd V(p * p, p * p);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      for (int a2 = 0; a2 < p; ++a2) {
        for (int b2 = 0; b2 < p; ++b2) {
          V(a + p * b, a2 + p * b2) =
              GIG(a + p * a2, b + p * b2) + GIG(a + p * b2, a2 + p * b);
        }
      }
    }
  }
  return 0.5 * (V + V.adjoint()).eval();
}

void check_inputs(const Eigen::MatrixXcd& G0, const Eigen::VectorXd& d0, int u_max) {
  if (G0.rows() != d0.size() || G0.cols() != d0.size()) {
    throw DimensionMismatch("asymptotic variance: G0/d0 dimension mismatch");
  }
  if (u_max < 10) throw UserError("asymptotic variance requires u_max >= 10");
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(G0);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw UserError("asymptotic variance: G0 must be positive definite");
  }
}

}  // namespace

cplx D_u(double lambda, double delta, int u, int t_max, const ComplexFilterBank& bank) {
  if (u < 0) throw UserError("D_u requires u >= 0");
  if (t_max < 8) throw UserError("D_u requires t_max >= 8");
  cplx acc{0.0, 0.0};
  const double amp = std::pow(2.0, 0.5 * u);
  const double scale = std::pow(2.0, u);
  for (int t = -t_max; t <= t_max; ++t) {
    const double lt = lambda + 2.0 * kPi * t;
    acc += std::pow(std::abs(lt), -delta) * std::conj(psi_hat_parts(lt, bank).psi) * amp *
           psi_hat_parts(scale * lt, bank).psi;
  }
  return block_sum(lambda, u) * acc;
}

cplx I_tilde(int u, double delta1, double delta2, const ComplexFilterBank& bank) {
  Context ctx(bank, kDefaultTmax);
  return ctx.i_tilde(u, delta1, delta2);
}

struct AsymptoticCalculator::Impl {
  Impl(const ComplexFilterBank& b, int t_max) : bank(b), ctx(bank, t_max) {}
  ComplexFilterBank bank;  // owned copy: Context keeps a reference
  Context ctx;
};

AsymptoticCalculator::AsymptoticCalculator(const ComplexFilterBank& bank, int t_max)
    : impl_(std::make_unique<Impl>(bank, t_max)) {
  if (t_max < 8) throw UserError("AsymptoticCalculator requires t_max >= 8");
}

AsymptoticCalculator::~AsymptoticCalculator() = default;

Eigen::MatrixXd AsymptoticCalculator::variance_d_inf(const Eigen::MatrixXcd& G0,
                                                     const Eigen::VectorXd& d0, int u_max) {
  check_inputs(G0, d0, u_max);
  return variance_d_impl(impl_->ctx, G0, d0, u_max);
}

Eigen::MatrixXcd AsymptoticCalculator::variance_G_inf(const Eigen::MatrixXcd& G0,
                                                      const Eigen::VectorXd& d0, int u_max) {
  check_inputs(G0, d0, u_max);
  return variance_G_impl(impl_->ctx, G0, d0, u_max);
}

Eigen::MatrixXd variance_d_inf(const Eigen::MatrixXcd& G0, const Eigen::VectorXd& d0, int u_max,
                               const ComplexFilterBank& bank) {
  check_inputs(G0, d0, u_max);
  Context ctx(bank, kDefaultTmax);
  return variance_d_impl(ctx, G0, d0, u_max);
}

Eigen::MatrixXcd variance_G_inf(const Eigen::MatrixXcd& G0, const Eigen::VectorXd& d0, int u_max,
                                const ComplexFilterBank& bank) {
  check_inputs(G0, d0, u_max);
  Context ctx(bank, kDefaultTmax);
  return variance_G_impl(ctx, G0, d0, u_max);
}

}  // namespace longwave
