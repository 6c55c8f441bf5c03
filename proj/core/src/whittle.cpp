#include "longwave/whittle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_multimin.h>

namespace longwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct KIntegrand {
  const ComplexFilterBank* bank;
  double delta;
};

double k_integrand(double lambda, void* params) {
  const auto* p = static_cast<KIntegrand*>(params);
  if (lambda <= 0.0) return 0.0;
  const double mag2 = std::norm(psi_hat_parts(lambda, *p->bank).h);
  return std::pow(lambda, -p->delta) * mag2;
}

void ensure_gsl_quiet() {
  static gsl_error_handler_t* const handler [[maybe_unused]] = gsl_set_error_handler_off();
}

}  // namespace

double K(double delta, const ComplexFilterBank& bank) {
  const int M = bank.M;
  if (!(delta > 1.0 - 2.0 * M && delta < 2.0 * M + 1.0)) {
    throw DomainError("K(delta): delta outside the convergence strip (1-2M, 2M+1)");
  }
  ensure_gsl_quiet();

  KIntegrand params{&bank, delta};
  gsl_function f;
  f.function = &k_integrand;
  f.params = &params;

  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(512);
  double total = 0.0;
  double lo = 0.0, hi = kPi;
  // [0, pi], then dyadic panels [2^k pi, 2^{k+1} pi]; the integrand decays like
  // lambda^{-delta-2M} so the panel series converges geometrically.
  for (int panel = 0; panel < 40; ++panel) {
    double value = 0.0, abserr = 0.0;
    const int status =
        gsl_integration_qag(&f, lo, hi, 0.0, 1e-10, 512, GSL_INTEG_GAUSS61, ws, &value, &abserr);
    if (status != GSL_SUCCESS && status != GSL_EROUND) {
      gsl_integration_workspace_free(ws);
      throw NumericalError("K(delta): quadrature failed on panel " + std::to_string(panel));
    }
    total += value;
    if (panel > 0 && std::abs(value) < 1e-13 * std::abs(total)) break;
    lo = hi;
    hi *= 2.0;
  }
  gsl_integration_workspace_free(ws);
  return 4.0 * total;
}

double KCache::operator()(double delta, const ComplexFilterBank& bank) {
  const long long key = std::llround(delta * 1e12);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const double v = K(delta, bank);
  cache_.emplace(key, v);
  return v;
}

double theta_normalization(double delta, const ComplexFilterBank& bank, KCache& cache) {
  // Quasi-analytic two-tree banks: the coefficient spectrum carries a factor
  // pi/K(delta) relative to the long-run covariance (1/(2pi) spectral measure,
  // one-sided kernel of modulus 2|psi_h|). The real comparison bank sees both
  // half-lines and duplicated trees, giving K(delta)/(2pi).
  const double k = cache(delta, bank);
  return (bank.variant == FilterVariant::Daubechies) ? k / (2.0 * kPi) : k / kPi;
}

Eigen::MatrixXcd G_hat(const Scalogram& sc, const Eigen::VectorXd& d, int j0, int j1) {
  const int p = sc.p;
  if (j0 < 1 || j1 < j0 || j1 > static_cast<int>(sc.I.size())) {
    throw UserError("G_hat: invalid scale range");
  }
  long n = 0;
  for (int j = j0; j <= j1; ++j) n += sc.n[j - 1];
  if (n < 1) throw EmptyScales("G_hat: no coefficients in the requested scale range");

  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(p, p);
  for (int j = j0; j <= j1; ++j) {
    if (sc.n[j - 1] == 0) continue;
    Eigen::VectorXd g(p);
    for (int l = 0; l < p; ++l) g[l] = std::pow(2.0, -static_cast<double>(j) * d[l]);
    G += g.asDiagonal() * sc.I[j - 1] * g.asDiagonal();
  }
  G /= static_cast<double>(n);
  return 0.5 * (G + G.adjoint()).eval();
}

double R(const Eigen::VectorXd& d, const Scalogram& sc, int j0, int j1) {
  Eigen::MatrixXcd G = G_hat(sc, d, j0, j1);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(G);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return kInf;
  double logdet = 0.0;
  for (int i = 0; i < G.rows(); ++i) {
    const double piv = ldlt.vectorD()[i].real();
    if (!(piv > 0.0)) return kInf;
    logdet += std::log(piv);
  }
  long n = 0;
  double eta = 0.0;
  for (int j = j0; j <= j1; ++j) {
    n += sc.n[j - 1];
    eta += static_cast<double>(j) * sc.n[j - 1];
  }
  eta /= static_cast<double>(n);
  return logdet + 2.0 * std::log(2.0) * eta * d.sum();
}

namespace {

struct BoxMap {
  double lo, hi;
  double to_d(double y) const { return lo + (hi - lo) / (1.0 + std::exp(-y)); }
  double to_y(double d) const {
    const double t = std::min(std::max((d - lo) / (hi - lo), 1e-12), 1.0 - 1e-12);
    return std::log(t / (1.0 - t));
  }
};

struct ObjectiveCtx {
  const Scalogram* sc;
  int j0, j1;
  const BoxMap* box;
  int p;
};

double objective(const gsl_vector* y, void* params) {
  const auto* ctx = static_cast<ObjectiveCtx*>(params);
  Eigen::VectorXd d(ctx->p);
  for (int i = 0; i < ctx->p; ++i) d[i] = ctx->box->to_d(gsl_vector_get(y, i));
  const double v = R(d, *ctx->sc, ctx->j0, ctx->j1);
  // Nelder-Mead handles large finite values better than inf.
  return std::isfinite(v) ? v : 1e12;
}

}  // namespace

WhittleFit estimate(const Eigen::MatrixXd& X, const WhittleConfig& cfg) {
  const long N = X.rows();
  const int p = static_cast<int>(X.cols());
  if (p < 1) throw UserError("estimate: input has no channels");

  ComplexFilterBank bank;
  switch (cfg.variant) {
    case FilterVariant::CfwC: bank = build_cfw_c(cfg.M, cfg.L); break;
    case FilterVariant::CfwPr: bank = build_cfw_pr(cfg.M, cfg.L); break;
    case FilterVariant::Daubechies: bank = build_daubechies(cfg.M); break;
  }
  const int T = bank.support_length;

  const double d_max = std::min(cfg.d_max, bank.M - 0.6);
  const double d_min = cfg.d_min;
  if (!(d_min > -0.5) || !(d_max > d_min)) throw UserError("estimate: invalid d bounds");

  int j1 = cfg.j1;
  if (j1 < 0) {
    j1 = cfg.j0;
    while (n_coeffs(N, j1 + 1, T) >= 4 && (2L << j1) <= N) ++j1;
  }
  if (j1 < cfg.j0) throw UserError("estimate: j1 < j0");
  if (N <= (1L << j1)) throw UserError("estimate: series too short for requested j1");

  const WaveletPyramid pyr = pyramid(X, bank, j1);
  const Scalogram sc = scalogram(pyr, false);

  long n = 0;
  double eta = 0.0;
  for (int j = cfg.j0; j <= j1; ++j) {
    n += sc.n[j - 1];
    eta += static_cast<double>(j) * sc.n[j - 1];
  }
  if (n < 1) throw EmptyScales("estimate: no coefficients in [j0, j1]");
  eta /= static_cast<double>(n);

  // Univariate grid initialization per channel.
  Eigen::VectorXd d0(p);
  for (int c = 0; c < p; ++c) {
    double best = kInf, best_d = 0.0;
    for (int i = 0; i < cfg.grid_points; ++i) {
      const double d = d_min + 0.01 + (d_max - d_min - 0.02) * i / (cfg.grid_points - 1);
      double s = 0.0;
      for (int j = cfg.j0; j <= j1; ++j) {
        s += std::pow(2.0, -2.0 * j * d) * sc.I[j - 1](c, c).real();
      }
      s /= static_cast<double>(n);
      const double val = std::log(s) + 2.0 * std::log(2.0) * eta * d;
      if (val < best) {
        best = val;
        best_d = d;
      }
    }
    d0[c] = best_d;
  }

  ensure_gsl_quiet();
  const BoxMap box{d_min, d_max};
  ObjectiveCtx ctx{&sc, cfg.j0, j1, &box, p};
  gsl_multimin_function f;
  f.n = p;
  f.f = &objective;
  f.params = &ctx;

  gsl_vector* y = gsl_vector_alloc(p);
  gsl_vector* step = gsl_vector_alloc(p);
  for (int i = 0; i < p; ++i) {
    gsl_vector_set(y, i, box.to_y(d0[i]));
    gsl_vector_set(step, i, 0.1);
  }
  gsl_multimin_fminimizer* min =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, p);
  gsl_multimin_fminimizer_set(min, &f, y, step);

  // Nelder-Mead can stagnate with a degenerate simplex whose size stops
  // shrinking; when that happens, restart from the best vertex with a fresh,
  // smaller simplex instead of burning the remaining iteration budget.
  int iter = 0;
  bool converged = false;
  for (int attempt = 0; attempt < 4 && !converged && iter < cfg.max_iter; ++attempt) {
    if (attempt > 0) {
      gsl_vector_memcpy(y, min->x);
      gsl_vector_set_all(step, 0.1 * std::pow(0.1, attempt));
      gsl_multimin_fminimizer_set(min, &f, y, step);
    }
    double best_size = kInf;
    int last_improvement = iter;
    while (iter < cfg.max_iter) {
      ++iter;
      const int status = gsl_multimin_fminimizer_iterate(min);
      if (status != GSL_SUCCESS) break;  // cannot contract further; restart
      const double size = gsl_multimin_fminimizer_size(min);
      if (gsl_multimin_test_size(size, cfg.simplex_tol) == GSL_SUCCESS) {
        converged = true;
        break;
      }
      if (size < 0.99 * best_size) {
        best_size = size;
        last_improvement = iter;
      } else if (iter - last_improvement > 50) {
        break;  // stagnated; restart
      }
    }
  }

  WhittleFit fit;
  fit.d_hat.resize(p);
  for (int i = 0; i < p; ++i) fit.d_hat[i] = box.to_d(gsl_vector_get(min->x, i));
  fit.criterion = min->fval;
  fit.iterations = iter;
  fit.converged = converged;

  gsl_multimin_fminimizer_free(min);
  gsl_vector_free(y);
  gsl_vector_free(step);

  fit.G_hat = G_hat(sc, fit.d_hat, cfg.j0, j1);
  for (int l = 0; l < p; ++l) {
    if (!(fit.G_hat(l, l).real() > 0.0)) {
      throw DegenerateScale("estimate: degenerate wavelet variance in channel " +
                            std::to_string(l + 1));
    }
  }
  fit.n = n;
  fit.j0 = cfg.j0;
  fit.j1 = j1;
  fit.n_j.assign(sc.n.begin() + (cfg.j0 - 1), sc.n.begin() + j1);

  KCache kcache;
  fit.Theta_hat.resize(p, p);
  fit.Omega_hat.resize(p, p);
  fit.Phi_hat = Eigen::MatrixXd::Zero(p, p);
  fit.rho_hat.resize(p, p);
  for (int l = 0; l < p; ++l) {
    for (int m = l; m < p; ++m) {
      const double norm = theta_normalization(fit.d_hat[l] + fit.d_hat[m], bank, kcache);
      cplx th = fit.G_hat(l, m) / norm;
      if (l == m) th = cplx{std::abs(th.real()), 0.0};  // diagonal is real positive
      fit.Theta_hat(l, m) = th;
      fit.Theta_hat(m, l) = std::conj(th);
      fit.Omega_hat(l, m) = fit.Omega_hat(m, l) = std::abs(th);
      if (l != m) {
        fit.Phi_hat(l, m) = std::arg(th);
        fit.Phi_hat(m, l) = -fit.Phi_hat(l, m);
      }
    }
  }
  for (int l = 0; l < p; ++l) {
    for (int m = 0; m < p; ++m) {
      fit.rho_hat(l, m) = fit.Omega_hat(l, m) /
                          std::sqrt(fit.Omega_hat(l, l) * fit.Omega_hat(m, m));
    }
    fit.rho_hat(l, l) = 1.0;
  }

  if (!converged) {
    // Carry the best iterate but signal non-convergence to callers that care.
    fit.converged = false;
  }
  return fit;
}

}  // namespace longwave
