#include "longwave/montecarlo.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <thread>

#include "longwave/rng.hpp"

namespace longwave {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double x) {
  while (x > kPi) x -= 2.0 * kPi;
  while (x <= -kPi) x += 2.0 * kPi;
  return x;
}

struct Truth {
  Eigen::VectorXd d;
  Eigen::MatrixXd Omega;
  Eigen::MatrixXd Phi;
  Eigen::MatrixXd rho;
};

Truth truth_of(const McScenario& sc) {
  Truth t;
  if (sc.kind == ModelKind::Arfima0d0) {
    const int p = static_cast<int>(sc.d.size());
    t.d = sc.d;
    t.Omega = sc.Sigma.cwiseAbs();
    t.Phi.resize(p, p);
    for (int l = 0; l < p; ++l) {
      for (int m = 0; m < p; ++m) t.Phi(l, m) = kPi * (sc.d[l] - sc.d[m]) / 2.0;
    }
    t.rho.resize(p, p);
    for (int l = 0; l < p; ++l) {
      for (int m = 0; m < p; ++m) {
        t.rho(l, m) = sc.Sigma(l, m) / std::sqrt(sc.Sigma(l, l) * sc.Sigma(m, m));
      }
    }
  } else {
    t.d = sc.mfbm.d;
    auto [Omega, Phi] = mfbm_theta(sc.mfbm);
    t.Omega = Omega;
    t.Phi = Phi;
    const int p = static_cast<int>(t.d.size());
    t.rho.resize(p, p);
    for (int l = 0; l < p; ++l) {
      for (int m = 0; m < p; ++m) {
        t.rho(l, m) = t.Omega(l, m) / std::sqrt(t.Omega(l, l) * t.Omega(m, m));
      }
    }
  }
  return t;
}

}  // namespace

int worker_threads() {
  if (const char* env = std::getenv("LONGWAVE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

McReport run_mc(const McScenario& sc) {
  if (sc.reps < 1) throw UserError("run_mc requires reps >= 1");
  if (sc.N < 64 || (sc.N & (sc.N - 1)) != 0) throw UserError("run_mc requires N a power of two");
  const auto start = std::chrono::steady_clock::now();

  const Truth truth = truth_of(sc);
  const int p = static_cast<int>(truth.d.size());

  std::vector<std::optional<WhittleFit>> fits(sc.reps);
  std::atomic<int> next{0};
  const int workers = std::min(worker_threads(), sc.reps);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= sc.reps) return;
        try {
          const std::uint64_t seed = derive_seed(sc.seed, static_cast<std::uint64_t>(r));
          Eigen::MatrixXd X = (sc.kind == ModelKind::Arfima0d0)
                                  ? sim_arfima0d0(sc.N, sc.d, sc.Sigma, seed)
                                  : sim_mfbm(sc.N, sc.mfbm, seed);
          WhittleFit fit = estimate(X, sc.cfg);
          if (fit.converged) fits[r] = std::move(fit);
        } catch (const Error&) {
          // counted as a failed replication
        }
      }
    });
  }
  for (auto& th : pool) th.join();

  std::vector<const WhittleFit*> ok;
  for (const auto& f : fits) {
    if (f) ok.push_back(&*f);
  }
  if (ok.empty()) throw AllReplicationsFailed("run_mc: every replication failed");

  McReport rep;
  rep.failures = sc.reps - static_cast<int>(ok.size());
  rep.reps_used = static_cast<int>(ok.size());

  auto add_row = [&](const std::string& name, double truth_value, auto&& extract,
                     bool circular) {
    std::vector<double> diffs;
    diffs.reserve(ok.size());
    for (const WhittleFit* f : ok) {
      double delta = extract(*f) - truth_value;
      if (circular) delta = wrap_angle(delta);
      diffs.push_back(delta);
    }
    double mean = 0.0;
    for (double v : diffs) mean += v;
    mean /= diffs.size();
    double var = 0.0;
    for (double v : diffs) var += (v - mean) * (v - mean);
    var /= diffs.size();
    McRow row;
    row.name = name;
    row.truth = truth_value;
    row.bias = mean;
    row.stdev = std::sqrt(var);
    row.rmse = std::sqrt(mean * mean + var);
    rep.rows.push_back(row);
  };

  for (int c = 0; c < p; ++c) {
    add_row("d_" + std::to_string(c + 1), truth.d[c],
            [c](const WhittleFit& f) { return f.d_hat[c]; }, false);
  }
  for (int l = 0; l < p; ++l) {
    for (int m = l; m < p; ++m) {
      const std::string suffix = std::to_string(l + 1) + std::to_string(m + 1);
      add_row("omega_" + suffix, truth.Omega(l, m),
              [l, m](const WhittleFit& f) { return f.Omega_hat(l, m); }, false);
    }
  }
  for (int l = 0; l < p; ++l) {
    for (int m = l + 1; m < p; ++m) {
      const std::string suffix = std::to_string(l + 1) + std::to_string(m + 1);
      add_row("rho_" + suffix, truth.rho(l, m),
              [l, m](const WhittleFit& f) { return f.rho_hat(l, m); }, false);
      add_row("phi_" + suffix, truth.Phi(l, m),
              [l, m](const WhittleFit& f) { return f.Phi_hat(l, m); }, true);
    }
  }

  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace longwave
