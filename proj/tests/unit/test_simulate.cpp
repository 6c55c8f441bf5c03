#include <doctest.h>

#include <cmath>
#include <numbers>

#include "longwave/simulate.hpp"
#include "longwave/whittle.hpp"

using namespace longwave;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("simulate") {

TEST_CASE("fractional noise: shape, reproducibility, validation") {
  Eigen::VectorXd d(2);
  d << 0.2, 0.4;
  Eigen::MatrixXd Sigma(2, 2);
  Sigma << 1.0, 0.5, 0.5, 1.0;

  const Eigen::MatrixXd A = sim_arfima0d0(1024, d, Sigma, 42);
  CHECK(A.rows() == 1024);
  CHECK(A.cols() == 2);
  const Eigen::MatrixXd B = sim_arfima0d0(1024, d, Sigma, 42);
  CHECK((A - B).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd C = sim_arfima0d0(1024, d, Sigma, 43);
  CHECK((A - C).cwiseAbs().maxCoeff() > 0.0);

  Eigen::VectorXd bad = d;
  bad[0] = -0.6;
  CHECK_THROWS_AS(sim_arfima0d0(1024, bad, Sigma, 1), InvalidD);
  Eigen::MatrixXd notpsd(2, 2);
  notpsd << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(sim_arfima0d0(1024, d, notpsd, 1), NonPsdSigma);
  CHECK_THROWS_AS(sim_arfima0d0(16, d, Sigma, 1), UserError);
}

TEST_CASE("fractional noise with d = 0 reproduces the innovation covariance") {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd Sigma(2, 2);
  Sigma << 2.0, 0.9, 0.9, 1.0;
  const Eigen::MatrixXd X = sim_arfima0d0(1 << 15, d, Sigma, 5);
  const Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
  const Eigen::MatrixXd S = (Xc.transpose() * Xc) / static_cast<double>(X.rows());
  CHECK((S - Sigma).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("memory parameters above one half integrate a stationary core") {
  // d = 1.0: cumulative sum of a d = 0 series; differencing recovers white noise.
  Eigen::VectorXd d(1);
  d << 1.0;
  const Eigen::MatrixXd X = sim_arfima0d0(4096, d, Eigen::MatrixXd::Identity(1, 1), 9);
  Eigen::VectorXd diff = X.col(0).tail(4095) - X.col(0).head(4095);
  const double mean = diff.mean();
  const double var = (diff.array() - mean).square().mean();
  CHECK(std::abs(var - 1.0) < 0.1);
}

TEST_CASE("closed-form long-run parameters of mixed fractional Brownian motion") {
  // Case 1: d = (1.0, 1.2), r12 = 0.6, eta12 = 0.9.
  MfbmParams p1;
  p1.d.resize(2);
  p1.d << 1.0, 1.2;
  p1.sigma = Eigen::VectorXd::Ones(2);
  p1.r.resize(2, 2);
  p1.r << 1.0, 0.6, 0.6, 1.0;
  p1.eta.resize(2, 2);
  p1.eta << 0.0, 0.9, -0.9, 0.0;
  const auto [O1, P1] = mfbm_theta(p1);
  CHECK(std::abs(P1(0, 1) - kPi / 7.0) < 0.005);
  CHECK(std::abs(O1(0, 1) - 0.699) < 0.005);
  CHECK(std::abs(O1(0, 1) / std::sqrt(O1(0, 0) * O1(1, 1)) - 0.70) < 0.01);
  CHECK(P1(1, 0) == doctest::Approx(-P1(0, 1)));

  // Case 2: r12 = 0.2, eta12 = -0.6.
  MfbmParams p2 = p1;
  p2.r << 1.0, 0.2, 0.2, 1.0;
  p2.eta << 0.0, -0.6, 0.6, 0.0;
  const auto [O2, P2] = mfbm_theta(p2);
  // atan((eta/r) tan(pi s/2)) = -0.7727 here; the -pi/4 label is a coarser
  // rounding than Case 1's, hence the wider band.
  CHECK(std::abs(P2(0, 1) - (-kPi / 4.0)) < 0.015);
  CHECK(std::abs(P2(0, 1) - (-0.77266)) < 1e-4);
  CHECK(std::abs(O2(0, 1) - 0.293) < 0.005);

  // d_l + d_m = 2 takes its own closed form (the generic one degenerates there).
  MfbmParams q = p1;
  q.d << 1.0, 1.0;
  const auto [Oq, Pq] = mfbm_theta(q);
  CHECK(Oq(0, 1) ==
        doctest::Approx(std::sqrt(0.36 + 0.81 * kPi * kPi / 4.0)).epsilon(1e-10));
  CHECK(Pq(0, 1) == doctest::Approx(std::atan(0.9 / 0.6 * kPi / 2.0)).epsilon(1e-10));
}

TEST_CASE("spectral synthesis: shape, reproducibility, validation") {
  MfbmParams p;
  p.d.resize(2);
  p.d << 1.0, 1.2;
  p.sigma = Eigen::VectorXd::Ones(2);
  p.r.resize(2, 2);
  p.r << 1.0, 0.6, 0.6, 1.0;
  p.eta.resize(2, 2);
  p.eta << 0.0, 0.9, -0.9, 0.0;

  const Eigen::MatrixXd X = sim_mfbm(1024, p, 21);
  CHECK(X.rows() == 1024);
  CHECK(X.cols() == 2);
  const Eigen::MatrixXd Y = sim_mfbm(1024, p, 21);
  CHECK((X - Y).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(sim_mfbm(1000, p, 1), UserError);  // not a power of two
  MfbmParams bad = p;
  bad.d << 0.2, 1.2;  // outside (0.5, 1.5)
  CHECK_THROWS_AS(sim_mfbm(1024, bad, 1), UserError);
}

TEST_CASE("synthesized motion carries the prescribed memory and phase") {
  MfbmParams p;
  p.d.resize(2);
  p.d << 1.0, 1.2;
  p.sigma = Eigen::VectorXd::Ones(2);
  p.r.resize(2, 2);
  p.r << 1.0, 0.6, 0.6, 1.0;
  p.eta.resize(2, 2);
  p.eta << 0.0, 0.9, -0.9, 0.0;

  const Eigen::MatrixXd X = sim_mfbm(4096, p, 17);
  WhittleConfig cfg;
  const WhittleFit fit = estimate(X, cfg);
  CHECK(std::abs(fit.d_hat[0] - 1.0) < 0.2);
  CHECK(std::abs(fit.d_hat[1] - 1.2) < 0.2);
  // Phase should land near the closed-form value (pi/7 for this case).
  CHECK(std::abs(fit.Phi_hat(0, 1) - kPi / 7.0) < 0.3);
}

}  // TEST_SUITE
