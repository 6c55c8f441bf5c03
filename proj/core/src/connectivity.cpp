#include "longwave/connectivity.hpp"

#include <cmath>
#include <numbers>

namespace longwave {

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> threshold_graph(const Eigen::MatrixXd& rho,
                                                                    double thr) {
  if (!(thr > 0.0 && thr < 1.0)) throw UserError("threshold_graph requires thr in (0, 1)");
  const int p = static_cast<int>(rho.rows());
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adj(p, p);
  adj.setConstant(false);
  for (int l = 0; l < p; ++l) {
    for (int m = l + 1; m < p; ++m) {
      const bool edge = rho(l, m) > thr;
      adj(l, m) = edge;
      adj(m, l) = edge;
    }
  }
  return adj;
}

GroupGraph group_graph(const std::vector<SubjectFit>& fits, double thr,
                       std::vector<std::string> node_labels) {
  if (fits.empty()) throw UserError("group_graph requires at least one subject");
  const int p = static_cast<int>(fits.front().d.size());
  for (const SubjectFit& f : fits) {
    if (f.d.size() != p || f.rho.rows() != p || f.rho.cols() != p || f.phi.rows() != p ||
        f.phi.cols() != p) {
      throw DimensionMismatch("group_graph: inconsistent subject dimensions");
    }
  }

  GroupGraph g;
  g.threshold = thr;
  if (node_labels.empty()) {
    for (int i = 0; i < p; ++i) g.nodes.push_back("n" + std::to_string(i + 1));
  } else {
    if (static_cast<int>(node_labels.size()) != p) {
      throw DimensionMismatch("group_graph: node label count mismatch");
    }
    g.nodes = std::move(node_labels);
  }

  Eigen::VectorXd dbar = Eigen::VectorXd::Zero(p);
  for (const SubjectFit& f : fits) dbar += f.d;
  dbar /= static_cast<double>(fits.size());

  constexpr double kPi = std::numbers::pi;
  for (int l = 0; l < p; ++l) {
    for (int m = l + 1; m < p; ++m) {
      bool in_all = true;
      double cs = 0.0, sn = 0.0;
      for (const SubjectFit& f : fits) {
        if (!(f.rho(l, m) > thr)) {
          in_all = false;
          break;
        }
        cs += std::cos(f.phi(l, m));
        sn += std::sin(f.phi(l, m));
      }
      if (!in_all) continue;
      GroupEdge e;
      e.l = l;
      e.m = m;
      e.mean_phase = std::atan2(sn, cs);  // circular mean
      const double ref = 1.1 * std::abs(-(kPi / 2.0) * (dbar[l] - dbar[m]));
      e.cls = (e.mean_phase > ref) ? EdgeClass::Positive
                                   : (e.mean_phase < -ref ? EdgeClass::Negative
                                                          : EdgeClass::Neutral);
      g.edges.push_back(e);
    }
  }
  return g;
}

}  // namespace longwave
