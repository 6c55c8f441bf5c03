#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "longwave/errors.hpp"

namespace longwave {

// Per-subject estimation summary consumed by the group pipeline.
struct SubjectFit {
  std::string id;
  Eigen::VectorXd d;
  Eigen::MatrixXd rho;
  Eigen::MatrixXd phi;
};

enum class EdgeClass { Positive, Negative, Neutral };

struct GroupEdge {
  int l = 0, m = 0;    // node indices, l < m
  double mean_phase = 0.0;
  EdgeClass cls = EdgeClass::Neutral;
};

struct GroupGraph {
  std::vector<std::string> nodes;
  std::vector<GroupEdge> edges;  // present in every subject (intersection)
  double threshold = 0.3;
};

// Edge (l, m), l < m, iff rho(l, m) > thr (strict). Symmetric, no self-loops.
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> threshold_graph(const Eigen::MatrixXd& rho,
                                                                    double thr);

// Intersection of per-subject graphs; per-edge circular mean phase; edges
// classified against the reference phase phi* = -(pi/2)(dbar_l - dbar_m)
// computed from the group-mean memory parameters: positive if
// mean phase > 1.1|phi*|, negative if < -1.1|phi*|, neutral otherwise.
GroupGraph group_graph(const std::vector<SubjectFit>& fits, double thr,
                       std::vector<std::string> node_labels = {});

}  // namespace longwave
