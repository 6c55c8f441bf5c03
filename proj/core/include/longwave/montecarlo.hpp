#pragma once

#include <string>
#include <vector>

#include "longwave/simulate.hpp"
#include "longwave/whittle.hpp"

namespace longwave {

// One replication study: simulate `reps` series from the model, estimate each,
// and aggregate bias/std/RMSE per parameter of interest.
struct McScenario {
  ModelKind kind = ModelKind::Arfima0d0;
  long N = 4096;
  int reps = 100;
  std::uint64_t seed = 1;

  // ARFIMA inputs.
  Eigen::VectorXd d;
  Eigen::MatrixXd Sigma;

  // mFBM inputs.
  MfbmParams mfbm;

  WhittleConfig cfg;
};

struct McRow {
  std::string name;
  double truth = 0.0;
  double bias = 0.0;
  double stdev = 0.0;
  double rmse = 0.0;
};

struct McReport {
  std::vector<McRow> rows;
  double runtime_seconds = 0.0;
  int failures = 0;   // replications excluded (estimation failed to converge)
  int reps_used = 0;
};

// Worker parallelism cap: LONGWAVE_THREADS if set, else hardware concurrency.
int worker_threads();

// Deterministic given scenario.seed; replications use derived seeds and run in
// parallel. Phase statistics are computed on circularly wrapped differences.
// Throws AllReplicationsFailed if no replication produced an estimate.
McReport run_mc(const McScenario& sc);

}  // namespace longwave
