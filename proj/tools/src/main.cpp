// Command-line front-end: dump-filters, transform, scalogram, estimate,
// simulate, mc, connect. CSV is the data interface, JSON the machine
// interface. Exit codes: 0 success, 1 user error (diagnostic on stderr),
// 2 numerical failure (structured JSON error on stdout).

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <string>
#include <vector>

#include "io.hpp"
#include "longwave/asymptotics.hpp"
#include "longwave/connectivity.hpp"
#include "longwave/montecarlo.hpp"
#include "longwave/scalogram.hpp"
#include "longwave/simulate.hpp"
#include "longwave/transform.hpp"
#include "longwave/whittle.hpp"

namespace lw = longwave;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "longwave 0.1.0";

lw::FilterVariant parse_variant(const std::string& s) {
  if (s == "cfw-c") return lw::FilterVariant::CfwC;
  if (s == "cfw-pr") return lw::FilterVariant::CfwPr;
  if (s == "daubechies") return lw::FilterVariant::Daubechies;
  throw lw::UserError("unknown filter variant '" + s + "' (expected cfw-c, cfw-pr, daubechies)");
}

lw::ComplexFilterBank make_bank(const std::string& variant, int M, int L) {
  switch (parse_variant(variant)) {
    case lw::FilterVariant::CfwC: return lw::build_cfw_c(M, L);
    case lw::FilterVariant::CfwPr: return lw::build_cfw_pr(M, L);
    default: return lw::build_daubechies(M);
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw lw::UserError("malformed numeric list entry '" + cell + "'");
    }
  }
  if (out.empty()) throw lw::UserError("empty numeric list");
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json cmatrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({{"re", m(r, c).real()}, {"im", m(r, c).imag()}});
    }
    rows.push_back(row);
  }
  return rows;
}

struct FilterOpts {
  std::string variant = "cfw-c";
  int M = 4;
  int L = 4;

  void attach(CLI::App* cmd) {
    cmd->add_option("--filter", variant, "Filter family: cfw-c, cfw-pr, daubechies")
        ->default_val("cfw-c");
    cmd->add_option("--M", M, "Vanishing moments")->default_val(4);
    cmd->add_option("--L", L, "Analyticity degree")->default_val(4);
  }
};

// ---------------------------------------------------------------------------

int cmd_dump_filters(const FilterOpts& fo, const std::string& output,
                     const std::string& taps_output, int grid) {
  const lw::ComplexFilterBank bank = make_bank(fo.variant, fo.M, fo.L);

  Eigen::MatrixXd data(grid, 9);
  for (int i = 0; i < grid; ++i) {
    const double lambda = -std::numbers::pi + (2.0 * std::numbers::pi * i) / (grid - 1.0) * 1.0;
    const lw::cplx hl = bank.hL.freq(lambda), hh = bank.hH.freq(lambda);
    const lw::cplx gl = bank.gL.freq(lambda), gh = bank.gH.freq(lambda);
    data.row(i) << lambda, hl.real(), hl.imag(), hh.real(), hh.imag(), gl.real(), gl.imag(),
        gh.real(), gh.imag();
  }
  lw::io::write_csv(output,
                    {"lambda", "hL_re", "hL_im", "hH_re", "hH_im", "gL_re", "gL_im", "gH_re",
                     "gH_im"},
                    data);

  if (!taps_output.empty()) {
    std::ofstream out = lw::io::open_output(taps_output);
    out << "filter,n,tap\n";
    auto dump = [&](const char* name, const lw::Fir& f) {
      for (std::size_t k = 0; k < f.taps.size(); ++k) {
        out << name << "," << (f.offset + static_cast<int>(k)) << ","
            << lw::io::fmt17(f.taps[k]) << "\n";
      }
    };
    dump("hL", bank.hL);
    dump("hH", bank.hH);
    dump("gL", bank.gL);
    dump("gH", bank.gH);
  }
  return 0;
}

int cmd_transform(const FilterOpts& fo, const std::string& input, const std::string& output,
                  int j_max) {
  const lw::io::Csv csv = lw::io::read_csv(input);
  const lw::ComplexFilterBank bank = make_bank(fo.variant, fo.M, fo.L);
  const lw::WaveletPyramid pyr = lw::pyramid(csv.data, bank, j_max);

  long rows = 0;
  for (long n : pyr.n) rows += n * pyr.p;
  Eigen::MatrixXd data(rows, 5);
  long r = 0;
  for (int j = 1; j <= pyr.j_max; ++j) {
    const Eigen::MatrixXcd& W = pyr.W[j - 1];
    for (long k = 0; k < pyr.n[j - 1]; ++k) {
      for (int c = 0; c < pyr.p; ++c) {
        data.row(r++) << j, static_cast<double>(k), c + 1, W(k, c).real(), W(k, c).imag();
      }
    }
  }
  lw::io::write_csv(output, {"j", "k", "channel", "re", "im"}, data);
  return 0;
}

int cmd_scalogram(const FilterOpts& fo, const std::string& input, const std::string& output,
                  int j_max, bool centered) {
  const lw::io::Csv csv = lw::io::read_csv(input);
  const lw::ComplexFilterBank bank = make_bank(fo.variant, fo.M, fo.L);
  const lw::WaveletPyramid pyr = lw::pyramid(csv.data, bank, j_max);
  const lw::Scalogram sc = lw::scalogram(pyr, centered);

  std::vector<double> rows;
  for (int j = 1; j <= static_cast<int>(sc.I.size()); ++j) {
    if (sc.n[j - 1] == 0) continue;
    const Eigen::MatrixXcd C = lw::wavelet_correlation(sc, j);
    for (int l = 0; l < sc.p; ++l) {
      for (int m = 0; m < sc.p; ++m) {
        rows.insert(rows.end(), {static_cast<double>(j), static_cast<double>(l + 1),
                                 static_cast<double>(m + 1), C(l, m).real(), C(l, m).imag()});
      }
    }
  }
  Eigen::MatrixXd data =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          rows.data(), static_cast<Eigen::Index>(rows.size() / 5), 5);
  lw::io::write_csv(output, {"j", "l", "m", "re", "im"}, data);
  return 0;
}

json fit_to_json(const lw::WhittleFit& fit) {
  json j;
  j["d"] = std::vector<double>(fit.d_hat.data(), fit.d_hat.data() + fit.d_hat.size());
  j["G"] = cmatrix_to_json(fit.G_hat);
  j["omega"] = matrix_to_json(fit.Omega_hat);
  j["phi"] = matrix_to_json(fit.Phi_hat);
  j["rho"] = matrix_to_json(fit.rho_hat);
  j["diagnostics"] = {{"criterion", fit.criterion}, {"iterations", fit.iterations},
                      {"converged", fit.converged}, {"n", fit.n},
                      {"n_j", fit.n_j},           {"j0", fit.j0},
                      {"j1", fit.j1}};
  return j;
}

int cmd_estimate(const FilterOpts& fo, const std::string& input, const std::string& output,
                 int j0, int j1, bool ci, int u_max) {
  const lw::io::Csv csv = lw::io::read_csv(input);
  lw::WhittleConfig cfg;
  cfg.j0 = j0;
  cfg.j1 = j1;
  cfg.M = fo.M;
  cfg.L = fo.L;
  cfg.variant = parse_variant(fo.variant);
  const lw::WhittleFit fit = lw::estimate(csv.data, cfg);

  json out = fit_to_json(fit);
  if (ci) {
    const lw::ComplexFilterBank bank = make_bank(fo.variant, fo.M, fo.L);
    const Eigen::MatrixXd Vd = lw::variance_d_inf(fit.G_hat, fit.d_hat, u_max, bank);
    const int p = static_cast<int>(fit.d_hat.size());
    std::vector<double> se(p), lo(p), hi(p);
    for (int c = 0; c < p; ++c) {
      se[c] = std::sqrt(std::max(Vd(c, c), 0.0) / static_cast<double>(fit.n));
      lo[c] = fit.d_hat[c] - 1.959963984540054 * se[c];
      hi[c] = fit.d_hat[c] + 1.959963984540054 * se[c];
    }
    out["ci"] = {{"se_d", se}, {"d_lower", lo}, {"d_upper", hi}, {"level", 0.95},
                 {"u_max", u_max}};
  }
  std::ofstream f = lw::io::open_output(output);
  f << out.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& model, long N, const std::string& d_list, double rho,
                 const std::string& sigma_list, double r, double eta, std::uint64_t seed,
                 const std::string& output) {
  const std::vector<double> dv = parse_list(d_list);
  const int p = static_cast<int>(dv.size());
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(dv.data(), p);

  Eigen::MatrixXd X;
  if (model == "arfima") {
    std::vector<double> sv(p, 1.0);
    if (!sigma_list.empty()) {
      sv = parse_list(sigma_list);
      if (static_cast<int>(sv.size()) != p) throw lw::UserError("--sigma length must match --d");
    }
    Eigen::MatrixXd Sigma(p, p);
    for (int l = 0; l < p; ++l) {
      for (int m = 0; m < p; ++m) Sigma(l, m) = (l == m ? 1.0 : rho) * sv[l] * sv[m];
    }
    X = lw::sim_arfima0d0(N, d, Sigma, seed);
  } else if (model == "mfbm") {
    lw::MfbmParams mp;
    mp.d = d;
    mp.sigma = Eigen::VectorXd::Ones(p);
    if (!sigma_list.empty()) {
      const std::vector<double> sv = parse_list(sigma_list);
      if (static_cast<int>(sv.size()) != p) throw lw::UserError("--sigma length must match --d");
      mp.sigma = Eigen::Map<const Eigen::VectorXd>(sv.data(), p);
    }
    mp.r = Eigen::MatrixXd::Identity(p, p);
    mp.eta = Eigen::MatrixXd::Zero(p, p);
    for (int l = 0; l < p; ++l) {
      for (int m = 0; m < p; ++m) {
        if (l == m) continue;
        mp.r(l, m) = r;
        mp.eta(l, m) = (l < m ? eta : -eta);
      }
    }
    X = lw::sim_mfbm(N, mp, seed);
  } else {
    throw lw::UserError("unknown model '" + model + "' (expected arfima or mfbm)");
  }

  std::vector<std::string> header;
  for (int c = 0; c < p; ++c) header.push_back("x" + std::to_string(c + 1));
  lw::io::write_csv(output, header, X);
  return 0;
}

lw::McScenario scenario_from_json(const json& j) {
  lw::McScenario sc;
  const std::string model = j.at("model").get<std::string>();
  if (model != "arfima" && model != "mfbm") {
    throw lw::UserError("scenario model must be 'arfima' or 'mfbm'");
  }
  sc.kind = (model == "arfima") ? lw::ModelKind::Arfima0d0 : lw::ModelKind::Mfbm;
  sc.N = j.at("N").get<long>();
  sc.reps = j.value("reps", 100);
  sc.seed = j.value("seed", std::uint64_t{1});

  auto get_vec = [](const json& a) {
    const std::vector<double> v = a.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
  };
  auto get_mat = [](const json& a) {
    const auto rows = a.get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != static_cast<std::size_t>(m.cols())) {
        throw lw::UserError("scenario matrix is ragged");
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    }
    return m;
  };

  if (sc.kind == lw::ModelKind::Arfima0d0) {
    sc.d = get_vec(j.at("d"));
    if (j.contains("Sigma")) {
      sc.Sigma = get_mat(j.at("Sigma"));
    } else {
      const double rho = j.value("rho", 0.0);
      const int p = static_cast<int>(sc.d.size());
      sc.Sigma = Eigen::MatrixXd::Constant(p, p, rho);
      sc.Sigma.diagonal().setOnes();
    }
  } else {
    const json& m = j.at("mfbm");
    sc.mfbm.d = get_vec(m.at("d"));
    sc.mfbm.sigma = get_vec(m.at("sigma"));
    sc.mfbm.r = get_mat(m.at("r"));
    sc.mfbm.eta = get_mat(m.at("eta"));
  }

  if (j.contains("whittle")) {
    const json& w = j.at("whittle");
    sc.cfg.j0 = w.value("j0", 4);
    sc.cfg.j1 = w.value("j1", -1);
    sc.cfg.M = w.value("M", 4);
    sc.cfg.L = w.value("L", 4);
    sc.cfg.variant = parse_variant(w.value("filter", std::string("cfw-c")));
  }
  return sc;
}

int cmd_mc(const std::string& scenario_path, const std::string& output) {
  std::ifstream in(scenario_path);
  if (!in) throw lw::UserError("cannot open scenario file: " + scenario_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw lw::UserError(std::string("malformed scenario JSON: ") + e.what());
  }
  const lw::McScenario sc = scenario_from_json(j);
  const lw::McReport rep = lw::run_mc(sc);

  std::ofstream out = lw::io::open_output(output);
  out << "name,truth,bias,std,rmse\n";
  for (const lw::McRow& row : rep.rows) {
    out << row.name << "," << lw::io::fmt17(row.truth) << "," << lw::io::fmt17(row.bias) << ","
        << lw::io::fmt17(row.stdev) << "," << lw::io::fmt17(row.rmse) << "\n";
  }
  std::cout << "replications: " << rep.reps_used << " used, " << rep.failures
            << " failed; runtime " << rep.runtime_seconds << " s\n";
  return 0;
}

int cmd_connect(const FilterOpts& fo, const std::vector<std::string>& inputs, double threshold,
                int j0, int j1, const std::string& output, std::string edges_output) {
  if (inputs.empty()) throw lw::UserError("connect requires at least one --inputs CSV");
  if (edges_output.empty()) edges_output = output + ".edges.csv";

  lw::WhittleConfig cfg;
  cfg.j0 = j0;
  cfg.j1 = j1;
  cfg.M = fo.M;
  cfg.L = fo.L;
  cfg.variant = parse_variant(fo.variant);

  std::vector<lw::SubjectFit> fits;
  std::vector<std::string> labels;
  for (const std::string& path : inputs) {
    const lw::io::Csv csv = lw::io::read_csv(path);
    if (labels.empty()) labels = csv.header;
    const lw::WhittleFit fit = lw::estimate(csv.data, cfg);
    lw::SubjectFit sf;
    sf.id = path;
    sf.d = fit.d_hat;
    sf.rho = fit.rho_hat;
    sf.phi = fit.Phi_hat;
    fits.push_back(std::move(sf));
  }

  const lw::GroupGraph g = lw::group_graph(fits, threshold, labels);

  auto cls_name = [](lw::EdgeClass c) {
    switch (c) {
      case lw::EdgeClass::Positive: return "positive";
      case lw::EdgeClass::Negative: return "negative";
      default: return "neutral";
    }
  };

  json out;
  out["nodes"] = g.nodes;
  out["threshold"] = g.threshold;
  out["edges"] = json::array();
  for (const lw::GroupEdge& e : g.edges) {
    out["edges"].push_back({{"l", e.l + 1}, {"m", e.m + 1}, {"mean_phase", e.mean_phase},
                            {"class", cls_name(e.cls)}});
  }
  std::ofstream f = lw::io::open_output(output);
  f << out.dump(2) << "\n";

  std::ofstream ec = lw::io::open_output(edges_output);
  ec << "l,m,mean_phase,class\n";
  for (const lw::GroupEdge& e : g.edges) {
    ec << (e.l + 1) << "," << (e.m + 1) << "," << lw::io::fmt17(e.mean_phase) << ","
       << cls_name(e.cls) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet-domain long-memory estimation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // dump-filters
  auto* dumpf = app.add_subcommand("dump-filters", "Emit filter taps and frequency responses");
  FilterOpts dumpf_fo;
  dumpf_fo.attach(dumpf);
  std::string dumpf_out, dumpf_taps;
  int dumpf_grid = 1024;
  dumpf->add_option("--output", dumpf_out, "Frequency-response CSV")->required();
  dumpf->add_option("--taps-output", dumpf_taps, "Optional taps CSV");
  dumpf->add_option("--grid", dumpf_grid, "Frequency grid points")->default_val(1024);

  // transform
  auto* trans = app.add_subcommand("transform", "Dual-tree wavelet transform of a CSV series");
  FilterOpts trans_fo;
  trans_fo.attach(trans);
  std::string trans_in, trans_out;
  int trans_jmax = 10;
  trans->add_option("--input", trans_in, "Input CSV (rows = time, header required)")->required();
  trans->add_option("--output", trans_out, "Output CSV (j,k,channel,re,im)")->required();
  trans->add_option("--jmax", trans_jmax, "Deepest scale")->default_val(10);

  // scalogram
  auto* scal = app.add_subcommand("scalogram", "Per-scale wavelet correlation matrices");
  FilterOpts scal_fo;
  scal_fo.attach(scal);
  std::string scal_in, scal_out;
  int scal_jmax = 10;
  bool scal_centered = false;
  scal->add_option("--input", scal_in, "Input CSV")->required();
  scal->add_option("--output", scal_out, "Output CSV (j,l,m,re,im)")->required();
  scal->add_option("--jmax", scal_jmax, "Deepest scale")->default_val(10);
  scal->add_flag("--centered", scal_centered, "Center coefficients per scale");

  // estimate
  auto* est = app.add_subcommand("estimate", "Wavelet Whittle estimation");
  FilterOpts est_fo;
  est_fo.attach(est);
  std::string est_in, est_out;
  int est_j0 = 4, est_j1 = -1, est_umax = 12;
  bool est_ci = false;
  est->add_option("--input", est_in, "Input CSV")->required();
  est->add_option("--output", est_out, "Output JSON")->required();
  est->add_option("--j0", est_j0, "Finest scale used")->default_val(4);
  est->add_option("--j1", est_j1, "Coarsest scale used (-1: auto)")->default_val(-1);
  est->add_flag("--ci", est_ci, "Add plug-in standard errors and 95% intervals");
  est->add_option("--umax", est_umax, "Cross-scale series truncation for --ci")->default_val(12);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate long-memory series");
  std::string sim_model, sim_d, sim_sigma, sim_out;
  long sim_n = 4096;
  double sim_rho = 0.0, sim_r = 0.0, sim_eta = 0.0;
  std::uint64_t sim_seed = 1;
  sim->add_option("--model", sim_model, "arfima or mfbm")->required();
  sim->add_option("--n", sim_n, "Sample size (power of two)")->required();
  sim->add_option("--d", sim_d, "Comma list of memory parameters")->required();
  sim->add_option("--rho", sim_rho, "Innovation cross-correlation (arfima)");
  sim->add_option("--sigma", sim_sigma, "Comma list of channel scales");
  sim->add_option("--r", sim_r, "Cross-correlation coefficient (mfbm)");
  sim->add_option("--eta", sim_eta, "Asymmetry coefficient (mfbm)");
  sim->add_option("--seed", sim_seed, "RNG seed")->default_val(1);
  sim->add_option("--output", sim_out, "Output CSV")->required();

  // mc
  auto* mc = app.add_subcommand("mc", "Monte-Carlo replication study");
  std::string mc_scenario, mc_out;
  mc->add_option("--scenario", mc_scenario, "Scenario JSON file")->required();
  mc->add_option("--output", mc_out, "Output CSV (name,truth,bias,std,rmse)")->required();

  // connect
  auto* con = app.add_subcommand("connect", "Group connectivity graph from subject CSVs");
  FilterOpts con_fo;
  con_fo.attach(con);
  std::vector<std::string> con_inputs;
  double con_thr = 0.3;
  int con_j0 = 4, con_j1 = -1;
  std::string con_out, con_edges;
  con->add_option("--inputs", con_inputs, "Subject CSV paths")->required()->expected(-1);
  con->add_option("--threshold", con_thr, "Correlation threshold")->default_val(0.3);
  con->add_option("--j0", con_j0, "Finest scale used")->default_val(4);
  con->add_option("--j1", con_j1, "Coarsest scale used (-1: auto)")->default_val(-1);
  con->add_option("--output", con_out, "Output JSON")->required();
  con->add_option("--edges-output", con_edges, "Edge-list CSV (default: <output>.edges.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(dumpf)) {
      return cmd_dump_filters(dumpf_fo, dumpf_out, dumpf_taps, dumpf_grid);
    }
    if (app.got_subcommand(trans)) return cmd_transform(trans_fo, trans_in, trans_out, trans_jmax);
    if (app.got_subcommand(scal)) {
      return cmd_scalogram(scal_fo, scal_in, scal_out, scal_jmax, scal_centered);
    }
    if (app.got_subcommand(est)) {
      return cmd_estimate(est_fo, est_in, est_out, est_j0, est_j1, est_ci, est_umax);
    }
    if (app.got_subcommand(sim)) {
      return cmd_simulate(sim_model, sim_n, sim_d, sim_rho, sim_sigma, sim_r, sim_eta, sim_seed,
                          sim_out);
    }
    if (app.got_subcommand(mc)) return cmd_mc(mc_scenario, mc_out);
    if (app.got_subcommand(con)) {
      return cmd_connect(con_fo, con_inputs, con_thr, con_j0, con_j1, con_out, con_edges);
    }
  } catch (const lw::UserError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const lw::NumericalError& e) {
    json err = {{"error", {{"type", "numerical"}, {"message", e.what()}}}};
    std::cout << err.dump() << "\n";
    return 2;
  }
  return 1;
}
