// Command-line front end: data ingestion, descriptive statistics, calibration,
// Esscher solving, pricing and simulation with a single JSON document on
// stdout.  Exit codes: 0 success, 2 input error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "config.hpp"
#include "csv_io.hpp"
#include "mrjd/charfn.hpp"
#include "mrjd/density.hpp"
#include "mrjd/ecf_gmm.hpp"
#include "mrjd/esscher.hpp"
#include "mrjd/moments.hpp"
#include "mrjd/pricer.hpp"
#include "mrjd/simulate.hpp"
#include "mrjd/stats.hpp"

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ParamFlags {
  std::string model = "bsch";
  double alpha = 1.0, mu = 0.0, sigma = 0.3, lambda = 0.0;
  double mu_j = 0.0, sigma_j = 0.05;
  double eta1 = 30.0, eta2 = 30.0, q = 0.5;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--model", model, "Model variant")
        ->check(CLI::IsMember({"bsch", "merton", "kou"}));
    cmd->add_option("--alpha", alpha, "Mean-reversion rate");
    cmd->add_option("--mu", mu, "Mean-reversion level");
    cmd->add_option("--sigma", sigma, "Diffusion volatility");
    cmd->add_option("--lambda", lambda, "Jump intensity");
    cmd->add_option("--mu-j", mu_j, "Gaussian jump mean");
    cmd->add_option("--sigma-j", sigma_j, "Gaussian jump std");
    cmd->add_option("--eta1", eta1, "Upward jump rate (Kou)");
    cmd->add_option("--eta2", eta2, "Downward jump rate (Kou)");
    cmd->add_option("--q", q, "Upward jump probability (Kou)");
  }

  mrjd::JumpKind kind() const {
    if (model == "merton") return mrjd::JumpKind::gaussian;
    if (model == "kou") return mrjd::JumpKind::double_exponential;
    return mrjd::JumpKind::none;
  }

  mrjd::ModelParams build() const {
    mrjd::ModelParams p;
    p.alpha = alpha;
    p.mu = mu;
    p.sigma = sigma;
    if (kind() == mrjd::JumpKind::gaussian) {
      p.lambda = lambda > 0.0 ? lambda : 10.0;
      p.jumps = mrjd::JumpSpec::gaussian(mu_j, sigma_j);
    } else if (kind() == mrjd::JumpKind::double_exponential) {
      p.lambda = lambda > 0.0 ? lambda : 10.0;
      p.jumps = mrjd::JumpSpec::double_exponential(eta1, eta2, q);
    }
    p.validate();
    return p;
  }
};

struct InputFlags {
  std::string path;
  std::string date_col = "t";
  std::string price_col = "price";
  double delta = 1.0 / 252.0;
  bool allow_unsorted = false;

  void add_to(CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--input", path, "Input CSV of prices");
    if (required) opt->required();
    cmd->add_option("--date-col", date_col, "Timestamp column name");
    cmd->add_option("--price-col", price_col, "Price column name");
    cmd->add_option("--delta", delta, "Sampling interval in years");
    cmd->add_flag("--allow-unsorted", allow_unsorted,
                  "Sort rows by timestamp instead of rejecting them");
  }

  mrjd::LogReturnSeries load() const {
    const mrjd_cli::PriceSeries prices =
        mrjd_cli::ingest_csv(path, date_col, price_col, allow_unsorted);
    return mrjd::to_logreturns(prices.prices, delta);
  }
};

json params_to_json(const mrjd::ModelParams& p) {
  json j{{"alpha", p.alpha}, {"mu", p.mu}, {"sigma", p.sigma},
         {"lambda", p.lambda}};
  switch (p.jumps.kind) {
    case mrjd::JumpKind::none:
      j["jumps"] = "none";
      break;
    case mrjd::JumpKind::gaussian:
      j["jumps"] = {{"kind", "gaussian"}, {"mu_j", p.jumps.mu_j},
                    {"sigma_j", p.jumps.sigma_j}};
      break;
    case mrjd::JumpKind::double_exponential:
      j["jumps"] = {{"kind", "double_exponential"}, {"eta1", p.jumps.eta1},
                    {"eta2", p.jumps.eta2}, {"q", p.jumps.q}};
      break;
  }
  return j;
}

json result_to_json(const mrjd::CalibrationResult& res) {
  json j;
  j["model"] = res.model == mrjd::JumpKind::none ? "bsch"
               : res.model == mrjd::JumpKind::gaussian ? "merton" : "kou";
  j["estimator"] = res.estimator;
  j["params"] = params_to_json(res.params);
  j["param_names"] = res.param_names;
  if (!res.std_errors.empty()) j["std_errors"] = res.std_errors;
  j["objective"] = res.objective;
  j["grad_norm"] = res.grad_norm;
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  return j;
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << std::endl;
  } else {
    std::ofstream out(out_path);
    if (!out) throw mrjd::invalid_input("cannot open output file: " + out_path);
    out << doc.dump(2) << std::endl;
  }
}

json make_doc(const std::string& command) {
  json doc;
  doc["command"] = command;
  doc["version"] = kVersion;
  doc["inputs"] = json::object();
  doc["results"] = json::object();
  doc["diagnostics"] = json::array();
  return doc;
}

double nan_to_null_guard(double v) { return v; }

json finite_or_null(double v) {
  if (std::isfinite(v)) return json(nan_to_null_guard(v));
  return json();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-reverting jump-diffusion toolkit for exchange-rate "
               "series: calibration, Esscher pricing measure and European "
               "call pricing"};
  app.require_subcommand(1);

  std::string out_path;
  std::string config_path;
  int threads = 1;
  app.add_option("--out", out_path, "Write the JSON document to a file");
  app.add_option("--config", config_path,
                 "Config file (key = value; overrides MEANREV_JD_CONFIG)");
  app.add_option("--threads", threads, "Worker threads for parallel paths");

  // ---- stats ----
  auto* cmd_stats = app.add_subcommand("stats", "Descriptive statistics");
  InputFlags stats_in;
  stats_in.add_to(cmd_stats);

  // ---- fit ----
  auto* cmd_fit = app.add_subcommand("fit", "Calibrate a model");
  InputFlags fit_in;
  fit_in.add_to(cmd_fit);
  ParamFlags fit_params;
  fit_params.add_to(cmd_fit);
  std::string method = "mom";
  bool fix_q = false, fix_mu_j = false;
  cmd_fit->add_option("--method", method, "Estimator")
      ->check(CLI::IsMember({"mom", "mle", "ecf"}));
  cmd_fit->add_flag("--fix-q", fix_q, "Hold q fixed (Kou, method of moments)");
  cmd_fit->add_flag("--fix-mu-j", fix_mu_j,
                    "Hold mu_j fixed (Merton, method of moments)");
  double fit_eta = 0.0;
  int fit_L = 10;
  cmd_fit->add_option("--ecf-eta", fit_eta, "ECF grid half-width (0 = auto)");
  cmd_fit->add_option("--ecf-points", fit_L, "ECF grid point count L");

  // ---- esscher ----
  auto* cmd_esscher =
      app.add_subcommand("esscher", "Solve the martingale condition");
  ParamFlags ess_params;
  ess_params.add_to(cmd_esscher);
  double ess_r = 0.02, ess_T = 1.0, ess_spot = 1.0;
  cmd_esscher->add_option("-r,--rate", ess_r, "Risk-free rate");
  cmd_esscher->add_option("--maturity", ess_T, "Horizon in years");
  cmd_esscher->add_option("--spot", ess_spot, "Spot exchange rate");

  // ---- price ----
  auto* cmd_price = app.add_subcommand("price", "Price a European call");
  ParamFlags price_params;
  price_params.add_to(cmd_price);
  double pr_r = 0.02, pr_T = 1.0, pr_spot = 1.0, pr_strike = 1.0;
  double pr_damping = 0.0;
  std::uint64_t pr_seed = 12345;
  std::size_t pr_paths = 1000000;
  bool use_fft = false, use_quad = false, use_mc = false;
  cmd_price->add_option("-r,--rate", pr_r, "Risk-free rate");
  cmd_price->add_option("--maturity", pr_T, "Maturity in years");
  cmd_price->add_option("--spot", pr_spot, "Spot exchange rate")->required();
  cmd_price->add_option("--strike", pr_strike, "Strike")->required();
  cmd_price->add_option("--damping", pr_damping, "Damping R (0 = automatic)");
  cmd_price->add_flag("--fft", use_fft, "FFT across a log-spot ladder");
  cmd_price->add_flag("--quad", use_quad, "Direct quadrature (default)");
  cmd_price->add_flag("--mc", use_mc, "Monte-Carlo under the tilted measure");
  cmd_price->add_option("--paths", pr_paths, "Monte-Carlo paths");
  cmd_price->add_option("--seed", pr_seed, "Monte-Carlo seed");

  // ---- simulate ----
  auto* cmd_sim = app.add_subcommand("simulate", "Simulate a price series");
  ParamFlags sim_params;
  sim_params.add_to(cmd_sim);
  std::size_t sim_n = 1000;
  double sim_delta = 1.0 / 252.0, sim_spot = 1.0;
  std::uint64_t sim_seed = 12345;
  std::string sim_csv;
  cmd_sim->add_option("--n", sim_n, "Number of log-returns");
  cmd_sim->add_option("--delta", sim_delta, "Sampling interval in years");
  cmd_sim->add_option("--spot", sim_spot, "Initial price level");
  cmd_sim->add_option("--seed", sim_seed, "Seed");
  cmd_sim->add_option("--csv", sim_csv, "Write the price series CSV here")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    const mrjd_cli::Config cfg = config_path.empty()
                                     ? mrjd_cli::Config::from_env()
                                     : mrjd_cli::Config::load(config_path);
    const mrjd_cli::Numerics num = mrjd_cli::Numerics::from(cfg);

    if (*cmd_stats) {
      const mrjd::LogReturnSeries series = stats_in.load();
      const mrjd::DescriptiveStats d = describe(series);
      const mrjd::MomentSet m = empirical_moments(series, 4);
      json doc = make_doc("stats");
      doc["inputs"] = {{"file", stats_in.path}, {"delta", stats_in.delta},
                       {"observations", d.n}};
      doc["results"] = {{"mean", d.mean},
                        {"std_dev", d.std_dev},
                        {"skewness", finite_or_null(d.skewness)},
                        {"kurtosis", finite_or_null(d.kurtosis)},
                        {"raw_moments", {m.m1, m.m2, m.m3, m.m4}}};
      emit(doc, out_path);
    } else if (*cmd_fit) {
      const mrjd::LogReturnSeries series = fit_in.load();
      mrjd::ModelParams init = fit_params.build();
      mrjd::CalibrationResult res;
      if (method == "mom") {
        mrjd::MomFitOptions opts;
        opts.fix_q = fix_q;
        opts.fix_mu_j = fix_mu_j;
        res = mom_fit(series, fit_params.kind(), init, opts);
      } else if (method == "mle") {
        res = mle_fit(series, fit_params.kind(), init);
      } else {
        mrjd::FrequencyGrid fg = mrjd::FrequencyGrid::default_for(series);
        if (fit_eta > 0.0) fg.eta = fit_eta;
        fg.L = fit_L;
        res = gmm_fit(series, fit_params.kind(), fg, init);
      }
      json doc = make_doc("fit");
      doc["inputs"] = {{"file", fit_in.path},
                       {"delta", fit_in.delta},
                       {"observations", series.size()},
                       {"method", method},
                       {"init", params_to_json(init)}};
      doc["results"] = result_to_json(res);
      if (!res.diagnostics.empty()) doc["diagnostics"].push_back(res.diagnostics);
      emit(doc, out_path);
      if (!res.converged) return 3;
    } else if (*cmd_esscher) {
      const mrjd::ModelParams p = ess_params.build();
      mrjd::MarketParams mkt{ess_r, ess_T, ess_spot};
      mrjd::EsscherOptions opts;
      opts.tol_residual = num.esscher_tol_residual;
      opts.tol_theta = num.esscher_tol_theta;
      opts.quad_tol = std::min(num.quad_tol, 1e-12);
      const mrjd::EsscherSolution sol = solve_theta(p, mkt, opts);
      json doc = make_doc("esscher");
      doc["inputs"] = {{"params", params_to_json(p)}, {"r", ess_r},
                       {"maturity", ess_T}, {"spot", ess_spot}};
      doc["results"] = {{"theta_gs", sol.theta_gs},
                        {"residual", sol.residual},
                        {"iterations", sol.iterations},
                        {"bracket", {sol.bracket.first, sol.bracket.second}}};
      emit(doc, out_path);
    } else if (*cmd_price) {
      const mrjd::ModelParams p = price_params.build();
      mrjd::MarketParams mkt{pr_r, pr_T, pr_spot};
      mrjd::OptionSpec opt{pr_strike, pr_T};
      const int chosen = int(use_fft) + int(use_quad) + int(use_mc);
      if (chosen > 1)
        throw mrjd::invalid_input("choose exactly one of --fft/--quad/--mc");
      const double damping = pr_damping > 0.0 ? pr_damping : num.damping;
      json doc = make_doc("price");
      doc["inputs"] = {{"params", params_to_json(p)},  {"r", pr_r},
                       {"maturity", pr_T},             {"spot", pr_spot},
                       {"strike", pr_strike},          {"method",
                        use_fft ? "fft" : (use_mc ? "mc" : "quad")}};
      if (use_fft) {
        mrjd::PricingGrid grid;
        grid.M = num.fft_m;
        grid.n = std::size_t(num.fft_n);
        grid.R = damping > 0.0 ? damping
                               : mrjd::select_damping(
                                     p, mrjd::solve_theta(
                                            p, mrjd::MarketParams{pr_r, pr_T,
                                                                  pr_spot})
                                            .theta_gs);
        const mrjd::FftPriceResult res = price_call_fft(p, mkt, opt, grid);
        doc["results"] = {{"price", res.points[res.spot_index].price},
                          {"theta_gs", res.theta_gs},
                          {"damping", res.damping},
                          {"grid_n", res.n_used},
                          {"quad_gap", res.quad_gap},
                          {"max_imag_ratio", res.max_imag_ratio}};
        json ladder = json::array();
        const std::size_t lo = res.spot_index >= 8 ? res.spot_index - 8 : 0;
        for (std::size_t i = lo;
             i < std::min(res.points.size(), res.spot_index + 9); ++i)
          ladder.push_back({{"spot", res.points[i].spot},
                            {"price", res.points[i].price}});
        doc["results"]["ladder"] = ladder;
      } else if (use_mc) {
        mrjd::SimConfig sc;
        sc.paths = pr_paths;
        sc.seed = pr_seed;
        sc.threads = threads;
        sc.measure = mrjd::Measure::esscher;
        const mrjd::McPrice res = mc_price_call(p, mkt, opt, sc);
        doc["results"] = {{"price", res.price},
                          {"std_error", res.std_error},
                          {"theta_gs", res.theta},
                          {"paths", res.paths},
                          {"effective_sample_size", res.ess}};
        if (res.weight_degeneracy)
          doc["diagnostics"].push_back(
              "importance weights are degenerate (ESS < 1% of paths)");
      } else {
        const mrjd::QuadPriceResult res =
            price_call_quadrature(p, mkt, opt, damping, num.quad_tol);
        doc["results"] = {{"price", res.price},
                          {"theta_gs", res.theta_gs},
                          {"damping", res.damping},
                          {"tail_estimate", res.tail_estimate}};
      }
      emit(doc, out_path);
    } else if (*cmd_sim) {
      const mrjd::ModelParams p = sim_params.build();
      mrjd::SeriesGrid grid{sim_delta, sim_n};
      const mrjd::LogReturnSeries series =
          simulate_logreturn_series(p, grid, sim_seed);
      std::ofstream csv(sim_csv);
      if (!csv) throw mrjd::invalid_input("cannot open " + sim_csv);
      csv.precision(17);
      csv << "t,price\n";
      double level = sim_spot;
      csv << sim_delta << "," << level << "\n";
      for (std::size_t i = 0; i < series.values.size(); ++i) {
        level *= std::exp(series.values[i]);
        csv << (double(i + 2) * sim_delta) << "," << level << "\n";
      }
      const mrjd::DescriptiveStats d = describe(series);
      json doc = make_doc("simulate");
      doc["inputs"] = {{"params", params_to_json(p)}, {"n", sim_n},
                       {"delta", sim_delta}, {"seed", sim_seed},
                       {"spot", sim_spot}};
      doc["results"] = {{"csv", sim_csv},
                        {"prices_written", sim_n + 1},
                        {"return_mean", d.mean},
                        {"return_std", d.std_dev}};
      emit(doc, out_path);
    }
  } catch (const mrjd::invalid_input& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return 2;
  } catch (const mrjd::domain_error& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return 2;
  } catch (const mrjd::numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
  return 0;
}
