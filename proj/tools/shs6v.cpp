#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shs6v/duality.hpp"
#include "shs6v/enumerate.hpp"
#include "shs6v/experiments.hpp"
#include "shs6v/hopfcole.hpp"
#include "shs6v/kernels.hpp"
#include "shs6v/sd_diagnostics.hpp"
#include "shs6v/stationary.hpp"
#include "shs6v/weights.hpp"

using namespace shs6v;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::uint64_t seed = 42;
  int threads = 0;
  std::string out;
};

// Raw (q, alpha) or scaled (b, rho, eps) parameters; scaled wins when eps is given.
struct ParamOpts {
  double q = 2.0, alpha = -0.1;
  int I = 2, J = 1;
  double b = 0.8, rho = 1.0, eps = 0.0;

  void add(CLI::App* app) {
    app->add_option("--q", q, "q > 1 (raw mode)");
    app->add_option("--alpha", alpha, "alpha (raw mode)");
    app->add_option("--I", I, "vertical spin I");
    app->add_option("--J", J, "horizontal spin J");
    app->add_option("--b", b, "b (scaled mode)");
    app->add_option("--rho", rho, "density rho in (0, I)");
    app->add_option("--eps", eps, "eps > 0 selects scaled mode");
  }
  ModelParams make() const {
    ModelParams p = eps > 0.0 ? ModelParams::make_scaled(I, J, b, rho, eps) : ModelParams::make(q, I, J, alpha);
    p.require_condition1();
    return p;
  }
};

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
  return v;
}

void output(const Globals& g, const std::string& text) {
  if (g.out.empty())
    std::cout << text;
  else
    write_text(g.out, text);
}

InitialKind parse_init(const std::string& s) {
  if (s == "product") return InitialKind::ProductPiRho;
  if (s == "step") return InitialKind::Step;
  if (s == "flat") return InitialKind::Flat;
  throw ParameterError("unknown initial data '" + s + "' (product, step, flat)");
}

Boundary parse_mode(const std::string& s) {
  if (s == "left-finite") return Boundary::LeftFinite;
  if (s == "truncated") return Boundary::Truncated;
  if (s == "source") return Boundary::StationarySource;
  throw ParameterError("unknown boundary '" + s + "' (left-finite, truncated, source)");
}

// Flat key = value file; keys are long option names of the subcommand or the root. Options given on the
// command line win.
void apply_config(CLI::App& root, CLI::App* sub, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IOError("cannot read config " + path);
  std::string line;
  int ln = 0;
  while (std::getline(f, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto eq = line.find('=');
    auto trim = [](std::string v) {
      v.erase(0, v.find_first_not_of(" \t\r"));
      v.erase(v.find_last_not_of(" \t\r") + 1);
      return v;
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw ParameterError(path + ":" + std::to_string(ln) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    CLI::Option* o = sub->get_option_no_throw("--" + key);
    if (!o) o = root.get_option_no_throw("--" + key);
    if (!o || key == "config") throw ParameterError(path + ":" + std::to_string(ln) + ": unknown key '" + key + "'");
    if (o->count() > 0) continue;
    o->add_result(value);
    o->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shs6v: stochastic higher-spin six-vertex model toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--threads", g.threads, "OpenMP threads (0: runtime default)");
  app.add_option("--out", g.out, "output file (default stdout)");

  // weights
  ParamOpts wp;
  bool dd = false, no_validate = false;
  std::string row_spec;
  auto* weights = app.add_subcommand("weights", "fused vertex weight table L^(J) as CSV");
  weights->add_option("--row", row_spec, "only the row i1,j1");
  wp.add(weights);
  weights->add_flag("--dd", dd, "evaluate in double-double");
  weights->add_flag("--no-validate", no_validate, "skip the stochastic-regime check");

  // simulate
  ParamOpts sp;
  int width = 40;
  long steps = 10, every = 0;
  std::string init = "product", mode = "truncated";
  double density = 1.0;
  bool fused = false;
  auto* simulate = app.add_subcommand("simulate", "run one trajectory, CSV of occupancies and heights");
  sp.add(simulate);
  simulate->add_option("--width", width, "window width");
  simulate->add_option("--steps", steps, "number of steps");
  simulate->add_option("--every", every, "record every k steps (0: final only)");
  simulate->add_option("--init", init, "product | step | flat");
  simulate->add_option("--density", density, "density for product/flat data");
  simulate->add_option("--mode", mode, "left-finite | truncated | source");
  simulate->add_flag("--fused", fused, "fused steps with the L^(J) table");
  std::string sim_cfg;
  simulate->add_option("--config", sim_cfg, "flat key = value file using the option names (q, alpha, I, J, width, ...)");

  // stationary
  ParamOpts stp;
  double h = 0.0;
  auto* stationary = app.add_subcommand("stationary", "stationary law and scaling-theory coefficients");
  stp.add(stationary);
  stationary->add_option("--step", h, "step of the second difference (0: max(1e-3, eps^(1/4)))");

  // duality-check
  ParamOpts dp;
  std::string dmode = "H", config = "1,0,2,1,0", points = "2,3";
  bool exact = false, mc = false;
  int dsteps = 1;
  long replicas = 1000000, t0 = 0;
  auto* duality = app.add_subcommand("duality-check", "both sides of a duality identity");
  dp.add(duality);
  duality->add_option("--mode", dmode, "H | G | tiltZ | tiltD");
  duality->add_flag("--exact", exact, "exact enumeration (default)");
  duality->add_flag("--mc", mc, "Monte Carlo left side");
  duality->add_option("--steps", dsteps, "number of unfused steps");
  duality->add_option("--t0", t0, "starting time");
  duality->add_option("--config", config, "window occupancies starting at x = 0");
  duality->add_option("--x", points, "duality points (integer labels)");
  duality->add_option("--replicas", replicas, "Monte Carlo replicas");

  // kernel
  ParamOpts kp;
  long kt = 2, ks = 0, x1 = 0, x2 = 1, y1 = 0, y2 = 1;
  bool tilted = false, oracle = false;
  auto* kernel = app.add_subcommand("kernel", "two-particle reversed transition probability");
  kp.add(kernel);
  kernel->add_option("--t", kt, "final time");
  kernel->add_option("--s", ks, "initial time");
  kernel->add_option("--x1", x1);
  kernel->add_option("--x2", x2);
  kernel->add_option("--y1", y1);
  kernel->add_option("--y2", y2);
  kernel->add_flag("--tilted", tilted, "tilted kernel V at integer labels (uses --rho)");
  kernel->add_flag("--oracle", oracle, "compare with the dense reversed chain");

  // she-check
  ParamOpts hp;
  int hwin = 5, hsteps = 3;
  bool trend = false;
  hp.eps = 0.04;
  auto* she = app.add_subcommand("she-check", "discrete SHE identity gaps by one-step enumeration");
  hp.add(she);
  she->add_option("--window", hwin, "window width");
  she->add_option("--steps", hsteps, "trajectory steps at which the identities are checked");
  she->add_flag("--trend", trend, "also report the eps-trend of eps^-1 Theta1 Theta2 / Z^2 - tau");

  // kpz-scan
  std::string cfg_path;
  auto* scan = app.add_subcommand("kpz-scan", "KPZ-scaling scan of the fluctuation field");
  scan->add_option("--config", cfg_path, "flat key=value configuration file")->required();

  // sd
  ParamOpts dgp;
  dgp.eps = 0.01;
  double u = kSdU;
  int grid = 10000;
  auto* sd = app.add_subcommand("sd", "steepest-descent contour diagnostics");
  dgp.add(sd);
  sd->add_option("--u", u, "enlargement of M(u)");
  sd->add_option("--grid", grid, "number of angles");

  CLI11_PARSE(app, argc, argv);
  if (g.threads > 0) omp_set_num_threads(g.threads);

  try {
    if (*weights) {
      ModelParams p = no_validate ? (wp.eps > 0 ? ModelParams::make_scaled(wp.I, wp.J, wp.b, wp.rho, wp.eps)
                                                : ModelParams::make(wp.q, wp.I, wp.J, wp.alpha))
                                  : wp.make();
      VertexWeightTable t =
          build_table(p, p.alpha, p.J, !no_validate, dd ? Precision::DoubleDouble : Precision::Double);
      std::vector<int> row = row_spec.empty() ? std::vector<int>{} : parse_ints(row_spec);
      if (!row.empty() && row.size() != 2) throw ParameterError("--row expects i1,j1");
      std::string s = "i1,j1,i2,j2,weight\n";
      char buf[32];
      for (int i1 = 0; i1 <= p.I; ++i1)
        for (int j1 = 0; j1 <= p.J; ++j1) {
          if (!row.empty() && (row[0] != i1 || row[1] != j1)) continue;
          for (int i2 = 0; i2 <= p.I; ++i2) {
            int j2 = i1 + j1 - i2;
            if (j2 < 0 || j2 > p.J) continue;
            std::snprintf(buf, sizeof buf, "%.17g", t.at(i1, j1, i2, j2));
            s += std::to_string(i1) + "," + std::to_string(j1) + "," + std::to_string(i2) + "," + std::to_string(j2) +
                 "," + buf + "\n";
          }
        }
      output(g, s);
    } else if (*simulate) {
      if (!sim_cfg.empty()) apply_config(app, simulate, sim_cfg);
      ModelParams p = sp.make();
      OccupancyWindow w = make_initial(p, parse_init(init), 0, width, density, parse_mode(mode), g.seed);
      Environment env{g.seed};
      VertexWeightTable tab;
      if (fused) tab = build_table(p, p.alpha, p.J);
      std::string s = "t,x,eta,N\n";
      auto dump = [&](long t) {
        for (long x = w.x_left; x <= w.x_right(); ++x)
          s += std::to_string(t) + "," + std::to_string(x) + "," + std::to_string(w.at(x)) + "," +
               std::to_string(w.height(x)) + "\n";
      };
      for (long t = 0; t < steps; ++t) {
        if (every > 0 && t % every == 0) dump(t);
        w = fused ? step_fused(tab, w, t, env).next : step_unfused(p, w, t, env).next;
      }
      dump(steps);
      output(g, s);
    } else if (*stationary) {
      if (!(stp.eps > 0)) throw ParameterError("stationary needs scaled mode (--eps > 0)");
      ModelParams p = stp.make();
      StationaryDist d = stationary_dist(p, stp.rho);
      KpzCoefficients kc = kpz_coefficients(p);
      LambdaMu lm = fused_lambda_mu(p, stp.rho);
      json j;
      j["params"] = p.describe();
      j["chi"] = d.chi;
      j["pmf"] = d.pmf;
      j["mean"] = d.mean;
      j["variance"] = d.variance;
      j["variance_formula"] = stationary_variance_formula(p, d.chi);
      j["lambda"] = lm.lambda;
      j["mu"] = lm.mu;
      j["A"] = integrated_covariance_A(p, stp.rho);
      j["j"] = steady_current_j(p, stp.rho);
      j["h"] = h > 0 ? h : default_j_step(p);
      j["neg_j2"] = neg_j_second_derivative(p, stp.rho, h);
      j["V_star"] = kc.V_star;
      j["D_star"] = kc.D_star;
      j["J_V_star"] = p.J * kc.V_star;
      output(g, j.dump(2) + "\n");
    } else if (*duality) {
      ModelParams p = dp.make();
      DualityQuery q;
      q.mode = parse_duality_mode(dmode);
      q.method = mc ? DualityMethod::MonteCarlo : DualityMethod::Exact;
      q.initial = make_initial(p, InitialKind::Custom, 0, int(parse_ints(config).size()), 0.0, Boundary::LeftFinite,
                               g.seed, parse_ints(config));
      for (int v : parse_ints(points)) q.x.push_back(v);
      q.steps = dsteps;
      q.t0 = t0;
      q.rho = dp.rho;
      q.replicas = replicas;
      q.seed = g.seed;
      DualityReport r = verify_duality(p, q);
      json j;
      j["mode"] = to_string(q.mode);
      j["method"] = mc ? "mc" : "exact";
      j["steps"] = dsteps;
      j["lhs"] = r.lhs;
      j["rhs"] = r.rhs;
      j["gap"] = r.gap;
      j["tail_mass"] = r.tail_mass;
      if (mc) {
        j["sigma"] = r.sigma;
        j["replicas"] = r.replicas;
      }
      output(g, j.dump(2) + "\n");
    } else if (*kernel) {
      ModelParams p = kp.make();
      if (p.I < 2) throw ParameterError("two-particle kernel needs I >= 2");
      json j;
      const long lo = std::min(y1, y2), span = std::max(x1, x2) - lo;
      if (tilted) {
        TwoParticleKernel V(p, kt, ks, int(span), kp.rho);
        j["value"] = V(x1, x2, y1, y2);
        j["nodes"] = V.nodes();
      } else {
        TwoParticleKernel P(p, kt, ks, int(span));
        double v = P(x1, x2, y1, y2);
        j["value"] = v;
        j["nodes"] = P.nodes();
        if (oracle) {
          auto law = reversed_distribution(p, {x1, x2}, kt, ks, lo);
          auto it = law.find({y1, y2});
          double o = it == law.end() ? 0.0 : it->second;
          j["oracle"] = o;
          j["gap"] = std::fabs(v - o);
        }
      }
      output(g, j.dump(2) + "\n");
    } else if (*she) {
      ModelParams p = hp.make();
      TiltFrame f = TiltFrame::make(p, hp.rho);
      OccupancyWindow w = make_initial(p, InitialKind::ProductPiRho, 0, hwin, hp.rho, Boundary::Truncated, g.seed);
      w.base = -w.particles() / 2;
      Environment env{g.seed};
      double mean_gap = 0, qv_gap = 0, sum_gap = 0, dec_gap = 0;
      for (long t = 0; t < hsteps; ++t) {
        for (long a = w.x_left; a <= w.x_right(); ++a)
          for (long b = a; b <= w.x_right(); ++b) {
            QvReport r = quadratic_variation_check(f, w, t, a, b);
            mean_gap = std::max({mean_gap, std::fabs(r.mean_M1), std::fabs(r.mean_M2)});
            qv_gap = std::max(qv_gap, r.gap);
            sum_gap = std::max(sum_gap, r.theta_sum_gap);
          }
        StepRecord st = step_unfused(p, w, t, env);
        dec_gap = std::max(dec_gap, she_decompose(f, w, st, t).max_rel_gap);
        w = st.next;
      }
      json j;
      j["params"] = p.describe();
      j["window"] = hwin;
      j["steps"] = hsteps;
      j["max_mean_M"] = mean_gap;
      j["max_qv_gap"] = qv_gap;
      j["max_theta_sum_gap"] = sum_gap;
      j["max_decomposition_rel_gap"] = dec_gap;
      if (trend) {
        if (!(hp.eps > 0)) throw ParameterError("--trend needs scaled mode");
        auto& tr = j["trend"] = json::array();
        for (const auto& r : tau_trend(p.I, p.J, p.scaled->b, hp.rho, {0.04, 0.01, 0.0025}, 10000, 200, g.seed))
          tr.push_back({{"epsilon", r.epsilon}, {"mean", r.mean}, {"stderr", r.stderr_}, {"samples", r.samples}});
      }
      output(g, j.dump(2) + "\n");
    } else if (*scan) {
      ExperimentConfig c = load_config(cfg_path);
      if (app.get_option("--seed")->count() > 0) c.seed = g.seed;
      if (!g.out.empty()) {
        c.csv = g.out;
        std::string stem = g.out;
        if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
        if (c.json.empty()) c.json = stem + ".json";
      }
      ScanResult r = kpz_scan(c);
      if (c.csv.empty() && c.json.empty())
        std::cout << scan_csv(r);
      else
        emit(r);
    } else if (*sd) {
      if (!(dgp.eps > 0)) throw ParameterError("sd needs scaled mode (--eps > 0)");
      ModelParams p = dgp.make();
      const int I = p.I, J = p.J;
      const double b = p.scaled->b;
      ContourSpec m{ContourKind::ShiftedCircle, double(I) / (I + 1), 0.0, 0.0, 0};
      ContourSpec mu{ContourKind::ClippedShifted, 0.0, 0.0, u, 0};
      SdReport a = sd_diagnostics(I, J, b, m, grid), c = sd_diagnostics(I, J, b, mu, grid);
      double dev = 0.0;
      for (int k = 0; k < 256; ++k) {
        double th = -M_PI + (k + 0.5) * 2.0 * M_PI / 256;
        double r = implicit_radius([&](cplx z) { return sd_p_eps(p, dgp.rho, z); }, I, th);
        dev = std::max(dev, std::fabs(r - double(I) / (I + 1)));
      }
      json j;
      j["I"] = I;
      j["J"] = J;
      j["b"] = b;
      j["M"] = {{"max_D", a.max_D}, {"max_H", a.max_H}, {"max_zp_dev", a.max_zp_dev}, {"points", a.points}};
      j["M_u"] = {{"u", u}, {"max_D", c.max_D}, {"max_H", c.max_H}, {"points", c.points}};
      j["implicit_radius_dev_eps"] = dev;
      output(g, j.dump(2) + "\n");
    }
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
