#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hazd/bandwidth.hpp"
#include "hazd/estimators.hpp"
#include "hazd/hazard_model.hpp"
#include "hazd/kernels.hpp"
#include "hazd/simulate.hpp"
#include "hazd/verify.hpp"

namespace {

constexpr const char* kVersion = "hazd 0.1.0";
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

using nlohmann::json;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// temp + rename so a failed run never leaves a partial file
void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed for " + path);
}

hazd::EventSample ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read input file: " + path);
  std::vector<double> times;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || *end != '\0') {
      if (lineno == 1 && times.empty()) continue;  // header line
      throw std::invalid_argument(path + ": parse error at line " +
                                  std::to_string(lineno));
    }
    if (v <= 0.0)
      throw std::invalid_argument(path + ": non-positive value at line " +
                                  std::to_string(lineno));
    times.push_back(v);
  }
  if (times.empty())
    throw std::invalid_argument(path + ": no event times found");
  return hazd::EventSample(std::move(times));
}

std::vector<double> parse_grid(const std::string& spec) {
  double lo, hi;
  long n;
  char c1, c2;
  std::istringstream ss(spec);
  if (!(ss >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2 ||
      hi <= lo)
    throw std::invalid_argument("bad grid spec (want start:end:count): " +
                                spec);
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

hazd::AssociatedKernel parse_kernel(const std::string& name) {
  if (name == "gamma") return hazd::AssociatedKernel::gamma();
  if (name == "gaussian") return hazd::AssociatedKernel::gaussian();
  if (name == "lognormal") return hazd::AssociatedKernel::lognormal();
  throw std::invalid_argument("unknown kernel: " + name);
}

std::string kernel_name(const hazd::AssociatedKernel& k) {
  switch (k.family) {
    case hazd::KernelFamily::GammaNoInteriorBias: return "gamma";
    case hazd::KernelFamily::GaussianSymmetric: return "gaussian";
    case hazd::KernelFamily::Lognormal: return "lognormal";
  }
  return "unknown";
}

hazd::HazardModel model_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "const-exp")
    return hazd::HazardModel::const_exp(j.at("a").get<double>(),
                                        j.at("c").get<double>(),
                                        j.at("d").get<double>());
  if (family == "abs-linear")
    return hazd::HazardModel::abs_linear(j.at("beta").get<double>());
  if (family == "constant")
    return hazd::HazardModel::constant(j.at("a").get<double>());
  if (family == "bump-mixture") {
    std::vector<hazd::Bump> bumps;
    for (const json& bj : j.at("bumps")) {
      hazd::Bump g;
      g.center = bj.at("center").get<double>();
      g.sd = bj.at("sd").get<double>();
      g.weight = bj.value("weight", 1.0);
      bumps.push_back(g);
    }
    return hazd::HazardModel::bump_mixture(j.at("a").get<double>(), bumps);
  }
  if (family == "tabulated")
    return hazd::HazardModel::tabulated(
        j.at("grid").get<std::vector<double>>(),
        j.at("values").get<std::vector<double>>());
  throw std::invalid_argument("unknown hazard family: " + family);
}

void write_sidecar(const std::string& csv_path, json meta) {
  meta["tool_version"] = kVersion;
  meta["output"] = csv_path;
  write_atomic(csv_path + ".json", meta.dump(2) + "\n");
}

void write_curve(const std::string& path, const hazd::EstimateCurve& curve,
                 json meta) {
  std::ostringstream out;
  out << "t,k_hat,bandwidth\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    out << fmt(curve.grid[i]) << ',' << fmt(curve.values[i]) << ','
        << fmt(curve.bandwidths[i]) << '\n';
  write_atomic(path, out.str());
  write_sidecar(path, std::move(meta));
}

struct Options {
  std::string input, output, scenario_path;
  std::string kernel = "gamma";
  std::string method = "gl-global";
  std::string grid_spec;
  double bandwidth = 0.0;
  double kappa0 = 0.03, kappa1 = 20.0, epsilon = 0.5;
  std::size_t k_neighbors = 60;
  std::uint64_t seed = 1;
  int threads = 0;
  bool quick = false;
  double verify_t = 1.0, verify_b = 0.1;
};

std::vector<double> default_grid(const hazd::EventSample& sample) {
  const std::size_t q =
      std::min(sample.m() - 1,
               static_cast<std::size_t>(0.99 * static_cast<double>(sample.m())));
  const double hi = sample.times[q];
  std::vector<double> g(512);
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = hi * static_cast<double>(i) / 511.0;
  return g;
}

int cmd_estimate(const Options& opt) {
  const hazd::EventSample sample = ingest_csv(opt.input);
  const hazd::AssociatedKernel kernel = parse_kernel(opt.kernel);
  const std::vector<double> grid = opt.grid_spec.empty()
                                       ? default_grid(sample)
                                       : parse_grid(opt.grid_spec);
  hazd::EstimateCurve curve;
  std::string method = opt.method;
  if (opt.bandwidth > 0.0) method = "fixed";
  if (method == "fixed") {
    curve = hazd::estimate_curve(sample, kernel, opt.bandwidth, grid);
  } else {
    hazd::PenaltyConfig cfg;
    cfg.kappa0 = opt.kappa0;
    cfg.kappa1 = opt.kappa1;
    cfg.epsilon = opt.epsilon;
    if (method == "gl-global" || method == "gl-local") {
      const hazd::BandwidthGrid bg = method == "gl-local"
                                         ? hazd::grid_local(sample.m())
                                         : hazd::grid_global(sample.m());
      cfg.k_sup = hazd::k_sup_plugin(sample, kernel, bg, grid);
      if (method == "gl-global") {
        const double b =
            hazd::select_global(sample, kernel, bg, cfg, grid).first;
        curve = hazd::estimate_curve(sample, kernel, b, grid);
        curve.method = hazd::EstimateMethod::GlGlobal;
      } else {
        curve.grid = grid;
        curve.kernel = kernel;
        curve.method = hazd::EstimateMethod::GlLocal;
        curve.values.resize(grid.size());
        curve.bandwidths.resize(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g) {
          const double b =
              hazd::select_local(sample, kernel, bg, cfg, grid[g]).first;
          curve.bandwidths[g] = b;
          curve.values[g] = hazd::hazard_estimate(sample, kernel, b, grid[g]);
        }
      }
    } else if (method == "cv") {
      const hazd::BandwidthGrid bg = hazd::grid_global(sample.m());
      const double b = hazd::select_cv(sample, kernel, bg, grid).first;
      curve = hazd::estimate_curve(sample, kernel, b, grid);
      curve.method = hazd::EstimateMethod::CrossValidation;
    } else if (method == "knn") {
      curve.grid = grid;
      curve.kernel = kernel;
      curve.method = hazd::EstimateMethod::NearestNeighbor;
      curve.values.resize(grid.size());
      curve.bandwidths.resize(grid.size());
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double b = hazd::knn_bandwidth(sample, opt.k_neighbors, grid[g]);
        curve.bandwidths[g] = b;
        curve.values[g] = hazd::hazard_estimate(sample, kernel, b, grid[g]);
      }
    } else if (method == "ratio") {
      curve.grid = grid;
      curve.kernel = kernel;
      curve.method = hazd::EstimateMethod::Ratio;
      curve.values.resize(grid.size());
      curve.bandwidths.assign(grid.size(), opt.bandwidth > 0 ? opt.bandwidth
                                                             : 0.5);
      for (std::size_t g = 0; g < grid.size(); ++g)
        curve.values[g] = hazd::ratio_estimate(
            sample, kernel, curve.bandwidths[g], std::max(grid[g], 1e-8));
    } else {
      throw std::invalid_argument("unknown method: " + method);
    }
  }
  json meta = {{"command", "estimate"},
               {"kernel", kernel_name(kernel)},
               {"method", method},
               {"m", sample.m()},
               {"seed", opt.seed},
               {"input", opt.input}};
  write_curve(opt.output, curve, std::move(meta));
  return 0;
}

int cmd_select(const Options& opt) {
  const hazd::EventSample sample = ingest_csv(opt.input);
  const hazd::AssociatedKernel kernel = parse_kernel(opt.kernel);
  const std::vector<double> grid = opt.grid_spec.empty()
                                       ? default_grid(sample)
                                       : parse_grid(opt.grid_spec);
  const hazd::BandwidthGrid bg = opt.method == "gl-local"
                                     ? hazd::grid_local(sample.m())
                                     : hazd::grid_global(sample.m());
  hazd::PenaltyConfig cfg;
  cfg.kappa0 = opt.kappa0;
  cfg.kappa1 = opt.kappa1;
  cfg.epsilon = opt.epsilon;
  cfg.k_sup = hazd::k_sup_plugin(sample, kernel, bg, grid);
  hazd::SelectionTrace trace;
  if (opt.method == "gl-local") {
    trace = hazd::select_local(sample, kernel, bg, cfg, opt.verify_t).second;
  } else if (opt.method == "gl-global") {
    trace = hazd::select_global(sample, kernel, bg, cfg, grid).second;
  } else if (opt.method == "cv") {
    trace = hazd::select_cv(sample, kernel, bg, grid).second;
  } else {
    throw std::invalid_argument("unknown selection method: " + opt.method);
  }
  std::ostringstream out;
  out << "bandwidth,a_term,v_term,criterion\n";
  for (const auto& r : trace.records)
    out << fmt(r.b) << ',' << fmt(r.a_term) << ',' << fmt(r.v_term) << ','
        << fmt(r.criterion) << '\n';
  write_atomic(opt.output, out.str());
  write_sidecar(opt.output, json{{"command", "select"},
                                 {"kernel", kernel_name(kernel)},
                                 {"method", opt.method},
                                 {"chosen", trace.chosen},
                                 {"k_sup", cfg.k_sup},
                                 {"m", sample.m()}});
  std::cout << "chosen bandwidth: " << fmt(trace.chosen) << "\n";
  return 0;
}

int cmd_verify_kernel(const Options& opt) {
  const hazd::AssociatedKernel kernel = parse_kernel(opt.kernel);
  hazd::AssumptionProbe probe;
  probe.t_grid = {0.0, 0.1, 1.0, 10.0};
  probe.b_grid = {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.35, 0.5};
  const hazd::HazardModel model =
      hazd::HazardModel::const_exp(7e-3, 3e-2, 7e-2);
  probe.model = &model;
  const hazd::AssumptionReport report = hazd::check_assumptions(kernel, probe);
  if (!opt.output.empty())
    write_atomic(opt.output, report.to_json() + "\n");
  for (const auto& c : report.checks) {
    std::cout << c.id << ": " << (c.pass ? "pass" : "FAIL");
    if (!c.note.empty()) std::cout << "  (" << c.note << ")";
    std::cout << "\n";
  }
  return report.all_pass() ? 0 : kExitNumeric;
}

json scenario_json(const Options& opt) {
  std::ifstream in(opt.scenario_path);
  if (!in)
    throw std::invalid_argument("cannot read scenario: " + opt.scenario_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(opt.scenario_path + ": " + e.what());
  }
  return j;
}

int cmd_reproduce_table(const Options& opt) {
  const json j = scenario_json(opt);
  hazd::TableScenario sc{model_from_json(j.at("hazard"))};
  sc.t_lo = j.value("t_lo", 0.0);
  sc.t_hi = j.value("t_hi", 600.0);
  sc.grid_points = j.value("grid_points", std::size_t{512});
  sc.fixed_bandwidth = j.value("fixed_bandwidth", 0.5);
  sc.k_neighbors = j.value("k_neighbors", std::size_t{60});
  std::vector<hazd::TableMethod> methods;
  for (const json& mj : j.at("methods"))
    methods.push_back(hazd::parse_method(mj.get<std::string>()));
  const auto m_list = j.at("m_list").get<std::vector<std::size_t>>();
  std::size_t reps = j.value("reps", std::size_t{50});
  if (opt.quick) reps = 10;
  const std::uint64_t seed = j.value("seed", opt.seed);
  const hazd::McReport report =
      hazd::run_table(sc, methods, m_list, reps, seed, opt.threads);
  std::ostringstream out;
  out << "m,method,mise_mean,mise_sd,mse0_mean,mse0_sd\n";
  for (const auto& r : report.rows)
    out << r.m << ',' << r.method << ',' << fmt(r.mise_mean) << ','
        << fmt(r.mise_sd) << ',' << fmt(r.mse0_mean) << ',' << fmt(r.mse0_sd)
        << '\n';
  write_atomic(opt.output, out.str());
  write_sidecar(opt.output, json{{"command", "reproduce-table"},
                                 {"scenario", opt.scenario_path},
                                 {"replications", reps},
                                 {"master_seed", seed},
                                 {"wall_time_s", report.wall_time_s}});
  return 0;
}

int cmd_simulate(const Options& opt) {
  const json j = scenario_json(opt);
  const hazd::HazardModel model = model_from_json(j.at("hazard"));
  const std::size_t m = j.at("m").get<std::size_t>();
  const std::uint64_t seed = j.value("seed", opt.seed);
  const hazd::EventSample sample = hazd::sample_event_times(model, m, seed);
  std::ostringstream out;
  out << "time\n";
  for (double t : sample.times) out << fmt(t) << '\n';
  write_atomic(opt.output, out.str());
  write_sidecar(opt.output, json{{"command", "simulate"},
                                 {"scenario", opt.scenario_path},
                                 {"m", m},
                                 {"seed", seed}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonparametric hazard-rate estimation with associated kernels"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options opt;

  auto* est = app.add_subcommand("estimate", "Estimate a hazard curve");
  est->add_option("--input", opt.input, "CSV of event times")->required();
  est->add_option("--output", opt.output, "Output CSV path")->required();
  est->add_option("--kernel", opt.kernel, "gamma|gaussian|lognormal");
  est->add_option("--method", opt.method,
                  "gl-global|gl-local|cv|knn|ratio|fixed");
  est->add_option("--grid", opt.grid_spec, "start:end:count");
  est->add_option("--bandwidth", opt.bandwidth, "Fixed bandwidth");
  est->add_option("--k-neighbors", opt.k_neighbors, "k for knn");
  est->add_option("--kappa0", opt.kappa0, "Local penalty constant");
  est->add_option("--kappa1", opt.kappa1, "Global penalty constant");
  est->add_option("--epsilon", opt.epsilon, "Penalty epsilon");

  auto* sel = app.add_subcommand("select", "Bandwidth selection trace");
  sel->add_option("--input", opt.input)->required();
  sel->add_option("--output", opt.output)->required();
  sel->add_option("--kernel", opt.kernel);
  sel->add_option("--method", opt.method, "gl-global|gl-local|cv");
  sel->add_option("--grid", opt.grid_spec);
  sel->add_option("--t", opt.verify_t, "Evaluation point for gl-local");
  sel->add_option("--kappa0", opt.kappa0);
  sel->add_option("--kappa1", opt.kappa1);
  sel->add_option("--epsilon", opt.epsilon);

  auto* sim = app.add_subcommand("simulate", "Sample event times from a model");
  sim->add_option("--scenario", opt.scenario_path, "Scenario JSON")->required();
  sim->add_option("--output", opt.output)->required();
  sim->add_option("--seed", opt.seed);

  auto* ver = app.add_subcommand("verify-kernel", "Assumption conformance");
  ver->add_option("--kernel", opt.kernel);
  ver->add_option("--output", opt.output, "JSON report path");

  auto* tab = app.add_subcommand("reproduce-table", "Monte-Carlo table");
  tab->add_option("--scenario", opt.scenario_path)->required();
  tab->add_option("--output", opt.output)->required();
  tab->add_option("--seed", opt.seed);
  tab->add_option("--threads", opt.threads, "Worker threads (0 = auto)");
  tab->add_flag("--quick", opt.quick, "10 replications instead of 50");

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed()) return cmd_estimate(opt);
    if (sel->parsed()) return cmd_select(opt);
    if (sim->parsed()) return cmd_simulate(opt);
    if (ver->parsed()) return cmd_verify_kernel(opt);
    if (tab->parsed()) return cmd_reproduce_table(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
