// disclab: experiment driver.  Each invocation runs one experiment from a
// JSON config (schema_version 1), writes raw.csv, summary.json and
// config_echo.json into --out, and exits nonzero if a checked invariant
// fails.  Flags override config fields.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "discrelab/discrelab.hpp"
#include "discrelab/experiments.hpp"

using json = nlohmann::json;
using namespace discrelab;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  bool seed_set = false;
  int threads = 0;
  double tolerance = 0.0;
  bool tolerance_set = false;
};

json load_config(const Common& c) {
  json cfg = json::object();
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw std::runtime_error("cannot open config: " + c.config_path);
    in >> cfg;
  }
  int version = cfg.value("schema_version", 1);
  if (version != 1) throw std::runtime_error("unsupported schema_version");
  cfg["schema_version"] = 1;
  if (c.seed_set || !cfg.contains("seed")) cfg["seed"] = c.seed;
  if (c.tolerance_set) cfg["tolerance"] = c.tolerance;
  return cfg;
}

void write_outputs(const Common& c, const json& cfg, const json& summary,
                   const std::string& csv) {
  std::filesystem::create_directories(c.out_dir);
  std::ofstream(c.out_dir + "/config_echo.json") << cfg.dump(2) << "\n";
  std::ofstream(c.out_dir + "/summary.json") << summary.dump(2) << "\n";
  std::ofstream(c.out_dir + "/raw.csv") << csv;
}

DensityField parse_density(const json& cfg, int d) {
  std::string recipe = cfg.value("recipe", "constant");
  if (recipe == "constant") return constant_density(cfg.value("value", 1.0), d);
  if (recipe == "cosine") {
    FreqKey k{0, 0, 0};
    auto arr = cfg.value("mode", std::vector<int>{1});
    for (std::size_t a = 0; a < arr.size() && a < 3; ++a) k[int(a)] = arr[a];
    return cosine_mode(k, cfg.value("amplitude", 1.0), d);
  }
  if (recipe == "bump") {
    DensityField F = periodized_bump(cfg.value("M", 8), d);
    return scale_density(F, cfg.value("dilation", 1));
  }
  if (recipe == "dvp") return dvp_density(cfg.value("n", 4), d);
  if (recipe == "holder") {
    HolderShape sh;
    sh.scale = cfg.value("scale", 1.0);
    sh.levels = cfg.value("levels", 12);
    sh.base = cfg.value("base", 1);
    sh.offset = cfg.value("offset", 0.0);
    return holder_density(cfg.value("beta", 0.5), d, sh);
  }
  throw std::runtime_error("unknown density recipe: " + recipe);
}

WeightedPointSet parse_points(const json& cfg, int d, std::uint64_t seed) {
  std::string type = cfg.value("type", "iid");
  if (type == "file") {
    std::ifstream in(cfg.at("path").get<std::string>());
    if (!in) throw std::runtime_error("cannot open point file");
    return read_point_set(in);
  }
  if (type == "grid") return grid_points(cfg.value("H", 4), d);
  if (type == "jitter")
    return sample_jitter(cube_partition(cfg.value("H", 4), d), seed);
  if (type == "iid") return iid_points(d, cfg.value("N", 64), seed);
  throw std::runtime_error("unknown point set type: " + type);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("config violates hypothesis: " + what);
}

json fit_json(const ScalingFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"residual", f.residual},
          {"points_used", f.points_used}};
}

// --- subcommands ----------------------------------------------------------

int run_discrepancy(const Common& c) {
  json cfg = load_config(c);
  int d = cfg.value("d", 1);
  check_dim(d);
  std::uint64_t seed = cfg["seed"];
  WeightedPointSet ps = parse_points(cfg.value("points", json::object()), d, seed);
  DensityField f = parse_density(cfg.value("density", json::object()), d);
  double M = cfg.value("M_max", 2048.0);
  DiscrepancyReport rep;
  json summary;
  std::ostringstream csv;
  csv << "d,N,mode,value,tail_bound\n";
  if (cfg.contains("r")) {
    double r = cfg["r"];
    require(r > 0.0 && r < 0.5, "0 < r < 1/2");
    rep = avg_sq_x(ps, f, r, M);
    csv << d << "," << ps.size() << ",fixed_r," << rep.value << ","
        << rep.tail_bound << "\n";
    summary["r"] = r;
  } else {
    double a = cfg.value("a", 0.1), b = cfg.value("b", 0.4);
    require(0.0 < a && a < b && b < 0.5, "0 < a < b < 1/2");
    rep = avg_sq_xr(ps, f, a, b, M);
    csv << d << "," << ps.size() << ",radial_avg," << rep.value << ","
        << rep.tail_bound << "\n";
    summary["a"] = a;
    summary["b"] = b;
  }
  summary["value"] = rep.value;
  summary["tail_bound"] = rep.tail_bound;
  summary["cutoff"] = rep.cutoff;
  summary["N"] = ps.size();
  write_outputs(c, cfg, summary, csv.str());
  return 0;
}

int run_scaling(const Common& c) {
  json cfg = load_config(c);
  std::string kind = cfg.value("kind", "lp_sharp");
  int d = cfg.value("d", 1);
  check_dim(d);
  std::vector<int> H = cfg.value("H_list", std::vector<int>{4, 8, 16, 32});
  json summary;
  std::ostringstream csv;
  int rc = 0;
  if (kind == "lp_sharp") {
    double p = cfg.value("p", 2.0);
    require(p > 1.0 && p <= 2.0, "1 < p <= 2");
    SharpResult res = lp_sharp(d, H, cfg.value("bump_M", 8),
                               cfg.value("r", 0.3),
                               cfg.value("K0", d == 1 ? 2048 : 48));
    csv << "N,normalized\n";
    for (auto [N, v] : res.rows) csv << N << "," << v << "\n";
    summary["spread"] = res.spread;
    if (cfg.contains("tolerance") && res.spread > double(cfg["tolerance"]))
      rc = 1;
  } else if (kind == "lp_lower" || kind == "morrey_lower") {
    FloorMode mode = (kind == "lp_lower") ? FloorMode::lp : FloorMode::morrey;
    FloorResult res =
        lower_bound_floor(mode, d, H, cfg.value("a", 0.1), cfg.value("b", 0.4),
                          cfg.value("M_max", d == 1 ? 8192.0 : 300.0),
                          cfg["seed"].get<std::uint64_t>());
    csv << "N,ratio\n";
    for (auto [N, v] : res.rows) csv << N << "," << v << "\n";
    summary["spread"] = res.spread;
    double floor = res.rows.empty() ? 0.0 : res.rows.front().second;
    for (auto [N, v] : res.rows) floor = std::min(floor, v);
    summary["floor"] = floor;
    if (floor <= 0.0) rc = 1;
    if (cfg.contains("tolerance") && res.spread > double(cfg["tolerance"]))
      rc = 1;
  } else if (kind == "holder_rates") {
    double beta = cfg.value("beta", 0.5);
    require(beta > 0.0 && beta <= 1.0, "0 < beta <= 1");
    HolderShape sh;
    sh.scale = cfg.value("scale", 1.0);
    sh.levels = cfg.value("levels", 12);
    sh.base = cfg.value("base", 1);
    sh.offset = cfg.value("offset", 0.0);
    RateTable t = holder_rates(beta, d, H, cfg.value("r", 0.3), sh,
                               cfg.value("M_max", 32768.0));
    csv << "N,J\n";
    for (auto [N, v] : t.rows) csv << N << "," << v << "\n";
    summary["fit"] = fit_json(t.fit);
    double expect = (beta < 0.5) ? -1.0 - 2.0 * beta / d : -1.0 - 1.0 / d;
    summary["expected_slope"] = expect;
    if (cfg.contains("tolerance") &&
        std::abs(t.fit.slope - expect) > double(cfg["tolerance"]))
      rc = 1;
  } else if (kind == "l1_collapse") {
    std::vector<double> Ns =
        cfg.value("N_list", std::vector<double>{8, 64, 512, 4096, 32768});
    CollapseResult res =
        l1_collapse(Ns, cfg.value("r", 0.3), cfg.value("M_max", 50000.0));
    csv << "N,value_over_eps\n";
    for (auto [N, v] : res.rows) csv << N << "," << v << "\n";
    summary["spread"] = res.spread;
    if (cfg.contains("tolerance") && res.spread > double(cfg["tolerance"]))
      rc = 1;
  } else {
    throw std::runtime_error("unknown scaling kind: " + kind);
  }
  summary["kind"] = kind;
  write_outputs(c, cfg, summary, csv.str());
  return rc;
}

int run_jitter(const Common& c) {
  json cfg = load_config(c);
  std::string mode = cfg.value("mode", "rates");
  int d = cfg.value("d", 1);
  check_dim(d);
  json summary;
  std::ostringstream csv;
  int rc = 0;
  if (mode == "rates") {
    std::vector<int> H = cfg.value("H_list", std::vector<int>{2, 4, 8, 16});
    double a = cfg.value("a", 0.1), b = cfg.value("b", 0.4);
    require(0.0 < a && a < b && b < 0.5, "0 < a < b < 1/2");
    JitterRateResult res = jitter_rates(d, H, a, b, cfg.value("r", 0.3));
    csv << "N,radial_avg_J\n";
    for (auto [N, v] : res.radial.rows) csv << N << "," << v << "\n";
    summary["fit"] = fit_json(res.radial.fit);
    summary["upper_const"] = res.upper_const;
    summary["expected_slope"] = -1.0 - 1.0 / d;
    if (cfg.contains("tolerance") &&
        std::abs(res.radial.fit.slope + 1.0 + 1.0 / d) >
            double(cfg["tolerance"]))
      rc = 1;
  } else if (mode == "identity") {
    int H = cfg.value("H", 4);
    double r = cfg.value("r", 0.3);
    require(r > 0.0 && r < 0.5, "0 < r < 1/2");
    int replicates = cfg.value("replicates", 2000);
    require(replicates >= 100, "replicates >= 100");
    PartitionCells cells = cube_partition(H, d);
    DensityField f = parse_density(cfg.value("density", json::object()), d);
    FrequencySet fs = enumerate_lattice(d, cfg.value("M_max", d == 1 ? 256.0 : 48.0));
    JitterEstimate cf = jitter_closed_form(cells, f, r, fs);
    JitterEstimate mc =
        jitter_mc(cells, f, r, fs, replicates, cfg["seed"].get<std::uint64_t>());
    double z = std::abs(mc.mc_value - cf.closed_form) /
               std::max(mc.mc_stderr, 1e-300);
    csv << "N,r,J_closed,J_mc,stderr,tail_bound\n";
    csv << cells.cell_count() << "," << r << "," << cf.closed_form << ","
        << mc.mc_value << "," << mc.mc_stderr << "," << cf.tail_bound << "\n";
    summary["closed_form"] = cf.closed_form;
    summary["mc_value"] = mc.mc_value;
    summary["mc_stderr"] = mc.mc_stderr;
    summary["z_score"] = z;
    if (z > 4.0) rc = 1;
  } else {
    throw std::runtime_error("unknown jitter mode: " + mode);
  }
  summary["mode"] = mode;
  write_outputs(c, cfg, summary, csv.str());
  return rc;
}

int run_morrey(const Common& c) {
  json cfg = load_config(c);
  int d = cfg.value("d", 1);
  check_dim(d);
  double lambda = cfg.value("lambda", double(d) / 2.0);
  require(lambda > 0.0 && lambda <= double(d), "0 < lambda <= d");
  DensityField f = parse_density(cfg.value("density", json::object()), d);
  double norm = morrey_norm(f, lambda);
  double l2 = lp_norm(f, 2.0);
  double imb = morrey_imbedding_const(d, 2.0);
  json summary;
  summary["morrey_norm"] = norm;
  summary["lambda"] = lambda;
  summary["l2_norm"] = l2;
  summary["imbedding_rhs_p2"] = imb * l2;
  bool imb_ok = lambda != double(d) / 2.0 || norm <= imb * l2 * (1.0 + 1e-9);
  summary["imbedding_holds"] = imb_ok;
  std::ostringstream csv;
  csv << "d,lambda,morrey_norm,l2_norm\n";
  csv << d << "," << lambda << "," << norm << "," << l2 << "\n";
  write_outputs(c, cfg, summary, csv.str());
  return imb_ok ? 0 : 1;
}

int run_certify(const Common& c) {
  json cfg = load_config(c);
  json summary;
  std::ostringstream csv;
  int rc = 0;
  if (cfg.contains("points")) {
    int d = cfg.value("d", 1);
    check_dim(d);
    std::uint64_t seed = cfg["seed"];
    WeightedPointSet ps = parse_points(cfg["points"], d, seed);
    require(ps.nonneg, "certificate needs nonnegative weights");
    std::string fam = cfg.value("kernel", "fejer_tensor");
    SpectralKernel k = make_kernel(fam == "smooth_bump"
                                       ? KernelFamily::smooth_bump
                                       : KernelFamily::fejer_tensor,
                                   cfg.value("M", 8), d,
                                   cfg.value("bump_decay", 4));
    CertificateResult r = montgomery_certificate(ps, k);
    csv << "spectral,point_sum,bound\n";
    csv << r.spectral << "," << r.point_sum << "," << r.bound << "\n";
    summary["spectral"] = r.spectral;
    summary["point_sum"] = r.point_sum;
    summary["bound"] = r.bound;
    if (r.spectral < r.bound * (1.0 - 1e-9)) rc = 1;
  } else {
    int n = cfg.value("configs", 50);
    AuditResult res = certificate_audit(n, cfg["seed"].get<std::uint64_t>());
    csv << "configs,violations,worst_rel_gap\n";
    csv << res.configs << "," << res.violations << "," << res.worst_rel_gap
        << "\n";
    summary["configs"] = res.configs;
    summary["violations"] = res.violations;
    summary["worst_rel_gap"] = res.worst_rel_gap;
    if (res.violations > 0 || res.worst_rel_gap > 1e-9) rc = 1;
  }
  write_outputs(c, cfg, summary, csv.str());
  return rc;
}

int run_signed_demo(const Common& c) {
  json cfg = load_config(c);
  double a = cfg.value("a", 0.1), b = cfg.value("b", 0.4);
  require(0.0 < a && a < b && b < 0.5, "0 < a < b < 1/2");
  SignedResult res = signed_weights_demo(cfg.value("k_max", 32), a, b);
  std::ostringstream csv;
  csv << "k,value\n";
  for (auto [k, v] : res.rows) csv << k << "," << v << "\n";
  json summary;
  summary["max_abs_diff"] = res.max_abs_diff;
  summary["fit"] = fit_json(res.fit);
  summary["expected_slope"] = -2.0;
  write_outputs(c, cfg, summary, csv.str());
  double tol = cfg.value("tolerance", 0.3);
  return (res.max_abs_diff < 1e-9 && std::abs(res.fit.slope + 2.0) <= tol) ? 0
                                                                           : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrepancy laboratory experiment driver"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--config", c.config_path, "JSON config file");
  app.add_option("--out", c.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", c.seed, "RNG seed (overrides config)");
  app.add_option("--threads", c.threads, "worker thread count (0 = auto)");
  auto* tol_opt =
      app.add_option("--tolerance", c.tolerance, "tolerance (overrides config)");
  app.add_subcommand("discrepancy", "L2 discrepancy of one configuration");
  app.add_subcommand("scaling", "rate experiments with slope fits");
  app.add_subcommand("jitter", "jittered sampling identity and rates");
  app.add_subcommand("morrey", "Morrey norms and the p=2 imbedding");
  app.add_subcommand("certify", "kernel energy certificate");
  app.add_subcommand("signed-demo", "signed-weight counterexample");
  for (auto* s : app.get_subcommands({})) s->fallthrough();
  CLI11_PARSE(app, argc, argv);
  c.seed_set = seed_opt->count() > 0;
  c.tolerance_set = tol_opt->count() > 0;
  if (c.threads > 0) set_threads(std::size_t(c.threads));
  try {
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "discrepancy") return run_discrepancy(c);
    if (sub == "scaling") return run_scaling(c);
    if (sub == "jitter") return run_jitter(c);
    if (sub == "morrey") return run_morrey(c);
    if (sub == "certify") return run_certify(c);
    return run_signed_demo(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
