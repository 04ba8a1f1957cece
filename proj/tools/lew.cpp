// lew: loop-erased walk determinants, Monte Carlo verification, continuum
// kernels and random-matrix limit checks.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lew/hitting.hpp"
#include "lew/identities.hpp"
#include "lew/kernels.hpp"
#include "lew/lattice.hpp"
#include "lew/monte_carlo.hpp"
#include "lew/report.hpp"
#include "lew/rmt.hpp"

using lew::report::json;

namespace {

struct GlobalOpts {
  uint64_t seed = 0;
  int threads = 1;
  bool no_timestamp = false;
  std::string out;
};

std::vector<lew::VertexId> parse_vertices(const std::string& s) {
  std::vector<lew::VertexId> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw lew::DomainError("vertex must be col,row");
    out.push_back(lew::VertexId{std::stoi(item.substr(0, comma)),
                                std::stoi(item.substr(comma + 1))});
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

// default counterclockwise endpoints: columns floor((n-k) M / n), k = 1..n
std::vector<lew::VertexId> default_columns(int n, int M, int row) {
  std::vector<lew::VertexId> v;
  for (int k = 1; k <= n; ++k) v.push_back(lew::VertexId{(n - k) * M / n, row});
  return v;
}

void emit(const json& rep, const GlobalOpts& g) {
  if (g.out.empty()) {
    std::cout << rep.dump(2) << "\n";
  } else {
    std::ofstream f(g.out);
    f << rep.dump(2) << "\n";
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path);
  for (size_t i = 0; i < header.size(); ++i) {
    f << header[i] << (i + 1 < header.size() ? "," : "\n");
  }
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      f << lew::report::csv_number(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

struct GraphArgs {
  std::string file;
  std::string preset;
  int M = 6;
  int N = 3;
};

lew::WeightedDigraph load_graph(const GraphArgs& ga, const std::string& fallback_preset) {
  if (!ga.file.empty()) {
    std::ifstream f(ga.file);
    if (!f) throw lew::DomainError("cannot open graph spec " + ga.file);
    json spec = json::parse(f);
    return lew::report::graph_from_json(spec);
  }
  const std::string preset = ga.preset.empty() ? fallback_preset : ga.preset;
  return lew::report::graph_from_preset(preset, ga.M, ga.N);
}

json graph_config_json(const GraphArgs& ga, const std::string& fallback_preset) {
  json j;
  if (!ga.file.empty()) {
    j["graph_file"] = ga.file;
  } else {
    j["preset"] = ga.preset.empty() ? fallback_preset : ga.preset;
    j["M"] = ga.M;
    j["N"] = ga.N;
  }
  return j;
}

int run_verify_fomin(const GraphArgs& ga, int n, std::string sources, std::string targets,
                     uint64_t samples, const GlobalOpts& g) {
  auto graph = load_graph(ga, "uniform-grid");
  const int width = graph.kind() == lew::GraphKind::FinitePlanar ? graph.width() : graph.period();
  auto a = sources.empty() ? default_columns(n, width, 0) : parse_vertices(sources);
  auto b = targets.empty() ? default_columns(n, width, graph.height()) : parse_vertices(targets);

  json config = graph_config_json(ga, "uniform-grid");
  config["n"] = a.size();
  config["sources"] = lew::report::vertices_json(a);
  config["targets"] = lew::report::vertices_json(b);
  config["samples"] = samples;
  config["seed"] = g.seed;
  config["threads"] = g.threads;
  config["tol_z"] = 4.0;
  json rep = lew::report::envelope("verify fomin", config, !g.no_timestamp);

  const auto det = lew::fomin_determinant(graph, a, b);
  rep["results"].push_back(lew::report::determinant_json(det, "fomin"));
  lew::mc::McConfig cfg;
  cfg.samples = samples;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  const auto est = lew::mc::estimate_fomin_lhs(graph, a, b, cfg);
  const auto z = lew::mc::z_report(est, det.value);
  rep["results"].push_back(lew::report::z_report_json("fomin_mc_vs_determinant", z));
  lew::report::finish(rep, z.pass);
  emit(rep, g);
  return z.pass ? 0 : 1;
}

int run_verify_affine(const GraphArgs& ga, int n, std::string sources, std::string targets,
                      uint64_t samples, const std::string& route, const GlobalOpts& g) {
  const int M = ga.M, N = ga.N;
  auto strip = load_graph(ga, "uniform-strip");
  if (strip.kind() != lew::GraphKind::PeriodicStrip) {
    throw lew::DomainError("verify affine expects a strip graph");
  }
  auto cyl = lew::WeightedDigraph::cylinder(M, N, strip.row_table(), strip.bottom_rule());
  auto a = sources.empty() ? default_columns(n, M, 0) : parse_vertices(sources);
  auto b = targets.empty() ? default_columns(n, M, N) : parse_vertices(targets);

  json config = graph_config_json(ga, "uniform-strip");
  config["n"] = a.size();
  config["sources"] = lew::report::vertices_json(a);
  config["targets"] = lew::report::vertices_json(b);
  config["samples"] = samples;
  config["seed"] = g.seed;
  config["threads"] = g.threads;
  config["route"] = route;
  config["tol_z"] = 4.0;
  json rep = lew::report::envelope("verify affine", config, !g.no_timestamp);

  const auto det = lew::affine_determinant(cyl, a, b);
  rep["results"].push_back(lew::report::determinant_json(det, "affine"));
  const auto sod = lew::sum_of_determinants(cyl, a, b);
  rep["results"].push_back(json{{"name", "sum_of_determinants"},
                                {"value", sod.value},
                                {"imag_residual", sod.imag_residual},
                                {"pass", sod.imag_residual < 1e-10}});

  lew::mc::McConfig cfg;
  cfg.samples = samples;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  bool pass = sod.imag_residual < 1e-10;

  if (route == "all" || route == "rotating") {
    const auto est = lew::mc::estimate_affine_lhs(strip, a, b, cfg);
    const auto z = lew::mc::z_report(est, det.value);
    rep["results"].push_back(
        lew::report::z_report_json("rotating_event_vs_twisted_determinant", z));
    pass = pass && z.pass;
  }
  if (route == "all" || route == "rigid") {
    const auto est = lew::mc::estimate_affine_rigid_lhs(strip, a, b, cfg);
    const auto z = lew::mc::z_report(est, sod.value);
    rep["results"].push_back(
        lew::report::z_report_json("rigid_event_vs_sum_of_determinants", z));
    pass = pass && z.pass;
  }
  if ((route == "all" || route == "cylinder") && n % 2 == 1) {
    const auto est = lew::mc::estimate_cyclic_cylinder_lhs(cyl, a, b, cfg);
    const auto z = lew::mc::z_report(est, det.value);
    rep["results"].push_back(
        lew::report::z_report_json("cylinder_event_vs_determinant", z));
    pass = pass && z.pass;
  }
  if (n % 2 == 1) {
    const auto plain = lew::fomin_determinant(cyl, a, b);
    const double diff = std::abs(plain.value - det.value);
    rep["results"].push_back(json{{"name", "odd_route_plain_vs_twisted"},
                                  {"difference", diff},
                                  {"tol", 1e-10},
                                  {"pass", diff < 1e-10}});
    pass = pass && diff < 1e-10;
  }
  {
    double total = 0;
    for (int ell = 0; ell < n; ++ell) {
      std::vector<lew::VertexId> bs(static_cast<size_t>(n));
      for (int j = 1; j <= n; ++j) {
        int src = (j - ell) % n;
        if (src <= 0) src += n;
        const int kj = j <= ell ? 1 : 0;
        bs[static_cast<size_t>(j - 1)] =
            lew::VertexId{b[static_cast<size_t>(src - 1)].col + M * kj, N};
      }
      total += lew::sum_of_determinants(cyl, a, bs).value;
    }
    const double diff = std::abs(total - det.value);
    rep["results"].push_back(json{{"name", "shifted_sums_rebuild_twisted_determinant"},
                                  {"difference", diff},
                                  {"tol", 1e-10},
                                  {"pass", diff < 1e-10}});
    pass = pass && diff < 1e-10;
  }
  lew::report::finish(rep, pass);
  emit(rep, g);
  return pass ? 0 : 1;
}

int run_verify_identities(const std::string& suite, const GlobalOpts& g) {
  json config{{"suite", suite}, {"seed", g.seed}};
  json rep = lew::report::envelope("verify identities", config, !g.no_timestamp);
  const auto cases = lew::ident::run_suite(suite, g.seed);
  bool pass = true;
  for (const auto& c : cases) {
    rep["results"].push_back(lew::report::identity_json(c));
    pass = pass && c.pass;
  }
  lew::report::finish(rep, pass);
  emit(rep, g);
  return pass ? 0 : 1;
}

struct KernelArgs {
  std::string name;
  double t = 1.0;
  double r = 0.3;
  double twist = 0.0;
  std::string at;
  std::string grid;
  std::string csv;
};

double eval_kernel(const KernelArgs& ka, double x, double y, json* extra) {
  namespace K = lew::kernels;
  if (ka.name == "quadrant") return K::quadrant(x, y);
  if (ka.name == "strip") return K::strip(ka.t, x, y);
  if (ka.name == "halfdisk") return K::halfdisk(x, y);
  if (ka.name == "excursion") return K::excursion_halfdisk(x, y);
  if (ka.name == "circle") {
    const auto v = K::circle_heat_sum_dual(ka.t, ka.twist, x, y);
    if (extra) {
      (*extra)["terms"] = v.terms;
      (*extra)["tail_bound"] = v.tail_bound;
    }
    return v.value;
  }
  if (ka.name == "annulus") {
    const auto v = K::annulus_sum_dual(ka.r, ka.twist, x, y);
    if (extra) {
      (*extra)["terms"] = v.terms;
      (*extra)["tail_bound"] = v.tail_bound;
    }
    return v.value;
  }
  if (ka.name == "theta3" || ka.name == "theta2" || ka.name == "theta4") {
    const int k = ka.name[5] - '0';
    return K::jacobi_theta(k, std::complex<double>(x, 0), y).real();
  }
  throw lew::DomainError("unknown kernel: " + ka.name);
}

int run_kernel(const KernelArgs& ka, const GlobalOpts& g) {
  json config{{"kernel", ka.name}, {"t", ka.t}, {"r", ka.r}, {"twist", ka.twist}};
  json rep = lew::report::envelope("kernel", config, !g.no_timestamp);
  if (!ka.grid.empty()) {
    // grid syntax: "a:b:count[,a2:b2:count2]"
    std::vector<std::array<double, 3>> axes;
    std::stringstream ss(ka.grid);
    std::string part;
    while (std::getline(ss, part, ',')) {
      std::array<double, 3> ax{};
      if (std::sscanf(part.c_str(), "%lf:%lf:%lf", &ax[0], &ax[1], &ax[2]) != 3) {
        throw lew::DomainError("grid axis must be lo:hi:count");
      }
      axes.push_back(ax);
    }
    if (axes.empty() || axes.size() > 2) throw lew::DomainError("grid needs 1 or 2 axes");
    std::vector<std::vector<double>> rows;
    const int nx = static_cast<int>(axes[0][2]);
    const int ny = axes.size() == 2 ? static_cast<int>(axes[1][2]) : 1;
    for (int i = 0; i < nx; ++i) {
      const double x = axes[0][0] + (axes[0][1] - axes[0][0]) * i / std::max(1, nx - 1);
      for (int j = 0; j < ny; ++j) {
        const double y = axes.size() == 2
                             ? axes[1][0] + (axes[1][1] - axes[1][0]) * j / std::max(1, ny - 1)
                             : 0.0;
        const double v = eval_kernel(ka, x, y, nullptr);
        if (axes.size() == 2) {
          rows.push_back({x, y, v});
        } else {
          rows.push_back({x, v});
        }
      }
    }
    if (!ka.csv.empty()) {
      write_csv(ka.csv, axes.size() == 2 ? std::vector<std::string>{"x", "y", "value"}
                                         : std::vector<std::string>{"x", "value"},
                rows);
    }
    rep["results"].push_back(json{{"name", ka.name}, {"points", rows.size()},
                                  {"csv", ka.csv}, {"pass", true}});
    lew::report::finish(rep, true);
    emit(rep, g);
    return 0;
  }
  const auto at = parse_doubles(ka.at.empty() ? "1,1" : ka.at);
  if (at.size() != 2) throw lew::DomainError("--at needs x,y");
  json extra;
  const double v = eval_kernel(ka, at[0], at[1], &extra);
  json res{{"name", ka.name}, {"at", at}, {"value", v}, {"pass", true}};
  for (auto& [k, val] : extra.items()) res[k] = val;
  rep["results"].push_back(res);
  lew::report::finish(rep, true);
  emit(rep, g);
  return 0;
}

struct DensityArgs {
  std::string name;
  int n = 2;
  double t = 1.0;
  double r = 1e-3;
  std::string spreads = "0.2,0.1,0.05";
  int grid_size = 20;
  double tol = 5e-2;
  std::string csv;
};

int run_density(const DensityArgs& da, const GlobalOpts& g) {
  json config{{"density", da.name}, {"n", da.n},      {"t", da.t},
              {"r", da.r},          {"spreads", da.spreads}, {"grid_size", da.grid_size},
              {"seed", g.seed},     {"tol", da.tol}};
  json rep = lew::report::envelope("density", config, !g.no_timestamp);

  lew::rmt::DensityReport dr;
  const auto spreads = parse_doubles(da.spreads);
  if (da.name == "goe") {
    dr = lew::rmt::spread_convergence_report(lew::rmt::LimitFamily::Goe, da.n, da.t, spreads,
                                             da.grid_size, g.seed, da.tol);
  } else if (da.name == "quadrant") {
    dr = lew::rmt::spread_convergence_report(lew::rmt::LimitFamily::Quadrant, da.n, da.t,
                                             spreads, da.grid_size, g.seed, da.tol);
  } else if (da.name == "strip") {
    dr = lew::rmt::spread_convergence_report(lew::rmt::LimitFamily::Strip, da.n, da.t, spreads,
                                             da.grid_size, g.seed, da.tol);
  } else if (da.name == "halfdisk") {
    dr = lew::rmt::spread_convergence_report(lew::rmt::LimitFamily::HalfDisk, da.n, da.t,
                                             spreads, da.grid_size, g.seed, da.tol);
  } else if (da.name == "excursion") {
    dr = lew::rmt::spread_convergence_report(lew::rmt::LimitFamily::Excursion, da.n, da.t,
                                             spreads, da.grid_size, g.seed, da.tol);
  } else if (da.name == "coe-circle") {
    dr = lew::rmt::coe_limit_check(lew::rmt::CoeMode::CircleLargeT, da.n, da.t, da.grid_size,
                                   g.seed, da.tol);
  } else if (da.name == "coe-annulus") {
    dr = lew::rmt::coe_limit_check(lew::rmt::CoeMode::AnnulusSmallR, da.n, da.r, da.grid_size,
                                   g.seed, da.tol);
  } else {
    throw lew::DomainError("unknown density: " + da.name);
  }
  rep["results"].push_back(lew::report::density_json(dr));
  if (!da.csv.empty()) {
    std::vector<std::string> header;
    for (int i = 1; i <= dr.n; ++i) header.push_back("y" + std::to_string(i));
    write_csv(da.csv, header, dr.grid);
  }
  lew::report::finish(rep, dr.pass);
  emit(rep, g);
  return dr.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loop-erased walk determinants and their continuum limits"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  if (const char* env = std::getenv("LEW_THREADS")) g.threads = std::atoi(env);
  app.add_option("--seed", g.seed, "base RNG seed");
  app.add_option("--threads", g.threads, "worker threads (default LEW_THREADS or 1)");
  app.add_flag("--no-timestamp", g.no_timestamp, "omit the timestamp field from reports");
  app.add_option("--out", g.out, "write the JSON report to this file");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->require_subcommand(1);
  verify->fallthrough();

  GraphArgs ga;
  int n_walkers = 2;
  std::string sources, targets, route = "all", suite = "all";
  uint64_t samples = 1000000;

  auto add_graph_opts = [&](CLI::App* cmd) {
    cmd->add_option("--graph", ga.file, "graph spec JSON file");
    cmd->add_option("--preset", ga.preset, "graph preset name");
    cmd->add_option("--M", ga.M, "period / width");
    cmd->add_option("--N", ga.N, "height (absorbing row)");
    cmd->add_option("--n", n_walkers, "number of walkers");
    cmd->add_option("--sources", sources, "source vertices col,row;col,row;...");
    cmd->add_option("--targets", targets, "target vertices col,row;col,row;...");
    cmd->add_option("--samples", samples, "Monte Carlo samples");
  };

  auto* vf = verify->add_subcommand("fomin", "planar identity: MC vs determinant");
  vf->fallthrough();
  add_graph_opts(vf);
  auto* va = verify->add_subcommand("affine", "affine identity routes: MC vs determinants");
  va->fallthrough();
  add_graph_opts(va);
  va->add_option("--route", route, "rotating|rigid|cylinder|all");
  auto* vi = verify->add_subcommand("identities", "algebraic identity suite");
  vi->fallthrough();
  vi->add_option("--suite", suite, "all|permanent|carlitz|vandermonde|poisson|cauchy");

  KernelArgs ka;
  auto* kn = app.add_subcommand("kernel", "evaluate a boundary hitting density");
  kn->fallthrough();
  kn->add_option("name", ka.name, "quadrant|strip|halfdisk|excursion|circle|annulus|theta2|theta3|theta4")
      ->required();
  kn->add_option("--t", ka.t, "time / strip height");
  kn->add_option("--r", ka.r, "annulus inner radius");
  kn->add_option("--twist", ka.twist, "frequency twist, 0 or 0.5");
  kn->add_option("--at", ka.at, "evaluation point x,y");
  kn->add_option("--grid", ka.grid, "grid axes lo:hi:count[,lo:hi:count]");
  kn->add_option("--csv", ka.csv, "write grid values to CSV");

  DensityArgs da;
  auto* dn = app.add_subcommand("density", "determinant density vs its limit");
  dn->fallthrough();
  dn->add_option("name", da.name, "goe|quadrant|strip|halfdisk|excursion|coe-circle|coe-annulus")
      ->required();
  dn->add_option("--n", da.n, "number of particles");
  dn->add_option("--t", da.t, "time parameter");
  dn->add_option("--r", da.r, "annulus inner radius");
  dn->add_option("--spreads", da.spreads, "start spreads, comma separated");
  dn->add_option("--grid-size", da.grid_size, "evaluation grid size");
  dn->add_option("--tol", da.tol, "pass tolerance on the final error");
  dn->add_option("--csv", da.csv, "write the evaluation grid to CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (vf->parsed()) return run_verify_fomin(ga, n_walkers, sources, targets, samples, g);
    if (va->parsed()) {
      return run_verify_affine(ga, n_walkers, sources, targets, samples, route, g);
    }
    if (vi->parsed()) return run_verify_identities(suite, g);
    if (kn->parsed()) return run_kernel(ka, g);
    if (dn->parsed()) return run_density(da, g);
  } catch (const lew::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
