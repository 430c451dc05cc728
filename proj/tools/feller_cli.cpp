#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "feller/averaging/limit_chain.hpp"
#include "feller/cli/definition.hpp"
#include "feller/cli/expression.hpp"
#include "feller/cli/output.hpp"
#include "feller/sim/simulate.hpp"
#include "feller/verify/checks.hpp"
#include "feller/verify/laplace.hpp"

using namespace feller;
using feller::cli::csv_number;
using feller::cli::CsvTable;
using nlohmann::json;

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::quadrature:
    case ErrorKind::internal: return 1;
    default: return 2;
  }
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_argument, what + ": cannot read '" + item + "' as a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw Error(ErrorKind::invalid_argument, what + ": cannot read '" + item + "' as a number");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::invalid_argument, what + " must list at least one value");
  return out;
}

Site parse_site(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_argument, "--start: expected component:x or component:edge:x, got '" + text + "'");
    }
  }
  if (v.size() == 2 && v[0] >= 0) return Site{std::size_t(v[0]), Point{0, v[1]}};
  if (v.size() == 3 && v[0] >= 0 && v[1] >= 0) return Site{std::size_t(v[0]), Point{std::size_t(v[1]), v[2]}};
  throw Error(ErrorKind::invalid_argument, "--start: expected component:x or component:edge:x, got '" + text + "'");
}

SiteFunction load_g(const std::string& arg, std::size_t components) {
  std::string text = arg;
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw Error(ErrorKind::invalid_argument, "cannot open g file '" + arg.substr(1) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  }
  return cli::parse_site_function(text, components);
}

// `count` points per edge, end points included; the star centre appears once.
std::vector<Point> sample_points(const StateSpace& s, std::size_t count) {
  std::vector<Point> pts;
  if (count == 0) return pts;
  auto t_of = [&](std::size_t i) { return count == 1 ? 0.0 : double(i) / double(count - 1); };
  switch (s.kind()) {
    case SpaceKind::absorbing_points:
      for (std::size_t e = 0; e < s.edge_count(); ++e) pts.push_back({e, 0.0});
      break;
    case SpaceKind::half_line:
      for (std::size_t i = 0; i < count; ++i) pts.push_back({0, s.from_t(t_of(i))});
      break;
    case SpaceKind::star_graph:
      pts.push_back({0, 0.0});
      for (std::size_t e = 0; e < s.edge_count(); ++e)
        for (std::size_t i = 1; i < count; ++i) pts.push_back({e, s.length() * t_of(i)});
      break;
    default:
      for (std::size_t i = 0; i < count; ++i) pts.push_back({0, s.length() * t_of(i)});
  }
  return pts;
}

struct Output {
  std::string path;
  void emit(const CsvTable& t, const json& manifest) const {
    if (path.empty()) {
      t.write(std::cout);
      return;
    }
    std::ostringstream os;
    t.write(os);
    cli::write_text_file(path, os.str());
    cli::write_text_file(path + ".manifest.json", manifest.dump(2) + "\n");
  }
};

unsigned default_threads() {
  if (const char* e = std::getenv("FELLER_THREADS")) {
    const long v = std::strtol(e, nullptr, 10);
    if (v >= 1) return unsigned(v);
  }
  return 1;
}

// ---------------------------------------------------------------- commands

int cmd_check(const std::string& file, double tol, const std::string& lambda_text, const Output& out) {
  const cli::ProcessDefinition def = cli::load_definition(file);
  const double tolerance = tol > 0 ? tol : def.defaults.tol;
  const std::vector<double> lambdas = parse_list(lambda_text, "--lambda-set");
  const auto comps = cli::build_components(def);
  const ConcatSystem sys(comps, cli::build_measures(def));
  const std::size_t n = def.defaults.resolution;
  const std::vector<SiteFunction> gs{constant_site_function(1.0), [](const Site& s) {
                                       const double x = s.point.x;
                                       return std::isinf(x) ? 0.0 : 1.0 / (1.0 + x) + 0.5 * std::exp(-2.0 * x) + 0.1 * double(s.point.edge);
                                     }};
  std::vector<CheckReport> reports;
  auto tag = [](CheckReport r, const std::string& who) {
    r.params = who + "; " + r.params;
    return r;
  };
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const ComponentPtr c = comps[i];
    const std::string who = "component=" + std::to_string(i);
    const ResolventHandle h = component_handle(c, n);
    reports.push_back(tag(check_hilbert(h, lambdas, gs, tolerance), who));
    const std::vector<Point> grid = c->space().grid(n);
    const Point mid = grid[grid.size() / 2];
    for (std::size_t j = 0; j < c->gate_count(); ++j) {
      const std::string wj = who + "; gate=" + std::to_string(j);
      const ExitLawEvaluator law = [c, j](double l, const Site& s) { return c->exit_law(j, l, s.point); };
      reports.push_back(tag(check_exit_law(h, law, lambdas, tolerance), wj));
      reports.push_back(tag(check_exit_law_derivative(h, law, lambdas, 1), wj));
      reports.push_back(tag(check_complete_monotonicity([&](double l) { return c->exit_law(j, l, mid); },
                                                        geometric_grid(0.05, 1.6, 14), 4),
                            wj));
      if (c->space().kind() == SpaceKind::half_line) {
        const SiteFunction phi = [c, j](const Site& s) { return c->excessive(j, s.point); };
        reports.push_back(tag(check_excessive_representation(h, law, phi, lambdas, 1e-5), wj));
      } else if (!c->non_unique_representation()) {
        reports.push_back(tag(check_excessive_representation(h, law, lambdas, 1e-5), wj));
      }
    }
  }
  const ResolventHandle sh = system_handle(sys, n);
  reports.push_back(tag(check_hilbert(sh, lambdas, gs, tolerance), "system"));
  double low = 0.0, high = 0.0, cons = 0.0;
  for (double l : lambdas) {
    const std::vector<double> v = sh.apply(l, gs[0]);
    for (double x : v) {
      low = std::min(low, l * x);
      high = std::max(high, l * x - 1.0);
      cons = std::max(cons, std::abs(l * x - 1.0));
    }
  }
  reports.push_back({"positivity", "system; g=1; " + feller::detail::join_lambdas(lambdas), -low, 1e-12, -low <= 1e-12,
                     sh.label, ""});
  reports.push_back({"contraction", "system; g=1; " + feller::detail::join_lambdas(lambdas), std::max(high, 0.0), 1e-10,
                     high <= 1e-10, sh.label, ""});
  if (sys.all_probability())
    reports.push_back({"conservativity", "system; g=1; " + feller::detail::join_lambdas(lambdas), cons, 1e-10,
                       cons <= 1e-10, sh.label, ""});

  bool all = true;
  for (const CheckReport& r : reports) all = all && r.pass;
  std::ostringstream os;
  write_reports_csv(os, reports);
  if (out.path.empty()) {
    std::cout << os.str();
  } else {
    cli::write_text_file(out.path, os.str());
    cli::write_text_file(out.path + ".manifest.json",
                         cli::make_manifest("check", {{"definition", file}, {"tol", tolerance}, {"lambda_set", lambdas},
                                                      {"resolution", n}, {"all_pass", all}})
                                 .dump(2) +
                             "\n");
  }
  if (!all) std::cerr << "check: at least one property check failed\n";
  return all ? 0 : 1;
}

int cmd_resolve(const std::string& file, double lambda, const std::string& g_text, std::size_t points, const Output& out) {
  const cli::ProcessDefinition def = cli::load_definition(file);
  const ConcatSystem sys = cli::build_system(def);
  check_lambda(lambda);
  const SiteFunction g = load_g(g_text, sys.component_count());
  const ConcatSolution sol = sys.solve(g, lambda);
  CsvTable t({"component", "edge", "x", "value"});
  for (std::size_t i = 0; i < sys.component_count(); ++i) {
    const std::vector<Point> pts = sample_points(sys.component(i).space(), points);
    if (pts.empty()) continue;
    const std::vector<double> v = sol.values(i, pts);
    for (std::size_t k = 0; k < pts.size(); ++k)
      t.add({std::to_string(i), std::to_string(pts[k].edge), csv_number(pts[k].x), csv_number(v[k])});
  }
  std::vector<double> u(sol.u().data(), sol.u().data() + sol.u().size());
  out.emit(t, cli::make_manifest("resolve", {{"definition", file},
                                             {"lambda", lambda},
                                             {"g", g_text},
                                             {"points", points},
                                             {"u", u},
                                             {"gate_matrix_norm", sol.gate_matrix_norm()},
                                             {"consistency_defect", sol.consistency_defect()}}));
  return 0;
}

int cmd_exitlaws(const std::string& file, std::size_t component, const std::string& lambda_text, std::size_t points,
                 const Output& out) {
  const cli::ProcessDefinition def = cli::load_definition(file);
  const auto comps = cli::build_components(def);
  if (component >= comps.size())
    throw Error(ErrorKind::invalid_argument, "--component " + std::to_string(component) + " does not exist");
  const std::vector<double> lambdas = parse_list(lambda_text, "--lambda-list");
  const ComponentPtr c = comps[component];
  std::vector<std::string> header{"component", "gate", "edge", "x"};
  for (double l : lambdas) header.push_back("ell_" + csv_number(l));
  header.push_back("phi_extrapolated");
  header.push_back("phi_closed_form");
  CsvTable t(header);
  if (c->gate_count() == 0) {
    std::cerr << "no_gate: " << c->describe() << " is conservative and has no exit laws\n";
  }
  const std::vector<Point> pts = sample_points(c->space(), points);
  for (std::size_t j = 0; j < c->gate_count(); ++j)
    for (const Point& x : pts) {
      std::vector<std::string> row{std::to_string(component), std::to_string(j), std::to_string(x.edge), csv_number(x.x)};
      for (double l : lambdas) row.push_back(csv_number(c->exit_law(j, l, x)));
      row.push_back(csv_number(limit_at_zero([&](double l) { return c->exit_law(j, l, x); }).value));
      row.push_back(csv_number(c->excessive(j, x)));
      t.add(std::move(row));
    }
  out.emit(t, cli::make_manifest("exitlaws", {{"definition", file}, {"component", component}, {"lambda_list", lambdas},
                                              {"points", points}, {"description", c->describe()}}));
  return 0;
}

std::vector<FamilyPtr> families_of(const std::vector<ComponentPtr>& comps) {
  std::vector<FamilyPtr> fs;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    try {
      fs.push_back(family_of(*comps[i]));
    } catch (const Error& e) {
      throw Error(e.kind(), "component " + std::to_string(i) + ": " + e.message());
    }
  }
  return fs;
}

int cmd_qmatrix(const std::string& file, const std::string& format, const Output& out) {
  const cli::ProcessDefinition def = cli::load_definition(file);
  const auto comps = cli::build_components(def);
  const auto fams = families_of(comps);
  const LimitChain ch = build_q_matrix(fams, cli::build_measures(def));
  if (format == "text") {
    std::ostringstream os;
    os << "Q =\n" << ch.text();
    for (std::size_t i = 0; i < fams.size(); ++i) {
      const SplittingData& d = fams[i]->data();
      os << "component " << i << ": gamma = " << csv_number(d.gamma) << ", rho = [";
      for (std::size_t j = 0; j < d.rho.size(); ++j) os << (j ? ", " : "") << csv_number(d.rho[j]);
      os << "], F_P g = " << d.projection_text << "\n";
    }
    if (out.path.empty())
      std::cout << os.str();
    else
      cli::write_text_file(out.path, os.str());
    return 0;
  }
  std::vector<std::string> header{"row"};
  for (std::size_t k = 0; k < ch.size(); ++k) header.push_back("q" + std::to_string(k));
  CsvTable t(header);
  json fam = json::array();
  for (std::size_t i = 0; i < ch.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (std::size_t k = 0; k < ch.size(); ++k) row.push_back(csv_number(ch.Q(Eigen::Index(i), Eigen::Index(k))));
    t.add(std::move(row));
    fam.push_back({{"gamma", fams[i]->data().gamma}, {"rho", fams[i]->data().rho},
                   {"projection", fams[i]->data().projection_text}});
  }
  out.emit(t, cli::make_manifest("qmatrix", {{"definition", file}, {"families", fam}}));
  return 0;
}

int cmd_sweep(const std::string& file, const std::string& eps_text, double lambda, const std::string& g_text,
              const std::string& t_text, const Output& out) {
  const std::vector<double> eps = parse_list(eps_text, "--eps-list");
  std::vector<double> ts;
  if (!t_text.empty()) {
    ts = parse_list(t_text, "--t-list");
    for (double t : ts)
      if (!(t > 0))
        throw Error(ErrorKind::invalid_argument,
                    "--t-list: times must be positive; convergence holds on compact subsets of (0, infinity)");
  }
  const cli::ProcessDefinition def = cli::load_definition(file);
  const auto comps = cli::build_components(def);
  const auto fams = families_of(comps);
  const auto measures = cli::build_measures(def);
  const SiteFunction g = load_g(g_text, comps.size());
  CsvTable t({"kind", "eps", "lambda", "t", "component", "value", "limit", "error", "threshold"});
  for (const SweepRow& r : convergence_sweep(fams, measures, g, lambda, eps, def.defaults.resolution))
    t.add({"resolvent", csv_number(r.eps), csv_number(r.lambda), "", "", "", "", csv_number(r.error),
           csv_number(0.05 * r.g_norm)});
  if (!ts.empty())
    for (double e : eps)
      for (const TimeDomainRow& r : time_domain_check(fams, measures, g, e, ts))
        t.add({"time", csv_number(r.eps), "", csv_number(r.t), std::to_string(r.component), csv_number(r.value),
               csv_number(r.limit), csv_number(std::abs(r.value - r.limit)), csv_number(5e-3)});
  out.emit(t, cli::make_manifest("sweep", {{"definition", file}, {"eps_list", eps}, {"lambda", lambda}, {"g", g_text},
                                           {"t_list", ts}, {"resolution", def.defaults.resolution}}));
  return 0;
}

int cmd_simulate(const std::string& file, std::size_t paths, long long seed_opt, const std::string& lambda_text,
                 const std::string& start_text, unsigned threads, double horizon, double dt, const Output& out) {
  const cli::ProcessDefinition def = cli::load_definition(file);
  const ConcatSystem sys = cli::build_system(def);
  const std::vector<double> lambdas = parse_list(lambda_text, "--lambda-list");
  for (double l : lambdas) check_lambda(l);
  const Site start = parse_site(start_text);
  require(start.component < sys.component_count(), ErrorKind::invalid_argument, "--start: component does not exist");
  sim::SimConfig cfg;
  cfg.paths = paths;
  cfg.seed = seed_opt >= 0 ? std::uint64_t(seed_opt) : def.defaults.seed;
  cfg.threads = threads;
  cfg.horizon = horizon;
  cfg.dt = dt;
  require(paths >= 1000, ErrorKind::invalid_argument, "--paths must be at least 1000");
  const std::vector<sim::PathRecord> recs = sim::simulate_concatenation(sys, start, cfg);
  const ComponentProcess& c0 = sys.component(start.component);
  CsvTable t({"start", "kind", "gate", "lambda", "estimate", "stderr", "exact", "z", "n_paths", "truncated_fraction"});
  auto add = [&](const std::string& kind, const std::string& gate, double l, const sim::Estimate& e, double exact) {
    const double z = e.stderr_ > 0 ? (e.value - exact) / e.stderr_ : (e.value == exact ? 0.0 : kInf);
    t.add({start_text, kind, gate, csv_number(l), csv_number(e.value), csv_number(e.stderr_), csv_number(exact),
           csv_number(z), std::to_string(e.n), csv_number(e.truncated_fraction)});
  };
  const SiteFunction one = constant_site_function(1.0);
  for (double l : lambdas) {
    add("lifetime", "", l, sim::empirical_laplace(recs, l), 1.0 - l * sys.solve(one, l).value(start));
    for (std::size_t j = 0; j < c0.gate_count(); ++j)
      add("first_exit", std::to_string(j), l, sim::empirical_laplace(recs, l, GateRef{start.component, j}),
          c0.exit_law(j, l, start.point));
  }
  for (std::size_t j = 0; j < c0.gate_count(); ++j)
    add("gate_frequency", std::to_string(j), 0.0, sim::empirical_laplace(recs, 0.0, GateRef{start.component, j}),
        c0.excessive(j, start.point));
  out.emit(t, cli::make_manifest("simulate", {{"definition", file}, {"paths", paths}, {"seed", cfg.seed},
                                              {"lambda_list", lambdas}, {"start", start_text}, {"threads", threads},
                                              {"horizon", horizon}, {"dt", dt}}));
  return 0;
}

int cmd_invert(const std::string& file, const std::string& g_text, const std::string& start_text,
               const std::string& t_text, int order, const Output& out) {
  const cli::ProcessDefinition def = cli::load_definition(file);
  const ConcatSystem sys = cli::build_system(def);
  const SiteFunction g = load_g(g_text, sys.component_count());
  const Site start = parse_site(start_text);
  require(start.component < sys.component_count(), ErrorKind::invalid_argument, "--start: component does not exist");
  const std::vector<double> ts = parse_list(t_text, "--t-list");
  CsvTable t({"t", "value"});
  for (double tt : ts)
    t.add({csv_number(tt), csv_number(invert_laplace([&](double l) { return sys.solve(g, l).value(start); }, tt, order))});
  out.emit(t, cli::make_manifest("invert", {{"definition", file}, {"g", g_text}, {"start", start_text}, {"t_list", ts},
                                            {"order", order}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concatenation of non-honest Feller processes: resolvents, exit laws, averaging limits"};
  app.require_subcommand(1);
  std::function<int()> action;
  Output out;

  std::string file, lambda_text = "0.5,2,8", g_text = "1", eps_text = "0.1,0.01,0.001", t_text, start_text,
                    format = "csv";
  double tol = 0.0, lambda = 1.0, horizon = 0.0, dt = 0.0;
  std::size_t points = 11, component = 0, paths = 100000;
  long long seed = -1;
  unsigned threads = default_threads();
  int order = 7;

  auto common = [&](CLI::App* s) {
    s->add_option("definition", file, "process definition file")->required();
    s->add_option("--out", out.path, "write the table here (plus <out>.manifest.json) instead of stdout");
  };

  CLI::App* check = app.add_subcommand("check", "run the axiom battery on every component and on the system");
  common(check);
  check->add_option("--tol", tol, "tolerance (default: the definition's)");
  check->add_option("--lambda-set", lambda_text, "comma-separated rates");
  check->callback([&] { action = [&] { return cmd_check(file, tol, lambda_text, out); }; });

  CLI::App* resolve = app.add_subcommand("resolve", "evaluate R_lambda^co g");
  common(resolve);
  resolve->add_option("--lambda", lambda, "rate")->required();
  resolve->add_option("--g", g_text, "expression in x (';' separates components) or @file");
  resolve->add_option("--points", points, "points per edge");
  resolve->callback([&] { action = [&] { return cmd_resolve(file, lambda, g_text, points, out); }; });

  CLI::App* exitlaws = app.add_subcommand("exitlaws", "tabulate exit laws and excessive functions of one component");
  common(exitlaws);
  exitlaws->add_option("--component", component, "component index");
  exitlaws->add_option("--lambda-list", lambda_text, "comma-separated rates")->required();
  exitlaws->add_option("--points", points, "points per edge");
  exitlaws->callback([&] { action = [&] { return cmd_exitlaws(file, component, lambda_text, points, out); }; });

  CLI::App* qmatrix = app.add_subcommand("qmatrix", "intensity matrix of the limit Markov chain");
  common(qmatrix);
  qmatrix->add_option("--format", format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
  qmatrix->callback([&] { action = [&] { return cmd_qmatrix(file, format, out); }; });

  CLI::App* sweep = app.add_subcommand("sweep", "distance to the limit chain along eps");
  common(sweep);
  sweep->add_option("--eps-list", eps_text, "strictly decreasing eps values");
  sweep->add_option("--lambda", lambda, "rate");
  sweep->add_option("--g", g_text, "expression in x or @file");
  sweep->add_option("--t-list", t_text, "positive times for the Gaver-Stehfest comparison");
  sweep->callback([&] { action = [&] { return cmd_sweep(file, eps_text, lambda, g_text, t_text, out); }; });

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo lifetimes and exits");
  common(simulate);
  simulate->add_option("--paths", paths, "number of paths");
  simulate->add_option("--seed", seed, "64-bit seed (default: the definition's)");
  simulate->add_option("--lambda-list", lambda_text, "comma-separated rates");
  simulate->add_option("--start", start_text, "component:x or component:edge:x")->required();
  simulate->add_option("--threads", threads, "worker threads (default: FELLER_THREADS or 1)");
  simulate->add_option("--horizon", horizon, "truncation time (default 50 r^2)");
  simulate->add_option("--dt", dt, "diffusion time step (default r^2/4000)");
  simulate->callback([&] {
    action = [&] { return cmd_simulate(file, paths, seed, lambda_text, start_text, threads, horizon, dt, out); };
  });

  CLI::App* invert = app.add_subcommand("invert", "Gaver-Stehfest inversion of lambda -> R_lambda^co g(start)");
  common(invert);
  invert->add_option("--g", g_text, "expression in x or @file");
  invert->add_option("--start", start_text, "component:x or component:edge:x")->required();
  invert->add_option("--t-list", t_text, "positive times")->required();
  invert->add_option("--order", order, "Stehfest order (at most 9)");
  invert->callback([&] { action = [&] { return cmd_invert(file, g_text, start_text, t_text, order, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action();
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
