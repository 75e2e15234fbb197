#include "experiment.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "orthlip/beta.hpp"
#include "orthlip/error.hpp"
#include "orthlip/exponents.hpp"

namespace orthlip::cli {

using json = nlohmann::ordered_json;
namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw InvalidArgument("config key '" + key + "': " + what);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

double parse_real(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size() || !std::isfinite(v)) {
    bad(key, "'" + text + "' is not a finite number");
  }
  return v;
}

long parse_integer(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  long v = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size()) bad(key, "'" + text + "' is not an integer");
  return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  bad(key, "'" + text + "' is not a boolean");
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

InitialGuess parse_initial(const std::string& v, const std::string& key) {
  if (v == "interpolation") return InitialGuess::Interpolation;
  if (v == "harmonic") return InitialGuess::HarmonicExtension;
  if (v == "zero") return InitialGuess::ZeroInterior;
  if (v == "data") return InitialGuess::DataExtension;
  bad(key, "unknown initial guess '" + v + "' (interpolation, harmonic, zero, data)");
}

Preconditioner parse_preconditioner(const std::string& v, const std::string& key) {
  if (v == "jacobi") return Preconditioner::Jacobi;
  if (v == "spectral") return Preconditioner::Spectral;
  if (v == "scaled-spectral") return Preconditioner::ScaledSpectral;
  if (v == "hessian") return Preconditioner::Hessian;
  bad(key, "unknown preconditioner '" + v + "' (jacobi, spectral, scaled-spectral, hessian)");
}

const std::set<std::string> kDataKeys{"kind",  "dim",    "slope",         "offset",    "modes",  "seed",
                                      "max_frequency", "amplitude", "nodes", "extent", "values", "mollifier"};

void only_keys(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed) {
  for (const auto& [key, child] : section) {
    if (!allowed.count(key)) bad(name + "." + key, "unknown key");
  }
}

NamedCheck parse_check(const std::string& label, const std::string& kind_name, const pt::ptree* section,
                       const ExperimentConfig& cfg) {
  NamedCheck nc;
  nc.label = label;
  try {
    nc.spec.kind = parse_check_kind(trim(kind_name));
  } catch (const InvalidArgument&) {
    bad("checks." + label, "unknown check '" + trim(kind_name) + "'");
  }
  nc.spec.q0 = cfg.q0;
  if (!section) return nc;

  const std::size_t dim = cfg.p.size();
  auto axis = [&](const std::string& key, const std::string& v) {
    const long a = parse_integer(v, key);
    if (a < 1 || static_cast<std::size_t>(a) > dim) bad(key, "axis must lie in 1.." + std::to_string(dim));
    return static_cast<std::size_t>(a - 1);
  };
  for (const auto& [key, child] : *section) {
    const std::string full = label + "." + key;
    const std::string v = child.data();
    if (key == "j") nc.spec.j = axis(full, v);
    else if (key == "k") nc.spec.k = axis(full, v);
    else if (key == "phi_power") nc.spec.phi_power = parse_real(v, full);
    else if (key == "alpha") nc.spec.alpha = parse_real(v, full);
    else if (key == "s") nc.spec.s = parse_real(v, full);
    else if (key == "m") nc.spec.m = parse_real(v, full);
    else if (key == "ell0") nc.spec.ell0 = static_cast<int>(parse_integer(v, full));
    else if (key == "q0") nc.spec.q0 = parse_real(v, full);
    else if (key == "gamma") nc.spec.gamma = parse_real(v, full);
    else if (key == "theta") {
      if (trim(v) == "schedule") {
        if (dim < 3) bad(full, "the Moser schedule needs N >= 3");
        nc.schedule_theta = true;
      } else {
        nc.spec.theta = parse_real(v, full);
      }
    } else if (key == "center") {
      const auto c = parse_reals(v, full);
      if (c.size() != dim) bad(full, "needs " + std::to_string(dim) + " coordinates");
      std::copy(c.begin(), c.end(), nc.spec.balls.center.begin());
    } else if (key == "inner") nc.spec.balls.inner = parse_real(v, full);
    else if (key == "outer") nc.spec.balls.outer = parse_real(v, full);
    else if (key == "acceptance") nc.spec.acceptance = parse_real(v, full);
    else bad(full, "unknown key");
  }
  if (!(nc.spec.balls.inner > 0.0 && nc.spec.balls.inner < nc.spec.balls.outer)) {
    bad(label + ".inner", "radii need 0 < inner < outer");
  }
  return nc;
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  const fs::path path = fs::path(cfg.out_dir) / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  return os;
}

void write_json(const ExperimentConfig& cfg, const std::string& name, const json& doc) {
  auto os = open_out(cfg, name);
  os << doc.dump(2) << '\n';
}

json config_json(const ExperimentConfig& cfg, const std::string& command) {
  json o;
  o["command"] = command;
  o["p"] = cfg.p;
  o["q0"] = cfg.q0;
  o["eps0"] = cfg.eps0;
  o["eps"] = cfg.eps;
  o["resolutions"] = cfg.resolutions;
  json data;
  for (const auto& [k, v] : cfg.data) data[k] = v;
  o["data"] = std::move(data);
  return o;
}

double h_of(std::size_t nodes) { return 1.0 / static_cast<double>(nodes - 1); }

std::vector<CheckSpec> resolved_checks(const ExperimentConfig& cfg) {
  if (cfg.checks.empty()) throw InvalidArgument("config key 'checks': no checks configured");
  std::vector<CheckSpec> out;
  for (const auto& nc : cfg.checks) {
    CheckSpec s = nc.spec;
    if (nc.schedule_theta) {
      const ExponentVector p(cfg.p);
      s.theta = compute_moser_schedule(p, std::max(40, minimum_jmax(p))).theta;
    }
    out.push_back(s);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::vector<double> parse_reals(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split(text)) out.push_back(parse_real(item, key));
  if (out.empty()) bad(key, "empty list");
  return out;
}

ExperimentConfig parse_config(std::istream& in, const Overrides& over, const std::string& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument("config line " + std::to_string(e.line()) + ": " + e.message());
  }

  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty()) bad(name, "keys must belong to a section");
  }

  const auto problem = tree.get_child_optional("problem");
  if (!problem) bad("problem", "missing section");
  only_keys(*problem, "problem", {"p", "q0", "eps0", "domain"});
  const auto p_text = problem->get_optional<std::string>("p");
  if (!p_text) bad("problem.p", "missing");
  cfg.p = parse_reals(*p_text, "problem.p");
  try {
    ExponentVector check(cfg.p);
  } catch (const InvalidArgument& e) {
    bad("problem.p", e.what());
  }
  if (cfg.p.size() > 3) bad("problem.p", "the solver supports N = 2 or 3");
  if (auto v = problem->get_optional<std::string>("q0")) cfg.q0 = parse_real(*v, "problem.q0");
  if (!(cfg.q0 > 1.0)) bad("problem.q0", "must exceed 1");
  if (auto v = problem->get_optional<std::string>("eps0")) cfg.eps0 = parse_real(*v, "problem.eps0");
  if (auto v = problem->get_optional<std::string>("domain"); v && trim(*v) != "unit") {
    bad("problem.domain", "only the unit box 'unit' is supported");
  }
  const std::size_t dim = cfg.p.size();

  const auto data = tree.get_child_optional("data");
  if (!data) bad("data", "missing section");
  for (const auto& [key, child] : *data) {
    if (!kDataKeys.count(key) && key.rfind("mode.", 0) != 0) bad("data." + key, "unknown key");
    cfg.data[key] = trim(child.data());
  }
  if (!cfg.data.count("dim")) cfg.data["dim"] = std::to_string(dim);
  if (parse_real(cfg.data["dim"], "data.dim") != static_cast<double>(dim)) bad("data.dim", "differs from len(problem.p)");
  if (over.seed) {
    if (cfg.data["kind"] != "random-smooth") bad("data.seed", "--seed needs data.kind = random-smooth");
    cfg.data["seed"] = std::to_string(*over.seed);
  }
  try {
    boundary_data(cfg);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("config section 'data': ") + e.what());
  }

  const auto disc = tree.get_child_optional("discretization");
  if (!disc) bad("discretization", "missing section");
  only_keys(*disc, "discretization", {"resolutions"});
  const auto res = disc->get_optional<std::string>("resolutions");
  if (!res) bad("discretization.resolutions", "missing");
  for (const auto& item : split(*res)) {
    const long n = parse_integer(item, "discretization.resolutions");
    if (n < 3) bad("discretization.resolutions", "each grid needs at least 3 nodes per axis");
    if (!cfg.resolutions.empty() && static_cast<std::size_t>(n) <= cfg.resolutions.back()) {
      bad("discretization.resolutions", "must be strictly increasing");
    }
    cfg.resolutions.push_back(static_cast<std::size_t>(n));
  }

  const auto solver = tree.get_child_optional("solver");
  if (!solver) bad("solver", "missing section");
  only_keys(*solver, "solver",
            {"eps", "tol", "max_iters", "initial", "preconditioner", "refresh", "mollify", "shrink",
             "sufficient_decrease", "max_backtracks"});
  const auto eps = solver->get_optional<std::string>("eps");
  if (!eps) bad("solver.eps", "missing");
  cfg.eps = parse_reals(*eps, "solver.eps");
  for (std::size_t k = 0; k < cfg.eps.size(); ++k) {
    if (cfg.eps[k] < 0.0) bad("solver.eps", "must be non-negative");
    if (k > 0 && !(cfg.eps[k] < cfg.eps[k - 1])) bad("solver.eps", "must be strictly decreasing");
  }
  SolveConfig& sc = cfg.solver;
  for (const auto& [key, child] : *solver) {
    const std::string full = "solver." + key;
    const std::string v = trim(child.data());
    if (key == "tol") sc.tol = parse_real(v, full);
    else if (key == "max_iters") sc.max_iters = parse_integer(v, full);
    else if (key == "initial") sc.initial = parse_initial(v, full);
    else if (key == "preconditioner") sc.preconditioner = parse_preconditioner(v, full);
    else if (key == "refresh") sc.refresh = static_cast<int>(parse_integer(v, full));
    else if (key == "mollify") sc.mollify_data = parse_bool(v, full);
    else if (key == "shrink") sc.linesearch.shrink = parse_real(v, full);
    else if (key == "sufficient_decrease") sc.linesearch.sufficient_decrease = parse_real(v, full);
    else if (key == "max_backtracks") sc.linesearch.max_backtracks = static_cast<int>(parse_integer(v, full));
  }
  sc.throw_on_failure = true;
  try {
    sc.validate();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("config section 'solver': ") + e.what());
  }

  std::set<std::string> labels;
  if (const auto checks = tree.get_child_optional("checks")) {
    for (const auto& [label, child] : *checks) {
      if (!labels.insert(label).second) bad("checks." + label, "duplicate label");
      const auto section = tree.get_child_optional(label);
      static const std::set<std::string> reserved{"problem", "data", "discretization", "solver", "checks", "study",
                                                  "output"};
      if (reserved.count(label)) bad("checks." + label, "label collides with a section name");
      cfg.checks.push_back(parse_check(label, child.data(), section ? &*section : nullptr, cfg));
    }
  }

  cfg.study.dim = dim;
  cfg.study.resolutions = cfg.resolutions;
  if (const auto study = tree.get_child_optional("study")) {
    only_keys(*study, "study", {"final_tolerance", "spread_tolerance", "threads"});
    if (auto v = study->get_optional<std::string>("final_tolerance")) {
      cfg.study.final_tolerance = parse_real(*v, "study.final_tolerance");
    }
    if (auto v = study->get_optional<std::string>("spread_tolerance")) {
      cfg.study.spread_tolerance = parse_real(*v, "study.spread_tolerance");
    }
    if (auto v = study->get_optional<std::string>("threads")) {
      const long t = parse_integer(*v, "study.threads");
      if (t < 0) bad("study.threads", "must be non-negative");
      cfg.study.threads = static_cast<unsigned>(t);
    }
  }
  if (over.threads) cfg.study.threads = *over.threads;

  if (const auto output = tree.get_child_optional("output")) {
    only_keys(*output, "output", {"dir", "formats"});
    if (auto v = output->get_optional<std::string>("dir")) cfg.out_dir = trim(*v);
    if (auto v = output->get_optional<std::string>("formats")) {
      cfg.json = cfg.csv = cfg.binary = false;
      for (const auto& f : split(*v)) {
        if (f == "json") cfg.json = true;
        else if (f == "csv") cfg.csv = true;
        else if (f == "binary") cfg.binary = true;
        else bad("output.formats", "unknown format '" + f + "' (json, csv, binary)");
      }
    }
  }
  if (over.out_dir) cfg.out_dir = *over.out_dir;

  for (const auto& [name, section] : tree) {
    static const std::set<std::string> known{"problem", "data",  "discretization", "solver",
                                             "checks",  "study", "output"};
    if (!known.count(name) && !labels.count(name)) bad(name, "unknown section (not listed under [checks])");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const Overrides& over) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  const fs::path parent = fs::path(path).parent_path();
  return parse_config(in, over, parent.empty() ? "." : parent.string());
}

ModelParams model_params(const ExperimentConfig& cfg, double eps) {
  return ModelParams(ExponentVector(cfg.p), eps, cfg.eps0);
}

BoundaryData boundary_data(const ExperimentConfig& cfg) { return BoundaryData::from_keys(cfg.data, cfg.base_dir); }

std::string exponents_json(const std::vector<double>& pv, double q0, std::optional<int> jmax) {
  const ExponentVector p(pv);
  const QSequence q = compute_q_sequence(p, q0);
  json o;
  o["p"] = pv;
  o["q0"] = q0;
  o["q"] = q.q;
  if (p.dim() < 3) {
    if (jmax) throw InvalidArgument("--jmax needs N >= 3");
    o["moser"] = nullptr;
    return o.dump(2);
  }
  const MoserSchedule s = compute_moser_schedule(p, jmax.value_or(std::max(40, minimum_jmax(p))));
  json m;
  m["sobolev2star"] = s.sobolev2star;
  m["j0"] = s.j0;
  m["j1"] = s.j1;
  m["J"] = s.J;
  m["jmax"] = s.jmax;
  m["theta"] = s.theta;
  m["theta_tail"] = s.theta_tail;
  m["epsilon_asymptote"] = epsilon_asymptote(p);
  m["gamma"] = std::vector<double>(s.gammas().begin(), s.gammas().end());
  json tau = json::array(), eps = json::array(), ratio = json::array();
  for (int j = s.j0; j <= s.jmax; ++j) {
    tau.push_back(s.tau(j));
    ratio.push_back(s.absorption_ratio(j));
  }
  for (int j = s.J; j <= s.jmax; ++j) eps.push_back(s.eps(j));
  m["tau"] = std::move(tau);
  m["absorption_ratio"] = std::move(ratio);
  m["eps"] = std::move(eps);
  o["moser"] = std::move(m);
  return o.dump(2);
}

std::string beta_json(const std::vector<double>& pv, double q0, int j, int max_levels) {
  const ExponentVector p(pv);
  const BetaTrace t = beta_run(p, q0, j, max_levels);
  json o;
  o["p"] = pv;
  o["q0"] = q0;
  o["j"] = j;
  o["first_axis"] = j - 1;
  o["ell0"] = t.ell0;
  o["fixpoint"] = t.states.back().target;
  json levels = json::array();
  for (std::size_t l = 0; l < t.states.size(); ++l) {
    json row;
    row["level"] = t.states[l].level;
    row["beta"] = t.states[l].beta;
    row["delta"] = t.delta[l];
    levels.push_back(std::move(row));
  }
  o["levels"] = std::move(levels);
  return o.dump(2);
}

int run_solve(const ExperimentConfig& cfg, std::ostream& log) {
  const ModelParams mp = model_params(cfg, cfg.eps.front());
  const BoundaryData data = boundary_data(cfg);
  json doc = config_json(cfg, "solve");
  json levels = json::array();
  bool all_ok = true;
  log << "nodes  h            energy                residual    iters  max_principle\n";
  for (std::size_t n : cfg.resolutions) {
    const Grid g = Grid::unit(cfg.p.size(), n);
    const SolveResult r = solve(mp, data, g, cfg.solver);
    double bmax = 0.0, imax = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      double& m = g.is_boundary(k) ? bmax : imax;
      m = std::max(m, std::abs(r.u[k]));
    }
    const bool max_ok = imax <= bmax + 1e-10;
    all_ok = all_ok && max_ok;

    json row;
    row["nodes"] = n;
    row["h"] = h_of(n);
    row["energy"] = r.energy;
    row["initial_energy"] = r.initial_energy;
    row["residual_max"] = r.residual_max;
    row["iterations"] = r.iterations;
    row["converged"] = r.converged;
    row["max_interior"] = imax;
    row["max_boundary"] = bmax;
    row["max_principle"] = max_ok;
    levels.push_back(std::move(row));

    const std::string stem = "u_" + std::to_string(n);
    if (cfg.csv) {
      auto os = open_out(cfg, stem + ".csv");
      write_field_csv(r.u, os);
    }
    if (cfg.binary) {
      auto os = open_out(cfg, stem + ".bin");
      write_field_binary(r.u, os);
    }
    char line[160];
    std::snprintf(line, sizeof line, "%-6zu %-12s %-21.15g %-11.3e %-6ld %s\n", n, fmt(h_of(n)).c_str(), r.energy,
                  r.residual_max, r.iterations, max_ok ? "ok" : "VIOLATED");
    log << line;
  }
  doc["levels"] = std::move(levels);
  doc["pass"] = all_ok;
  if (cfg.json) write_json(cfg, "solve.json", doc);
  return all_ok ? kPass : kCheckFailed;
}

int run_sweep(const ExperimentConfig& cfg, std::ostream& log) {
  const std::size_t n = cfg.resolutions.back();
  const Grid g = Grid::unit(cfg.p.size(), n);
  const SweepResult sw = sweep_eps(model_params(cfg, cfg.eps.front()), cfg.eps, boundary_data(cfg), g, cfg.solver);

  bool monotone = true;
  for (std::size_t k = 1; k < sw.table.size(); ++k) {
    const auto& a = sw.table[k - 1].diff_lp1;
    const auto& b = sw.table[k].diff_lp1;
    if (a && b && *b > *a + 1e-10) monotone = false;
  }
  json doc = config_json(cfg, "sweep");
  doc["nodes"] = n;
  json rows = json::array();
  log << "eps          energy                competitor            iters  diff_lp1\n";
  for (const auto& r : sw.table) {
    json row;
    row["eps"] = r.eps;
    row["energy"] = r.energy;
    row["competitor_energy"] = r.competitor_energy;
    row["residual_max"] = r.residual_max;
    row["iterations"] = r.iterations;
    row["diff_lp1"] = r.diff_lp1 ? json(*r.diff_lp1) : json(nullptr);
    row["diff_grad"] = r.diff_grad;
    rows.push_back(std::move(row));
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %-21.15g %-21.15g %-6ld %s\n", fmt(r.eps).c_str(), r.energy,
                  r.competitor_energy, r.iterations, r.diff_lp1 ? fmt(*r.diff_lp1).c_str() : "-");
    log << line;
  }
  doc["rows"] = std::move(rows);
  doc["energy_bound_holds"] = sw.energy_bound_holds;
  doc["diffs_non_increasing"] = monotone;
  const bool pass = sw.energy_bound_holds && monotone;
  doc["pass"] = pass;
  if (cfg.json) write_json(cfg, "sweep.json", doc);
  if (cfg.csv) {
    auto os = open_out(cfg, "sweep.csv");
    write_sweep_csv(sw, os);
  }
  log << "energy bound " << (sw.energy_bound_holds ? "holds" : "FAILS") << ", differences "
      << (monotone ? "non-increasing" : "INCREASE") << '\n';
  return pass ? kPass : kCheckFailed;
}

int run_verify(const ExperimentConfig& cfg, std::ostream& log) {
  const auto specs = resolved_checks(cfg);
  const std::size_t n = cfg.resolutions.back();
  const ModelParams mp = model_params(cfg, cfg.eps.front());
  const SolveResult sol = solve(mp, boundary_data(cfg), Grid::unit(cfg.p.size(), n), cfg.solver);

  json doc = config_json(cfg, "verify");
  doc["nodes"] = n;
  doc["residual_max"] = sol.residual_max;
  doc["iterations"] = sol.iterations;
  json reports = json::array();
  bool all = true;
  std::string csv = "label,check,lhs,rhs_core,constant,pass\n";
  log << "label                check                      lhs          rhs_core     constant     pass\n";
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const EstimateReport r = run_check(specs[c], sol, mp);
    all = all && r.pass;
    json entry;
    entry["label"] = cfg.checks[c].label;
    const json parsed = json::parse(report_json(r));
    for (const auto& [k, v] : parsed.items()) entry[k] = v;
    reports.push_back(std::move(entry));
    char line[256];
    std::snprintf(line, sizeof line, "%s,%s,%.17g,%.17g,%.17g,%d\n", cfg.checks[c].label.c_str(), r.check.c_str(),
                  r.lhs, r.rhs_core, r.empirical_constant, r.pass ? 1 : 0);
    csv += line;
    std::snprintf(line, sizeof line, "%-20s %-26s %-12.5g %-12.5g %-12.5g %s%s\n", cfg.checks[c].label.c_str(),
                  r.check.c_str(), r.lhs, r.rhs_core, r.empirical_constant, r.pass ? "pass" : "FAIL",
                  r.note.empty() ? "" : ("  (" + r.note + ")").c_str());
    log << line;
  }
  doc["reports"] = std::move(reports);
  doc["pass"] = all;
  if (cfg.json) write_json(cfg, "verify.json", doc);
  if (cfg.csv) open_out(cfg, "verify.csv") << csv;
  return all ? kPass : kCheckFailed;
}

int run_study(const ExperimentConfig& cfg, const Overrides& over, std::ostream& log) {
  const auto specs = resolved_checks(cfg);
  const auto studies = refinement_study(model_params(cfg, cfg.eps.front()), boundary_data(cfg), cfg.solver,
                                        cfg.study, specs);
  json doc = config_json(cfg, "study");
  doc["final_tolerance"] = cfg.study.final_tolerance;
  doc["spread_tolerance"] = cfg.study.spread_tolerance;
  json arr = json::array();
  bool all = true;
  log << "label                check                      final_growth  spread      pass\n";
  for (std::size_t c = 0; c < studies.size(); ++c) {
    const auto& s = studies[c];
    const std::string& label = cfg.checks[c].label;
    all = all && s.pass;
    json entry;
    entry["label"] = label;
    const json parsed = json::parse(study_json(s));
    for (const auto& [k, v] : parsed.items()) entry[k] = v;
    arr.push_back(std::move(entry));
    if (cfg.csv) {
      auto os = open_out(cfg, "study_" + label + ".csv");
      write_study_csv(s, os);
    }
    if (over.emit_plot_data) {
      auto os = open_out(cfg, "plot_" + label + ".csv");
      os << "h,constant\n";
      char buf[80];
      for (const auto& l : s.levels) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", l.h, l.report.empirical_constant);
        os << buf;
      }
    }
    char line[200];
    std::snprintf(line, sizeof line, "%-20s %-26s %-+13.4f %-11.4f %s\n", label.c_str(), s.check.c_str(),
                  s.final_growth, s.spread, s.pass ? "pass" : "FAIL");
    log << line;
  }
  doc["studies"] = std::move(arr);
  doc["pass"] = all;
  if (cfg.json) write_json(cfg, "study.json", doc);
  return all ? kPass : kCheckFailed;
}

}  // namespace orthlip::cli
