#include "verify.hpp"

#include "qnl/continuation1d.hpp"
#include "qnl/models2d.hpp"
#include "qnl/output.hpp"
#include "qnl/stability1d.hpp"
#include "qnl/stability2d.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace qnl;

namespace {

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Subcommand {
  std::string name, help;
  ConfigMap defaults;
};

const ConfigMap kCommon = {{"output", "results"}, {"jobs", "1"}, {"seed", "20240531"}};

std::vector<Subcommand> subcommands() {
  return {
      {"gamma1d", "atomistic stability constant of a second-neighbour quadratic",
       {{"alpha", "-0.99"}, {"beta", "0.1"}, {"gamma", "0.15"}, {"delta", "-0.2"}, {"points", "401"}}},
      {"counterexample1d", "smallest eigenvalue of the qnl2 Hessian on a window",
       {{"alpha", "-0.99"}, {"beta", "0.1"}, {"gamma", "0.15"}, {"delta", "-0.2"}, {"window", "500"}}},
      {"critstrain1d", "critical-strain convergence study on graded meshes",
       {{"schemes", "reflection,stabilized_qnl,qnl2"},
        {"N_list", "32,64,128,256,512"},
        {"load_alpha", "1.5"},
        {"load_beta", "0.01"},
        {"kappa", "0.1"},
        {"F_start", "1.0"},
        {"dF", "0.01"},
        {"tol_F", "1e-8"},
        {"F_max", "3.0"},
        {"eam_A", "3.0"},
        {"eam_B", "3.0"},
        {"eam_C", "5.0"}}},
      {"region2d", "stability raster over the parameter triangle",
       {{"scheme", "qce"}, {"resolution", "64"}, {"split", "0.2"}, {"kgrid", "64"}, {"N2", "16"}}},
      {"kappa-scan", "negative eigenvalue of K0 + kappa S against kappa",
       {{"kappas", "4,8,16,32,64,128"}, {"M", "0"}, {"N2", "32768"}}},
      {"gap2d", "vectorial critical expansions, atomistic vs grac23",
       {{"eam_A", "3.0"},
        {"eam_B", "3.0"},
        {"eam_C", "1.0"},
        {"eam_D", "-0.5"},
        {"t_lo", "1.2"},
        {"t_hi", "1.25"},
        {"steps", "10"},
        {"t_tol", "1e-7"},
        {"M", "24"},
        {"N2", "24"},
        {"kappa", "0"}}},
      {"verify", "acceptance checks", {{"criteria", "1,2,3,4,5,6,7,8,9,10,11,12,13"}}},
  };
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

// Flat "key = value" lines; '#' starts a comment.
ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path);
  ConfigMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key = value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

class Config {
 public:
  explicit Config(ConfigMap m) : m_(std::move(m)) {}
  const ConfigMap& map() const { return m_; }
  const std::string& str(const std::string& k) const { return m_.at(k); }

  double real(const std::string& k) const {
    try {
      size_t pos = 0;
      double v = std::stod(str(k), &pos);
      if (pos == str(k).size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ValidationError(k + ": not a number: '" + str(k) + "'");
  }
  long long integer(const std::string& k) const {
    try {
      size_t pos = 0;
      long long v = std::stoll(str(k), &pos);
      if (pos == str(k).size()) return v;
    } catch (const std::exception&) {
    }
    throw ValidationError(k + ": not an integer: '" + str(k) + "'");
  }
  int positive(const std::string& k) const {
    long long v = integer(k);
    if (v < 1 || v > 1 << 30) throw ValidationError(k + " must be a positive integer");
    return int(v);
  }
  std::vector<std::string> list(const std::string& k) const {
    std::vector<std::string> out;
    std::stringstream ss(str(k));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (out.empty()) throw ValidationError(k + " is empty");
    return out;
  }
  std::vector<double> reals(const std::string& k) const {
    std::vector<double> out;
    for (const auto& s : list(k)) out.push_back(Config(ConfigMap{{k, s}}).real(k));
    return out;
  }
  std::vector<int> ints(const std::string& k) const {
    std::vector<int> out;
    for (const auto& s : list(k)) out.push_back(Config(ConfigMap{{k, s}}).positive(k));
    return out;
  }

 private:
  ConfigMap m_;
};

struct Output {
  fs::path dir;
  std::string stem;

  std::ofstream open(const std::string& ext) const {
    fs::create_directories(dir);
    std::ofstream os(dir / (stem + ext));
    if (!os) throw ValidationError("cannot write to " + (dir / (stem + ext)).string());
    return os;
  }
  void json_summary(const Config& cfg, const json& summary) const {
    json j;
    j["config"] = cfg.map();
    j["summary"] = summary;
    open(".json") << j.dump(2) << '\n';
  }
};

// ---------------------------------------------------------------------------

int run_gamma1d(const Config& c, const Output& out) {
  SymbolCoeffs1D s = symbol_coeffs(c.real("alpha"), c.real("beta"), c.real("gamma"), c.real("delta"));
  FourierMin fm = gamma_atomistic_fourier(s);
  int n = c.positive("points");
  if (n < 2) throw ValidationError("points must be at least 2");
  auto os = out.open(".csv");
  CsvWriter w(os, c.map(), {"s", "symbol"});
  for (int i = 0; i < n; ++i) {
    double x = 4.0 * i / (n - 1);
    w.row({x, s.at(x)});
  }
  out.json_summary(c, {{"gamma_a", fm.gamma}, {"s_star", fm.s_star}});
  std::cout << "gamma_a=" << format_real(fm.gamma) << " s_star=" << format_real(fm.s_star) << '\n';
  return 0;
}

int run_counterexample1d(const Config& c, const Output& out) {
  int N = c.positive("window");
  CounterexampleReport r = counterexample_report(N, c.real("alpha"), c.real("beta"), c.real("gamma"), c.real("delta"));
  auto os = out.open(".csv");
  CsvWriter w(os, c.map(), {"xi", "u"});
  for (int i = 0; i < r.eigvec.size(); ++i) w.row({(long long)(i - N + 1), r.eigvec[i]});
  out.json_summary(c, {{"gamma_a", r.gamma_a}, {"lambda_qnl", r.lambda_qnl}, {"window", r.window}});
  std::cout << "gamma_a=" << format_real(r.gamma_a) << " lambda_qnl=" << format_real(r.lambda_qnl) << '\n';
  return 0;
}

int run_critstrain1d(const Config& c, const Output& out, int jobs) {
  std::vector<Scheme1D> schemes;
  for (const auto& s : c.list("schemes")) schemes.push_back(parse_scheme_1d(s));
  auto V = std::make_shared<EamChain1D>(c.real("eam_A"), c.real("eam_B"), c.real("eam_C"));
  ContinuationOptions co;
  co.F_start = c.real("F_start");
  co.dF = c.real("dF");
  co.tol_F = c.real("tol_F");
  co.F_max = c.real("F_max");
  StudyResult r = convergence_study(schemes, c.ints("N_list"), V, LoadCase{c.real("load_alpha"), c.real("load_beta")},
                                    c.real("kappa"), co, jobs);
  auto os = out.open(".csv");
  CsvWriter w(os, c.map(), {"scheme", "N", "dofs", "F_crit", "rel_error"});
  for (const auto& row : r.rows) w.row({row.scheme, (long long)row.N, (long long)row.dofs, row.F_crit, row.rel_error});
  out.json_summary(c, {{"F_ref", r.F_ref}, {"fit_exponent", r.fit_exponent}, {"rows", r.rows.size()}});
  std::cout << "F_ref=" << format_real(r.F_ref) << " fit_exponent=" << format_real(r.fit_exponent) << " rows="
            << r.rows.size() << '\n';
  return 0;
}

int run_region2d(const Config& c, const Output& out, int jobs) {
  InterfaceScheme s = parse_scheme_2d(c.str("scheme"));
  RegionScanOptions o;
  o.resolution = c.positive("resolution");
  o.split = c.real("split");
  o.kgrid = c.positive("kgrid");
  o.N2 = c.positive("N2");
  o.jobs = jobs;
  auto cells = stability_region_scan(s, o);
  auto os = out.open(".csv");
  CsvWriter w(os, c.map(), {"ix", "iy", "x", "y", "stable", "min_value"});
  long long stable = 0;
  for (const auto& cell : cells) {
    stable += cell.stable;
    w.row({(long long)cell.ix, (long long)cell.iy, cell.p.x, cell.p.y, (long long)cell.stable, cell.min_value});
  }
  out.json_summary(c, {{"scheme", s.name()}, {"cells", cells.size()}, {"stable", stable}});
  std::cout << s.name() << " stable cells " << stable << "/" << cells.size() << " split=" << c.str("split") << '\n';
  return 0;
}

int run_kappa_scan(const Config& c, const Output& out, int jobs) {
  long long M = c.integer("M");
  if (M < 0) throw ValidationError("M must be >= 0");
  KappaScaling r = kappa_scaling(c.reals("kappas"), int(M), c.positive("N2"), jobs);
  auto os = out.open(".csv");
  CsvWriter w(os, c.map(), {"kappa", "depth", "lambda", "lambda_doubled"});
  for (size_t i = 0; i < r.kappa.size(); ++i) w.row({r.kappa[i], (long long)r.depth[i], r.lambda[i], r.lambda_doubled[i]});
  out.json_summary(c, {{"slope", r.slope}, {"max_doubling_change", r.max_doubling_change}});
  std::cout << "slope=" << format_real(r.slope) << " max_doubling_change=" << format_real(r.max_doubling_change) << '\n';
  return 0;
}

int run_gap2d(const Config& c, const Output& out) {
  auto V = std::make_shared<EamPlanar2D>(c.real("eam_A"), c.real("eam_B"), c.real("eam_C"), c.real("eam_D"));
  GapOptions o;
  o.t_lo = c.real("t_lo");
  o.t_hi = c.real("t_hi");
  o.steps = c.positive("steps");
  o.t_tol = c.real("t_tol");
  o.M = c.positive("M");
  o.N2 = c.positive("N2");
  o.kappa = c.real("kappa");
  if (!(o.t_lo < o.t_hi)) throw ValidationError("need t_lo < t_hi");
  GapExperiment g = vectorial_gap_experiment(V, o);
  auto os = out.open(".csv");
  CsvWriter w(os, c.map(), {"t", "lambda_atomistic", "lambda_grac23"});
  for (const auto& r : g.records) w.row({r.t, r.lambda_a, r.lambda_grac});
  out.json_summary(c, {{"t_atomistic", g.t_atomistic},
                       {"t_grac23", g.t_grac},
                       {"gap", g.t_atomistic - g.t_grac},
                       {"mass_atomistic", g.mass_a},
                       {"mass_grac23", g.mass_grac}});
  std::cout << "t_atomistic=" << format_real(g.t_atomistic) << " t_grac23=" << format_real(g.t_grac)
            << " mass_grac23=" << format_real(g.mass_grac) << '\n';
  return 0;
}

int run_verify(const Config& c, const Output& out, int jobs) {
  verify::VerifyOptions o;
  o.jobs = jobs;
  o.seed = std::uint64_t(c.integer("seed"));
  std::vector<int> ids = c.ints("criteria");
  for (int id : ids)
    if (id > verify::kCriteria) throw ValidationError("no criterion " + std::to_string(id));
  auto os = out.open(".csv");
  CsvWriter w(os, c.map(), {"criterion", "name", "pass", "detail"});
  json summary = json::array();
  int failed = 0;
  for (int id : ids) {
    verify::Criterion r = verify::run_criterion(id, o);
    std::cout << verify::format(r) << std::endl;
    w.row({(long long)r.id, r.name, (long long)r.pass, r.detail});
    summary.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    failed += !r.pass;
  }
  out.json_summary(c, summary);
  std::cout << ids.size() - failed << "/" << ids.size() << " criteria pass\n";
  return failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qnlab: stability of atomistic-to-continuum coupling schemes"};
  app.require_subcommand(1);

  struct Parsed {
    std::string config_file;
    std::map<std::string, std::string> flags;
  };
  auto subs = subcommands();
  std::vector<Parsed> parsed(subs.size());
  for (size_t i = 0; i < subs.size(); ++i) {
    CLI::App* sc = app.add_subcommand(subs[i].name, subs[i].help);
    sc->add_option("--config", parsed[i].config_file, "flat key = value file");
    ConfigMap keys = subs[i].defaults;
    keys.insert(kCommon.begin(), kCommon.end());
    for (const auto& [k, v] : keys) {
      std::string flag = "--" + k;
      std::replace(flag.begin() + 2, flag.end(), '_', '-');
      sc->add_option(flag, parsed[i].flags[k], "default " + v);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  size_t which = 0;
  for (; which < subs.size(); ++which)
    if (app.got_subcommand(subs[which].name)) break;
  const Subcommand& sub = subs[which];

  try {
    ConfigMap cfg = kCommon;
    cfg.insert(sub.defaults.begin(), sub.defaults.end());
    if (!parsed[which].config_file.empty())
      for (const auto& [k, v] : read_config_file(parsed[which].config_file)) {
        if (!cfg.count(k)) throw ValidationError("unknown config key '" + k + "' for " + sub.name);
        cfg[k] = v;
      }
    for (const auto& [k, v] : parsed[which].flags)
      if (!v.empty()) cfg[k] = v;
    if (const char* env = std::getenv("QNL_OUTPUT_DIR"); env && *env) cfg["output"] = env;

    Config c(cfg);
    int jobs = c.positive("jobs");
    c.integer("seed");
    Output out{c.str("output"), sub.name};

    if (sub.name == "gamma1d") return run_gamma1d(c, out);
    if (sub.name == "counterexample1d") return run_counterexample1d(c, out);
    if (sub.name == "critstrain1d") return run_critstrain1d(c, out, jobs);
    if (sub.name == "region2d") return run_region2d(c, out, jobs);
    if (sub.name == "kappa-scan") return run_kappa_scan(c, out, jobs);
    if (sub.name == "gap2d") return run_gap2d(c, out);
    return run_verify(c, out, jobs);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}
