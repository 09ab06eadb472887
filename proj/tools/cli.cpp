#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "frob/error.hpp"
#include "frob/estimator.hpp"
#include "frob/frobenius.hpp"
#include "frob/legendre.hpp"
#include "frob/ode.hpp"
#include "frob/problem_io.hpp"
#include "frob/validation/acceptance.hpp"
#include "frob/wkb.hpp"

namespace frob::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kSchemaVersion = 1;

struct Common {
  bool json = false;
  bool reproducible = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

SolutionSpec solution_spec(const ProblemFile& pf, const std::string& branch, const std::string& init) {
  SolutionSpec s;
  s.branch = parse_branch(branch);
  s.initial = pf.initial;
  if (!init.empty()) {
    const auto parts = split(init, ';');
    if (parts.size() != 2) throw ParseError("--init expects 'a;b'");
    s.initial = std::pair{QComplex::parse(parts[0]), QComplex::parse(parts[1])};
  }
  return s;
}

json complex_json(const ArbComplex& z, int digits) {
  return {{"re", z.re().to_string(digits)}, {"im", z.im().to_string(digits)}};
}

std::string roots_text(const IndicialData& d) {
  if (d.exact()) return to_string(*d.nu1_exact) + ", " + to_string(*d.nu2_exact);
  return d.nu1(kClassificationBits).to_string(20) + ", " + d.nu2(kClassificationBits).to_string(20);
}

void emit_json(std::ostream& out, const std::string& command, json result, const Common& c, Clock::time_point t0) {
  if (!c.reproducible)
    result["wall_time_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  out << json{{"schema_version", kSchemaVersion}, {"command", command}, {"result", std::move(result)}}.dump(2)
      << "\n";
}

void emit_wall_time(std::ostream& out, const Common& c, Clock::time_point t0) {
  if (c.reproducible) return;
  char buf[64];
  std::snprintf(buf, sizeof buf, "wall_time_ms: %.1f\n",
                std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  out << buf;
}

// CSV goes to --out when given, else to stdout.
void with_output(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw InvalidInput("cannot write '" + path + "'");
  write(file);
}

std::string fixed(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// --- classify ---------------------------------------------------------------

void cmd_classify(const std::string& file, const Common& c, std::ostream& out) {
  const auto t0 = Clock::now();
  const ProblemFile pf = load_problem(file);
  const ODEProblem norm = normalize_origin(pf.problem);
  const PointClass pc = classify_origin(norm);
  if (pc == PointClass::Irregular) throw UnsupportedClassification("the origin is an irregular singular point");

  json result{{"name", pf.name}, {"point_class", to_string(pc)}};
  std::string summary = to_string(pc);
  if (pc != PointClass::Ordinary) {
    const IndicialData d = indicial_roots(norm);
    std::string kase = to_string(d.index_case);
    if (d.index_case == IndexCase::IntegerDiff) kase += "(" + std::to_string(d.ell) + ")";
    const std::string roots = roots_text(d);
    summary = kase + ", nu=" + (d.index_case == IndexCase::Degenerate ? roots.substr(0, roots.find(',')) : roots);
    result["index_case"] = to_string(d.index_case);
    result["ell"] = d.ell;
    result["roots"] = roots;
  }
  result["summary"] = summary;
  if (c.json) return emit_json(out, "classify", result, c, t0);
  out << summary << "\n" << "point_class: " << to_string(pc) << "\n";
  emit_wall_time(out, c, t0);
}

// --- solve ------------------------------------------------------------------

struct SolveArgs {
  std::string file, at, path, solution = "auto", init;
  int precision = 50;
};

void cmd_solve(const SolveArgs& a, const Common& c, std::ostream& out) {
  const auto t0 = Clock::now();
  if (a.precision < 1) throw InvalidInput("--precision must be >= 1");
  const ProblemFile pf = load_problem(a.file);
  const SolutionSpec spec = solution_spec(pf, a.solution, a.init);
  const QComplex z = QComplex::parse(a.at);

  EvalResult r;
  if (a.path.empty()) {
    r = evaluate(pf.problem, spec, z, a.precision);
  } else {
    std::vector<QComplex> path;
    for (const auto& p : split(a.path, ';')) path.push_back(QComplex::parse(p));
    if (path.empty()) throw ParseError("--path is empty");
    const QComplex start = path.front();
    path.erase(path.begin());
    path.push_back(z);
    const int guard = continuation_guard_digits(path.size());
    const EvalResult s = evaluate(pf.problem, spec, start, a.precision + guard);
    r = continue_along(pf.problem, s.value, s.derivative, start, path, a.precision);
  }

  const int digits = a.precision;
  if (c.json) {
    json result{{"inputs",
                 {{"file", a.file}, {"at", a.at}, {"precision", a.precision}, {"solution", a.solution},
                  {"path", a.path}}},
                {"value", complex_json(r.value, digits)},
                {"derivative", complex_json(r.derivative, digits)},
                {"M_used", r.M_used},
                {"max_term_log10", r.max_term_log10},
                {"achieved_digits_estimate", r.achieved_digits_estimate},
                {"working_bits", r.working_bits},
                {"tail_bound_log10", r.tail_bound_log10}};
    return emit_json(out, "solve", result, c, t0);
  }
  out << "value: " << r.value.to_string(digits) << "\n"
      << "derivative: " << r.derivative.to_string(digits) << "\n"
      << "M_used: " << r.M_used << "\n"
      << "max_term_log10: " << fixed("%.3f", r.max_term_log10) << "\n"
      << "achieved_digits_estimate: " << fixed("%.1f", r.achieved_digits_estimate) << "\n";
  emit_wall_time(out, c, t0);
}

// --- coeffs -----------------------------------------------------------------

struct CoeffArgs {
  std::string file, solution = "auto", init, out;
  long count = 20;
  int digits = 20;
};

void cmd_coeffs(const CoeffArgs& a, std::ostream& out) {
  if (a.count < 1) throw InvalidInput("--count must be >= 1");
  if (a.digits < 1) throw InvalidInput("--digits must be >= 1");
  const ProblemFile pf = load_problem(a.file);
  const auto sol = make_solution<ArbComplex>(pf.problem, solution_spec(pf, a.solution, a.init),
                                             bits_for_digits(a.digits + kGuardMargin));
  with_output(a.out, out, [&](std::ostream& os) { write_coefficients_csv(os, sol, a.count, a.digits); });
}

// --- estimate / profile -----------------------------------------------------

struct WkbArgs {
  std::string order = "full";
  int n_phi = 64;
  int jobs = 1;
};

ProfileOptions profile_options(const WkbArgs& w) {
  ProfileOptions po;
  if (w.order == "full") {
    po.wkb.order = WkbOrder::Full;
  } else if (w.order == "leading") {
    po.wkb.order = WkbOrder::Leading;
  } else {
    throw ParseError("--order expects full or leading");
  }
  po.n_phi = w.n_phi;
  po.jobs = w.jobs;
  return po;
}

CanonicalProblem require_canonical(const ProblemFile& pf) {
  if (!pf.canonical) throw Unsupported("WKB profiles need a problem given in canonical form");
  return *pf.canonical;
}

struct EstimateArgs {
  std::string file, at, solution = "auto", csv;
  int precision = 50;
  bool no_one_loop = false;
  WkbArgs wkb;
};

void cmd_estimate(const EstimateArgs& a, const Common& c, std::ostream& out) {
  const auto t0 = Clock::now();
  const ProblemFile pf = load_problem(a.file);
  EstimateOptions opt;
  opt.profile = profile_options(a.wkb);
  opt.curve.one_loop = !a.no_one_loop;
  opt.solution = solution_spec(pf, a.solution, "");
  const ArbReal xr = ArbReal::parse(a.at, 64);
  const double x = xr.to_double();
  const auto report = estimate(require_canonical(pf), x, a.precision, opt);
  if (!a.csv.empty()) with_output(a.csv, out, [&](std::ostream& os) { write_estimate_csv(os, report.curve); });

  if (c.json) {
    json result{{"inputs", {{"file", a.file}, {"at", a.at}, {"precision", a.precision}, {"order", a.wkb.order},
                            {"one_loop", !a.no_one_loop}}},
                {"nu", report.nu},
                {"m_peak", report.max_term.m_peak},
                {"log10_max_term", report.max_term.log10_max_term},
                {"num_terms", report.num_terms}};
    return emit_json(out, "estimate", result, c, t0);
  }
  out << "nu: " << fixed("%.6g", report.nu) << "\n"
      << "m_peak: " << fixed("%.2f", report.max_term.m_peak) << "\n"
      << "log10_max_term: " << fixed("%.3f", report.max_term.log10_max_term) << "\n"
      << "num_terms: " << report.num_terms << "\n";
  emit_wall_time(out, c, t0);
}

struct ProfileArgs {
  std::string file, u, out;
  WkbArgs wkb;
};

void cmd_profile(const ProfileArgs& a, std::ostream& out) {
  const auto parts = split(a.u, ':');
  if (parts.size() != 3) throw ParseError("--u expects a:b:n");
  double lo = 0, hi = 0;
  int n = 0;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    std::size_t used = 0;
    n = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("n");
  } catch (const std::logic_error&) {
    throw ParseError("--u expects a:b:n with numbers a, b and an integer n");
  }
  const ProblemFile pf = load_problem(a.file);
  const auto profile = s_profile(require_canonical(pf), uniform_grid(lo, hi, n), profile_options(a.wkb));
  with_output(a.out, out, [&](std::ostream& os) { write_profile_csv(os, profile); });
}

// --- demo / validate --------------------------------------------------------

void cmd_demo(int n, const std::string& path, std::ostream& out) {
  const auto rows = binomial_demo(n);
  with_output(path, out, [&](std::ostream& os) { write_binomial_csv(os, rows); });
}

int cmd_validate(const std::vector<int>& ids, const Common& c, std::ostream& out) {
  const auto t0 = Clock::now();
  int failed = 0;
  json items = json::array();
  for (int id : ids.empty() ? validation::criterion_ids() : ids) {
    const auto r = validation::run_criterion(id);
    failed += r.passed ? 0 : 1;
    if (c.json) {
      json item{{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}};
      if (!c.reproducible) item["seconds"] = r.seconds;
      items.push_back(item);
    } else {
      auto line = validation::format_line(r);
      if (c.reproducible) line = line.substr(0, line.rfind(" ("));
      out << line << "\n" << std::flush;
    }
  }
  if (c.json) {
    emit_json(out, "validate", json{{"criteria", items}, {"failed", failed}}, c, t0);
  } else {
    out << failed << " criteria failed\n";
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frobenius series solver and coefficient estimator"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--json", common.json, "JSON envelope output");
  app.add_flag("--reproducible", common.reproducible, "omit wall-clock times");

  std::string file;
  auto* classify = app.add_subcommand("classify", "classify the expansion point");
  classify->add_option("file", file, "problem file (JSON, '-' for stdin)")->required();

  SolveArgs solve;
  auto* sv = app.add_subcommand("solve", "evaluate a series solution");
  sv->add_option("file", solve.file, "problem file")->required();
  sv->add_option("--at", solve.at, "evaluation point re[,im]")->required();
  sv->add_option("--precision,-P", solve.precision, "decimal digits");
  sv->add_option("--path", solve.path, "intermediate points z1;z2;...");
  sv->add_option("--solution", solve.solution, "auto, nu1, nu2 or log");
  sv->add_option("--init", solve.init, "initial data a;b");

  CoeffArgs coeffs;
  auto* co = app.add_subcommand("coeffs", "dump series coefficients as CSV");
  co->add_option("file", coeffs.file, "problem file")->required();
  co->add_option("--count,-M", coeffs.count, "number of coefficients");
  co->add_option("--digits", coeffs.digits, "significant digits per entry");
  co->add_option("--solution", coeffs.solution, "auto, nu1, nu2 or log");
  co->add_option("--init", coeffs.init, "initial data a;b");
  co->add_option("--out,-o", coeffs.out, "output file");

  auto add_wkb = [](CLI::App* sub, WkbArgs& w) {
    sub->add_option("--order", w.order, "WKB amplitude: full or leading");
    sub->add_option("--n-phi", w.n_phi, "phases in the coarse scan (>= 64)");
    sub->add_option("--jobs,-j", w.jobs, "threads over grid points");
  };

  EstimateArgs est;
  auto* es = app.add_subcommand("estimate", "predict coefficient sizes and term count");
  es->add_option("file", est.file, "problem file (canonical form)")->required();
  es->add_option("--at", est.at, "modulus x > 0")->required();
  es->add_option("--precision,-P", est.precision, "decimal digits");
  es->add_option("--solution", est.solution, "auto, nu1, nu2 or log");
  es->add_option("--csv", est.csv, "write the estimate curve to this file");
  es->add_flag("--no-one-loop", est.no_one_loop, "skip the log S'' correction");
  add_wkb(es, est.wkb);

  ProfileArgs prof;
  auto* pr = app.add_subcommand("profile", "WKB growth profile S(u) as CSV");
  pr->add_option("file", prof.file, "problem file (canonical form)")->required();
  pr->add_option("--u", prof.u, "grid a:b:n")->required();
  pr->add_option("--out,-o", prof.out, "output file");
  add_wkb(pr, prof.wkb);

  int demo_n = 10;
  std::string demo_out;
  auto* demo = app.add_subcommand("demo-binomial", "coin-flip distribution table as CSV");
  demo->add_option("--n,-N", demo_n, "number of coins");
  demo->add_option("--out,-o", demo_out, "output file");

  std::vector<int> criteria;
  auto* val = app.add_subcommand("validate", "run the acceptance corpus");
  val->add_option("criteria", criteria, "criterion ids (default: all)");

  // CLI11 wants argv; keep the strings alive for the parse.
  std::vector<std::string> argv_store{"frobenius"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*classify) cmd_classify(file, common, out);
    if (*sv) cmd_solve(solve, common, out);
    if (*co) cmd_coeffs(coeffs, out);
    if (*es) cmd_estimate(est, common, out);
    if (*pr) cmd_profile(prof, out);
    if (*demo) cmd_demo(demo_n, demo_out, out);
    if (*val) return cmd_validate(criteria, common, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

}  // namespace frob::cli
