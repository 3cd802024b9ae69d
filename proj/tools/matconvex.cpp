// matconvex command-line front end. JSON reports go to stdout (or --output); anything
// meant for people goes to stderr.
//
// exit codes: 0 pass/success, 1 fail with certificate, 2 usage error, 3 indeterminate

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matconvex/matconvex.hpp"

using namespace matconvex;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIndeterminate = 3;

constexpr const char* kSeedEnv = "MATCONVEX_SEED";

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(std::string(kSeedEnv) + " is not an unsigned integer: '" + env + "'");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(detail::parse_real(item));
  if (out.empty()) throw ParseError("empty number list");
  return out;
}

struct RunConfig {
  std::string command;
  std::string function;
  std::string interval;
  int order = 2;
  int trials = 200;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
  std::string output;
  int jobs = 1;
  Json options = Json::object();  // subcommand-specific flags

  Json to_json() const {
    return {{"command", command},
            {"function", function.empty() ? Json(nullptr) : Json(function)},
            {"interval", interval.empty() ? Json(nullptr) : Json(interval)},
            {"order", order},
            {"trials", trials},
            {"seed", seed},
            {"tolerance", tolerance},
            {"output", output.empty() ? Json(nullptr) : Json(output)},
            {"jobs", jobs},
            {"options", options}};
  }
};

struct Outcome {
  Json result;
  int exit_code = kExitPass;
};

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::pass: return kExitPass;
    case Verdict::fail: return kExitFail;
    default: return kExitIndeterminate;
  }
}

FunctionModel function_on(const RunConfig& rc) {
  if (rc.interval.empty()) return parse_function(rc.function);
  return parse_function(rc.function, parse_interval(rc.interval));
}

Interval interval_of(const RunConfig& rc, const FunctionModel& f) {
  return rc.interval.empty() ? f.domain().interior() : parse_interval(rc.interval);
}

SamplerConfig sampler_of(const RunConfig& rc, const std::string& strategy) {
  SamplerConfig c;
  c.trials = rc.trials;
  c.seed = rc.seed;
  c.tolerance = rc.tolerance;
  c.node_strategy = parse_strategy(strategy);
  return c;
}

// --- subcommands -------------------------------------------------------------

struct DivdiffArgs {
  std::string nodes;
  std::string precision = "auto";
};

Outcome run_divdiff(const RunConfig& rc, const DivdiffArgs& a) {
  FunctionModel f = function_on(rc);
  auto nodes = parse_list(a.nodes);
  DividedDifferenceOptions opt;
  if (a.precision == "standard") opt.precision = Precision::standard;
  if (a.precision == "extended") opt.precision = Precision::extended;
  DDTable t = divided_difference_table(f, nodes, opt);
  Json cols = Json::array();
  for (const auto& c : t.columns) cols.push_back(json::reals(c));
  return {{{"function", json::function(f)},
           {"input_nodes", json::reals(nodes)},
           {"canonical_nodes", json::reals(t.nodes)},
           {"columns", cols},
           {"value", json::real(t.top())}},
          kExitPass};
}

struct MatricesArgs {
  std::string kind = "kraus";
  std::string nodes;
  std::optional<double> s;
  std::optional<double> at;
};

Outcome run_matrices(const RunConfig& rc, const MatricesArgs& a) {
  FunctionModel f = function_on(rc);
  std::vector<double> nodes;
  std::optional<double> s;
  SymmetricMatrixReport rep;
  if (a.kind == "kraus" || a.kind == "pick") {
    if (a.nodes.empty()) throw ParseError("--nodes is required for kind " + a.kind);
    nodes = parse_list(a.nodes);
    if (a.kind == "kraus") {
      s = a.s.value_or(nodes.front());
      rep = kraus_matrix(f, nodes, *s, rc.tolerance);
    } else {
      rep = pick_matrix(f, nodes, rc.tolerance);
    }
  } else {
    if (!a.at) throw ParseError("--at is required for kind " + a.kind);
    nodes = {*a.at};
    rep = a.kind == "K" ? derivative_matrix_K(f, *a.at, rc.order, rc.tolerance)
                        : derivative_matrix_M(f, *a.at, rc.order, rc.tolerance);
  }
  Json j = json::symmetric(rep, a.kind);
  Json out{{"kind", a.kind}, {"nodes", json::reals(nodes)}, {"s", s ? json::real(*s) : Json(nullptr)}};
  for (auto& [k, v] : j.items())
    if (k != "kind") out[k] = v;
  out["function"] = json::function(f);
  return {out, rep.verdict == Definiteness::indefinite      ? kExitFail
               : rep.verdict == Definiteness::indeterminate ? kExitIndeterminate
                                                            : kExitPass};
}

Outcome run_classify(const RunConfig& rc, const std::string& property, const std::string& strategy) {
  FunctionModel f = function_on(rc);
  auto rep = classify(f, interval_of(rc, f), rc.order, parse_property(property), sampler_of(rc, strategy));
  return {json::classification(rep), exit_for(rep.verdict)};
}

struct GapArgs {
  int degree = 0;
  std::string kind = "concave";
  bool halfline = false;
  bool natural = false;
};

Outcome run_gap(const RunConfig& rc, const GapArgs& a) {
  const int m = a.degree > 0 ? a.degree : 2 * rc.order;
  if (a.halfline) {
    auto h = build_halfline_gap(rc.order);
    return {{{"base", json::gap(h.base)},
             {"shift", h.shift},
             {"halfline_interval", json::interval(h.model.domain())},
             {"model", json::function(h.model)}},
            kExitPass};
  }
  GapKind kind = parse_gap_kind(a.kind);
  GapPolynomial g = a.natural ? build_natural_gap_polynomial(rc.order, m, kind)
                              : build_gap_polynomial(rc.order, m, parse_interval(rc.interval.empty() ? "(-1,1)" : rc.interval), kind);
  return {json::gap(g), kExitPass};
}

struct TransformArgs {
  std::string kind = "T";
  double anchor = 0.0;
  std::string eval_at;
  int grid = 0;
  bool roundtrip = false;
};

inline constexpr double kCliRoundTripBound = 1e-8;

Outcome run_transform(const RunConfig& rc, const TransformArgs& a) {
  FunctionModel f = function_on(rc);
  Interval interval = interval_of(rc, f);
  TransformKind kind = parse_transform_kind(a.kind);
  TransformModel<FunctionModel> g(kind, f, a.anchor, interval);
  std::vector<double> points;
  if (!a.eval_at.empty()) points = parse_list(a.eval_at);
  if (a.grid > 0) {
    auto grid = interval.grid(static_cast<std::size_t>(a.grid));
    points.insert(points.end(), grid.begin(), grid.end());
  }
  Json values = Json::array();
  for (double t : points) values.push_back({{"t", t}, {"value", json::real(g(t))}, {"inverse", json::real(inverse_of(g, t))}});
  Json out{{"kind", transform_kind_name(kind)},
           {"function", json::function(f)},
           {"anchor", a.anchor},
           {"interval", json::interval(interval)},
           {"values", values}};
  int code = kExitPass;
  if (a.roundtrip) {
    auto rt = round_trip(f, kind, a.anchor, interval, a.grid > 0 ? a.grid : 64);
    out["roundtrip"] = {{"points", rt.grid.size()},
                        {"max_relative_error", json::real(rt.max_relative_error)},
                        {"bound", kCliRoundTripBound}};
    if (!(rt.max_relative_error <= kCliRoundTripBound)) code = kExitFail;
  }
  return {out, code};
}

Outcome run_oracle(const RunConfig& rc, const std::string& property) {
  FunctionModel f = function_on(rc);
  auto res = witness_search(f, interval_of(rc, f), rc.order, parse_property(property), rc.trials, rc.seed);
  Json out = json::witness_search(res);
  out["function"] = json::function(f);
  out["dimension"] = rc.order;
  out["threshold"] = kWitnessThreshold;
  return {out, res.witness ? kExitFail : kExitPass};
}

Outcome run_verify(const RunConfig& rc, const std::string& suite) {
  auto tasks = suite_tasks(suite);
  std::vector<CriterionResult> results;
  const std::size_t width = static_cast<std::size_t>(std::max(1, rc.jobs));
  for (std::size_t i = 0; i < tasks.size(); i += width) {
    std::vector<std::future<CriterionResult>> batch;
    for (std::size_t j = i; j < std::min(tasks.size(), i + width); ++j)
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, tasks[j].run, rc.seed));
    for (auto& fut : batch) results.push_back(fut.get());
  }
  Json criteria = Json::array();
  bool all = true;
  for (const auto& c : results) {
    criteria.push_back(json::criterion(c));
    all = all && c.pass();
    std::cerr << (c.pass() ? "PASS " : "FAIL ") << c.id << ". " << c.title << "\n";
    for (const auto& k : c.checks) {
      std::cerr << "     " << (k.pass ? "ok   " : "FAIL ") << k.name << "  [observed " << format_real(k.observed)
                << ", bound " << format_real(k.bound) << "]" << (k.note.empty() ? "" : "  " + k.note) << "\n";
    }
  }
  return {{{"suite", suite}, {"pass", all}, {"criteria", criteria}}, all ? kExitPass : kExitFail};
}

int emit(const RunConfig& rc, const Outcome& o, double seconds) {
  Json report{{"schema", kReportSchema},
              {"version", kVersion},
              {"run_config", rc.to_json()},
              {"exit_code", o.exit_code},
              {"result", o.result},
              {"timing", {{"wall_seconds", seconds}}}};
  std::string text = report.dump(2) + "\n";
  if (rc.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(rc.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + rc.output);
    out << text;
  }
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matconvex: matrix convexity and monotonicity of real functions"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_version_flag("--version", std::string(kVersion));

  RunConfig rc;
  std::string property = "convex", strategy = "mixed", suite = "all";
  DivdiffArgs dd;
  MatricesArgs mx;
  GapArgs gp;
  TransformArgs tr;
  std::optional<std::uint64_t> seed;

  app.add_option("--output,-o", rc.output, "write the JSON report to a file instead of stdout");
  app.add_option("--jobs,-j", rc.jobs, "parallel workers (verify runs criteria concurrently)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, std::string("RNG seed (default: $") + kSeedEnv + " or 0)");
  app.add_option("--tolerance", rc.tolerance, "relative eigenvalue tolerance")->check(CLI::PositiveNumber);

  auto common = [&](CLI::App* sub, bool needs_function) {
    auto* fn = sub->add_option("--function,-f", rc.function, "function spec, e.g. recip, poly:0,0,1, pow:0.5");
    if (needs_function) fn->required();
    sub->add_option("--interval,-i", rc.interval, "interval, e.g. (0.1,10) or [0,inf)");
  };

  auto* c_div = app.add_subcommand("divdiff", "divided-difference table");
  common(c_div, true);
  c_div->add_option("--nodes", dd.nodes, "comma-separated nodes; repeats are confluent")->required();
  c_div->add_option("--precision", dd.precision)->check(CLI::IsMember({"auto", "standard", "extended"}));

  auto* c_mat = app.add_subcommand("matrices", "Kraus, Pick, K_n or M_n matrix with its definiteness verdict");
  common(c_mat, true);
  c_mat->add_option("--kind", mx.kind)->check(CLI::IsMember({"kraus", "pick", "K", "M"}));
  c_mat->add_option("--nodes", mx.nodes, "comma-separated nodes (kraus, pick)");
  c_mat->add_option("--s", mx.s, "Kraus anchor (default: first node)");
  c_mat->add_option("--at", mx.at, "point for K_n / M_n");
  c_mat->add_option("--order,-n", rc.order)->check(CLI::PositiveNumber);

  auto* c_cls = app.add_subcommand("classify", "sampled n-convexity / n-concavity / n-monotonicity test");
  common(c_cls, true);
  c_cls->add_option("--order,-n", rc.order)->check(CLI::PositiveNumber);
  c_cls->add_option("--property,-p", property)->check(CLI::IsMember({"convex", "concave", "monotone"}));
  c_cls->add_option("--trials", rc.trials)->check(CLI::PositiveNumber);
  c_cls->add_option("--strategy", strategy)->check(CLI::IsMember({"uniform", "clustered", "endpoint", "mixed"}));

  auto* c_gap = app.add_subcommand("gap", "gap polynomial: n-monotone, n-concave/convex, not (n+1)-");
  c_gap->add_option("--order,-n", rc.order)->check(CLI::PositiveNumber);
  c_gap->add_option("--degree,-m", gp.degree, "polynomial degree (default 2n)");
  c_gap->add_option("--interval,-i", rc.interval, "target interval (default (-1,1))");
  c_gap->add_option("--kind", gp.kind)->check(CLI::IsMember({"concave", "convex"}));
  c_gap->add_flag("--halfline", gp.halfline, "compose with t/(1+t) to cover [0,inf)");
  c_gap->add_flag("--natural", gp.natural, "use the certified window (-alpha, alpha) without rescaling");

  auto* c_tr = app.add_subcommand("transform", "fractional transforms T(t0,f) and S(t0,f)");
  common(c_tr, true);
  c_tr->add_option("--kind", tr.kind)->check(CLI::IsMember({"T", "S"}));
  c_tr->add_option("--anchor", tr.anchor, "anchor t0")->required();
  c_tr->add_option("--eval-at", tr.eval_at, "comma-separated evaluation points");
  c_tr->add_option("--grid", tr.grid, "evaluate on an n-point grid of the interval")->check(CLI::NonNegativeNumber);
  c_tr->add_flag("--roundtrip", tr.roundtrip, "reconstruct f from the transform and report the error");

  auto* c_orc = app.add_subcommand("oracle", "random Hermitian witness search at dimension --order");
  common(c_orc, true);
  c_orc->add_option("--order,-n", rc.order)->check(CLI::Range(1, kMaxOracleDimension));
  c_orc->add_option("--property,-p", property)->check(CLI::IsMember({"convex", "concave", "monotone"}));
  c_orc->add_option("--trials", rc.trials)->check(CLI::PositiveNumber);

  auto* c_ver = app.add_subcommand("verify", "acceptance suites");
  c_ver->add_option("suite", suite, "identities | gaps | two-convex | transforms | oracle | all")
      ->check(CLI::IsMember(suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cerr << app.help();
    return kExitPass;
  } catch (const CLI::CallForVersion&) {
    std::cerr << kVersion << "\n";
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    rc.seed = seed ? *seed : default_seed();
    CLI::App* sub = app.get_subcommands().front();
    rc.command = sub->get_name();
    Outcome o;
    if (sub == c_div) {
      rc.options = {{"nodes", dd.nodes}, {"precision", dd.precision}};
      o = run_divdiff(rc, dd);
    } else if (sub == c_mat) {
      rc.options = {{"kind", mx.kind}, {"nodes", mx.nodes}, {"s", mx.s ? Json(*mx.s) : Json(nullptr)},
                    {"at", mx.at ? Json(*mx.at) : Json(nullptr)}};
      o = run_matrices(rc, mx);
    } else if (sub == c_cls) {
      rc.options = {{"property", property}, {"strategy", strategy}};
      o = run_classify(rc, property, strategy);
    } else if (sub == c_gap) {
      rc.options = {{"degree", gp.degree > 0 ? gp.degree : 2 * rc.order}, {"kind", gp.kind}, {"halfline", gp.halfline},
                    {"natural", gp.natural}};
      o = run_gap(rc, gp);
    } else if (sub == c_tr) {
      rc.options = {{"kind", tr.kind}, {"anchor", tr.anchor}, {"eval_at", tr.eval_at}, {"grid", tr.grid},
                    {"roundtrip", tr.roundtrip}};
      o = run_transform(rc, tr);
    } else if (sub == c_orc) {
      rc.options = {{"property", property}};
      o = run_oracle(rc, property);
    } else {
      rc.options = {{"suite", suite}};
      o = run_verify(rc, suite);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return emit(rc, o, seconds);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const HypothesisError& e) {
    std::cerr << "error: hypothesis not met: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
