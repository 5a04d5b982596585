#include "parisian/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "parisian/errors.hpp"
#include "parisian/hjb_verify.hpp"
#include "parisian/mc_sim.hpp"
#include "parisian/optimal_barrier.hpp"
#include "parisian/valuation.hpp"

namespace parisian::cli {

using nlohmann::json;

namespace {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string verdict(const CriterionResult& c) {
  if (c.boundary) return "boundary";
  return c.positive_barrier ? "positive" : "zero";
}

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw UsageError(std::string("missing required parameter --") + name);
  if (!std::isfinite(*v)) throw UsageError(std::string("--") + name + " must be finite");
  return *v;
}

}  // namespace

std::vector<double> Grid::points() const {
  std::vector<double> pts;
  if (n == 1) return {lo};
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back(i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return pts;
}

Grid parse_grid(const std::string& text) {
  Grid g;
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw std::invalid_argument("grid must look like lo:hi:n, got '" + text + "'");
  try {
    std::size_t used = 0;
    const std::string lo = text.substr(0, c1), hi = text.substr(c1 + 1, c2 - c1 - 1), n = text.substr(c2 + 1);
    g.lo = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument("lo");
    g.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("hi");
    const long count = std::stol(n, &used);
    if (used != n.size() || count < 1) throw std::invalid_argument("n");
    g.n = static_cast<std::size_t>(count);
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must look like lo:hi:n, got '" + text + "'");
  }
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.hi < g.lo)
    throw std::invalid_argument("grid bounds must be finite with lo <= hi");
  return g;
}

ModelDocument parse_model_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("model document must be a JSON object");
  static const char* known[] = {"drift", "sigma", "lambda", "jump_weights", "jump_rates", "q", "p"};
  for (const auto& item : doc.items()) {
    if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known))
      throw ParseError("model document: unknown key '" + item.key() + "'");
  }
  auto number = [&](const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc[key].is_number()) throw ParseError(std::string("model document: '") + key + "' must be a number");
    return doc[key].get<double>();
  };
  auto numbers = [&](const char* key) {
    std::vector<double> out;
    if (!doc.contains(key)) return out;
    if (!doc[key].is_array()) throw ParseError(std::string("model document: '") + key + "' must be an array");
    for (const auto& v : doc[key]) {
      if (!v.is_number()) throw ParseError(std::string("model document: '") + key + "' must hold numbers");
      out.push_back(v.get<double>());
    }
    return out;
  };
  if (!doc.contains("drift")) throw ParseError("model document: 'drift' is required");

  ModelDocument md;
  md.model.drift = number("drift", 0.0);
  md.model.sigma = number("sigma", 0.0);
  md.model.jumps.arrival_rate = number("lambda", 0.0);
  md.model.jumps.weights = numbers("jump_weights");
  md.model.jumps.rates = numbers("jump_rates");
  if (doc.contains("q")) md.q = number("q", 0.0);
  if (doc.contains("p")) md.p = number("p", 0.0);
  require_valid(md.model);
  return md;
}

ModelDocument load_model_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model document '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_document(ss.str());
}

void write_table(const Table& table, Format format, std::ostream& os) {
  auto text = [](const Cell& c) -> std::string {
    return std::visit(
        [](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) return format_double(v);
          else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
          else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
          else return v;
        },
        c);
  };
  if (format == Format::csv) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << text(row[i]);
      os << '\n';
    }
    return;
  }
  for (const auto& row : table.rows) {
    // Hand-assembled so doubles keep the same 17-digit text as in CSV.
    os << '{';
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << json(table.columns[i]).dump() << ':';
      if (const auto* d = std::get_if<double>(&row[i]))
        os << (std::isfinite(*d) ? format_double(*d) : "null");
      else if (const auto* s = std::get_if<std::string>(&row[i]))
        os << json(*s).dump();
      else
        os << text(row[i]);
    }
    os << "}\n";
  }
}

namespace {

struct Inputs {
  LevyModel model;
  std::optional<double> q, p;
};

Inputs resolve(const RunSpec& spec) {
  if (spec.model_path.empty()) throw UsageError("missing required option --model");
  ModelDocument doc = load_model_document(spec.model_path);
  return {doc.model, spec.q ? spec.q : doc.q, spec.p ? spec.p : doc.p};
}

std::vector<double> x_points(const RunSpec& spec) {
  if (spec.x_grid) return spec.x_grid->points();
  if (spec.x) return {*spec.x};
  throw UsageError("provide --x or --x-grid");
}

ParisianClock parse_clock(const std::string& s) {
  if (s == "marks") return ParisianClock::poisson_marks;
  if (s == "exposure") return ParisianClock::exposure_threshold;
  if (s == "excursion") return ParisianClock::per_excursion;
  throw UsageError("--clock must be marks, exposure or excursion");
}

SimConfig sim_config(const RunSpec& spec, const LevyModel& model, double q, double p) {
  SimConfig cfg;
  cfg.model = model;
  cfg.q = q;
  cfg.p = p;
  cfg.n_paths = spec.n_paths.value_or(100000);
  cfg.dt = spec.dt;
  cfg.seed = spec.seed;
  cfg.clock = parse_clock(spec.clock);
  cfg.horizon = spec.horizon ? *spec.horizon : (q > 0.0 ? recommended_horizon(model, q, 1e-5) : 50.0);
  return cfg;
}

Table cmd_phi(const RunSpec& spec, const Inputs& in) {
  Table t{{"r", "phi", "residual"}, {}};
  std::vector<double> rs;
  if (spec.r) rs.push_back(need(spec.r, "r"));
  if (in.q) rs.push_back(*in.q);
  if (in.q && in.p) rs.push_back(*in.q + *in.p);
  if (rs.empty()) throw UsageError("phi needs --r or --q");
  for (double r : rs) {
    const PhiRoot root = phi(in.model, r);
    t.rows.push_back({root.r, root.value, root.residual});
  }
  return t;
}

Table cmd_scale(const RunSpec& spec, const Inputs& in) {
  const double q = need(in.q, "q");
  const auto xs = x_points(spec);
  Table t{{"x", "W", "W_prime"}, {}};
  std::optional<ParisianContext> ctx;
  if (in.p) {
    ctx = make_context(in.model, q, *in.p);
    t.columns.insert(t.columns.end(), {"Z", "Z_prime"});
  }
  const ScaleBasis basis = ctx ? ctx->basis : scale_basis(in.model, q);
  for (double x : xs) {
    std::vector<Cell> row{x, w(basis, x), w_prime(basis, x)};
    if (ctx) {
      row.emplace_back(z_at_phi(*ctx, x));
      row.emplace_back(z_prime_at_phi(*ctx, x));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_value(const RunSpec& spec, const Inputs& in) {
  const auto ctx = make_context(in.model, need(in.q, "q"), need(in.p, "p"));
  const BarrierValuation v(ctx, need(spec.b, "b"));
  Table t{{"x", "value"}, {}};
  for (double x : x_points(spec)) t.rows.push_back({x, v(x)});
  return t;
}

Table cmd_optimal(const Inputs& in) {
  const auto ctx = make_context(in.model, need(in.q, "q"), need(in.p, "p"));
  const auto sol = optimal_barrier_parisian(ctx);
  const auto classical = optimal_barrier_classical(ctx.basis);
  const auto crit = zero_barrier_criterion(ctx);
  return {{"b_star_p", "b_star_inf", "case", "lhs", "rhs", "verdict", "first_order_residual"},
          {{sol.b_star, classical.b_star, to_string(crit.which), crit.lhs, crit.rhs, verdict(crit),
            sol.first_order_residual}}};
}

Table cmd_criterion(const Inputs& in) {
  const auto ctx = make_context(in.model, need(in.q, "q"), need(in.p, "p"));
  const auto rep = criterion_consistency_report(ctx);
  return {{"case", "lhs", "rhs", "verdict", "numerical_argmin", "argmin_consistent",
           "rewritten_lhs", "rewritten_rhs", "rewritten_consistent"},
          {{to_string(rep.criterion.which), rep.criterion.lhs, rep.criterion.rhs, verdict(rep.criterion),
            rep.numerical_argmin, rep.argmin_consistent,
            rep.rewritten_applicable ? Cell{rep.rewritten_lhs} : Cell{std::string{}},
            rep.rewritten_applicable ? Cell{rep.rewritten_rhs} : Cell{std::string{}},
            rep.rewritten_consistent}}};
}

Table cmd_hjb(const RunSpec& spec, const Inputs& in) {
  const auto ctx = make_context(in.model, need(in.q, "q"), need(in.p, "p"));
  const double b = spec.b ? need(spec.b, "b") : optimal_barrier_parisian(ctx).b_star;
  GridSpec grid{-3.0, b + 5.0, 200};
  if (spec.x_grid) grid = {spec.x_grid->lo, spec.x_grid->hi, spec.x_grid->n};
  const auto rep = hjb_residual_report(ctx, b, grid);
  Table t{{"x", "b", "residual", "slope", "slope_ok"}, {}};
  for (std::size_t i = 0; i < rep.grid.size(); ++i)
    t.rows.push_back({rep.grid[i], b, rep.residuals[i], rep.slopes[i], static_cast<bool>(rep.slope_check[i])});
  return t;
}

Table cmd_simulate(const RunSpec& spec, const Inputs& in) {
  const double q = need(in.q, "q"), p = need(in.p, "p");
  const auto ctx = make_context(in.model, q, p);
  SimConfig cfg = sim_config(spec, in.model, q, p);
  cfg.b = spec.b ? need(spec.b, "b") : optimal_barrier_parisian(ctx).b_star;
  Table t{{"x", "b", "mean", "stderr", "n_paths", "seed", "truncation_bound", "analytic"}, {}};
  for (double x : x_points(spec)) {
    cfg.x0 = x;
    const auto est = mc_value(cfg);
    t.rows.push_back({x, cfg.b, est.mean, est.std_error, static_cast<std::int64_t>(est.n_paths),
                      std::to_string(est.seed), est.truncation_bound, barrier_value(ctx, cfg.b, x)});
  }
  return t;
}

Table cmd_exit(const RunSpec& spec, const Inputs& in) {
  const double q = need(in.q, "q"), p = need(in.p, "p"), a = need(spec.a, "a");
  const auto ctx = make_context(in.model, q, p);
  Table t{{"x", "a", "analytic"}, {}};
  if (spec.n_paths) t.columns.insert(t.columns.end(), {"mean", "stderr", "n_paths", "seed"});
  for (double x : x_points(spec)) {
    std::vector<Cell> row{x, a, two_sided_exit_lt(ctx, x, a)};
    if (spec.n_paths) {
      SimConfig cfg = sim_config(spec, in.model, q, p);
      cfg.x0 = x;
      const auto est = mc_two_sided_exit(cfg, a);
      row.insert(row.end(), {est.mean, est.std_error, static_cast<std::int64_t>(est.n_paths),
                             std::to_string(est.seed)});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_sweep(const RunSpec& spec, const Inputs& in) {
  if (!spec.sweep_grid) throw UsageError("sweep needs --sweep-grid lo:hi:n");
  std::vector<double> values = spec.sweep_grid->points();
  if (spec.sweep_log) {
    if (spec.sweep_grid->lo <= 0.0) throw UsageError("--log requires a positive grid");
    const Grid g{std::log10(spec.sweep_grid->lo), std::log10(spec.sweep_grid->hi), spec.sweep_grid->n};
    values = g.points();
    for (double& v : values) v = std::pow(10.0, v);
  }
  const double q = need(in.q, "q");
  if (spec.sweep == "p") {
    const auto sweep = parisian_rate_sweep(in.model, q, values);
    Table t{{"p", "case", "lhs", "rhs", "verdict", "b_star"}, {}};
    for (const auto& s : sweep)
      t.rows.push_back({s.p, to_string(s.criterion.which), s.criterion.lhs, s.criterion.rhs,
                        verdict(s.criterion), s.b_star});
    return t;
  }
  if (spec.sweep == "b") {
    const auto ctx = make_context(in.model, q, need(in.p, "p"));
    const double x = need(spec.x, "x");
    Table t{{"b", "x", "value"}, {}};
    for (double b : values) t.rows.push_back({b, x, barrier_value(ctx, b, x)});
    return t;
  }
  throw UsageError("--sweep must be p or b");
}

void report_error(std::ostream& err, ExitCode code, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"code", static_cast<int>(code)}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    const Inputs in = resolve(spec);
    Table table;
    const std::string& c = spec.command;
    if (c == "phi") table = cmd_phi(spec, in);
    else if (c == "scale") table = cmd_scale(spec, in);
    else if (c == "value") table = cmd_value(spec, in);
    else if (c == "optimal-barrier") table = cmd_optimal(in);
    else if (c == "criterion") table = cmd_criterion(in);
    else if (c == "hjb-check") table = cmd_hjb(spec, in);
    else if (c == "simulate") table = cmd_simulate(spec, in);
    else if (c == "exit-lt") table = cmd_exit(spec, in);
    else if (c == "sweep") table = cmd_sweep(spec, in);
    else throw UsageError("unknown command '" + c + "'");

    if (spec.out_path.empty()) {
      write_table(table, spec.format, out);
    } else {
      std::ofstream file(spec.out_path);
      if (!file) throw IoError("cannot write '" + spec.out_path + "'");
      write_table(table, spec.format, file);
    }
    return static_cast<int>(ExitCode::ok);
  } catch (const UsageError& e) {
    report_error(err, ExitCode::usage, "usage", e.what());
    return static_cast<int>(ExitCode::usage);
  } catch (const ParseError& e) {
    report_error(err, ExitCode::parse, "parse", e.what());
    return static_cast<int>(ExitCode::parse);
  } catch (const ValidationError& e) {
    report_error(err, ExitCode::validation, "validation", e.what());
    return static_cast<int>(ExitCode::validation);
  } catch (const DomainError& e) {
    report_error(err, ExitCode::domain, "domain", e.what());
    return static_cast<int>(ExitCode::domain);
  } catch (const NumericError& e) {
    report_error(err, ExitCode::numeric, "numeric", e.what());
    return static_cast<int>(ExitCode::numeric);
  } catch (const IoError& e) {
    report_error(err, ExitCode::io, "io", e.what());
    return static_cast<int>(ExitCode::io);
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal dividend barriers under exponential Parisian ruin"};
  app.require_subcommand(1);
  RunSpec spec;
  std::string x_grid, sweep_grid, format = "csv";
  std::size_t n_paths = 0;

  const char* commands[][2] = {
      {"phi", "right inverse of the Laplace exponent"},
      {"scale", "W, W', Z, Z' on an x grid"},
      {"value", "barrier strategy value v_b(x)"},
      {"optimal-barrier", "optimal barriers b*_p and b*_inf"},
      {"criterion", "zero-barrier criterion with consistency checks"},
      {"hjb-check", "generator residuals of the barrier value"},
      {"simulate", "Monte Carlo barrier value next to the analytic one"},
      {"exit-lt", "two-sided exit Laplace transform"},
      {"sweep", "vary p or b over a grid"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--model", spec.model_path, "model document (JSON)")->required();
    sub->add_option("--q", spec.q, "discount rate");
    sub->add_option("--p", spec.p, "Parisian rate");
    sub->add_option("--b", spec.b, "barrier level");
    sub->add_option("--x", spec.x, "initial surplus");
    sub->add_option("--a", spec.a, "upper exit level");
    sub->add_option("--r", spec.r, "rate for phi");
    sub->add_option("--x-grid", x_grid, "lo:hi:n");
    sub->add_option("--sweep", spec.sweep, "p or b")->check(CLI::IsMember({"p", "b"}));
    sub->add_option("--sweep-grid", sweep_grid, "lo:hi:n");
    sub->add_flag("--log", spec.sweep_log, "log-spaced sweep grid");
    sub->add_option("--n-paths", n_paths, "Monte Carlo paths");
    sub->add_option("--dt", spec.dt, "diffusion time step");
    sub->add_option("--horizon", spec.horizon, "simulation horizon");
    sub->add_option("--seed", spec.seed, "RNG seed");
    sub->add_option("--clock", spec.clock, "marks, exposure or excursion");
    sub->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--out", spec.out_path, "output file");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, ExitCode::usage, "usage", e.what());
    return static_cast<int>(ExitCode::usage);
  }
  spec.command = app.get_subcommands().front()->get_name();
  spec.format = format == "jsonl" ? Format::jsonl : Format::csv;
  if (n_paths > 0) spec.n_paths = n_paths;
  try {
    if (!x_grid.empty()) spec.x_grid = parse_grid(x_grid);
    if (!sweep_grid.empty()) spec.sweep_grid = parse_grid(sweep_grid);
  } catch (const std::invalid_argument& e) {
    report_error(err, ExitCode::usage, "usage", e.what());
    return static_cast<int>(ExitCode::usage);
  }
  return run(spec, out, err);
}

}  // namespace parisian::cli
