#include "qdiff/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdiff/io.hpp"
#include "qdiff/nevanlinna.hpp"
#include "qdiff/qode.hpp"
#include "qdiff/qspecial.hpp"
#include "qdiff/verify.hpp"

namespace qdiff {

namespace {

using nlohmann::json;

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::schema_error, msg); }

std::string sci(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json jcplx(cplx z) { return json::array({jnum(z.real()), jnum(z.imag())}); }

// Everything a command may need about a model; absent parts are not
// available for that model.
struct ResolvedModel {
  std::string label;
  std::optional<TruncatedSeries> series;
  std::optional<MeroModel> mero;
};

QParam make_q(cplx q, int order) { return QParam(q, std::max(order, 64)); }

void require_outside(const QParam& qp, const std::string& name) {
  if (qp.inside_unit_disc()) {
    throw Error(ErrorCode::regime_mismatch, name + " is entire only for |q| > 1");
  }
}

ResolvedModel resolve_model(const std::string& id, const RunConfig& cfg, const std::string& coeffs) {
  ResolvedModel m{id, std::nullopt, std::nullopt};
  if (id == "etilde_q") {
    const QParam qp = make_q(cfg.q, cfg.N);
    require_outside(qp, id);
    m.series = etilde_q(qp, cfg.N);
    m.mero = etilde_model(qp);
  } else if (id == "E_q") {
    const QParam qp = make_q(cfg.q, cfg.N);
    if (!qp.inside_unit_disc()) throw Error(ErrorCode::regime_mismatch, "E_q is entire only for |q| < 1");
    m.series = E_q(qp, cfg.N);
    m.mero = E_q_model(qp);
  } else if (id == "exp_q" || id == "sin_q" || id == "cos_q") {
    const QParam qp = make_q(cfg.q, cfg.N);
    require_outside(qp, id);
    if (id == "exp_q") {
      m.series = exp_q(qp, cfg.N);
    } else {
      const auto [s, c] = sinq_cosq(qp, cfg.N);
      m.series = id == "sin_q" ? s : c;
    }
    if (m.series->safe_radius()) m.mero = MeroModel::series(*m.series, qp);
  } else if (id == "poly") {
    const auto c = parse_complex_list(coeffs);
    if (c.empty()) usage("poly needs --coeffs c0,c1,...");
    const Polynomial p(c);
    if (p.is_zero()) usage("poly: zero polynomial");
    m.series = TruncatedSeries::polynomial(p.coeffs());
    m.mero = MeroModel::rational(RationalFunction(p), make_q(cfg.q, cfg.N));
  } else {
    const auto file = load_model(id);
    if (file.rational) {
      m.mero = MeroModel::rational(*file.rational, file.qp);
      if (file.rational->is_polynomial()) {
        auto c = file.rational->num().coeffs();
        for (auto& x : c) x /= file.rational->den()[0];
        m.series = TruncatedSeries::polynomial(c);
      }
    } else {
      m.series = *file.series;
      if (file.series->safe_radius()) m.mero = MeroModel::series(*file.series, file.qp);
    }
  }
  return m;
}

RadialGrid make_grid(const RunConfig& cfg) {
  auto g = RadialGrid::log_spaced(cfg.grid.r_min, cfg.grid.r_max, cfg.grid.points, cfg.nodes);
  g.validate();
  return g;
}

// -- commands -----------------------------------------------------------------

struct EvalArgs {
  std::string name;
  std::string z;
  std::string path = "series";
  std::string alpha;
  std::string beta;
};

int cmd_eval(const RunConfig& cfg, const EvalArgs& a, std::ostream& out) {
  const QParam qp = make_q(cfg.q, cfg.N);
  std::vector<cplx> points;
  if (!a.z.empty()) {
    points.push_back(parse_complex(a.z));
  } else {
    const auto radii = make_grid(cfg).radii;
    points.assign(radii.begin(), radii.end());
  }
  if (a.path != "series" && a.path != "product") usage("--path must be series or product");

  std::function<SeriesValue(cplx)> eval;
  if (a.path == "product") {
    if (a.name == "etilde_q") {
      if (qp.inside_unit_disc()) throw Error(ErrorCode::regime_mismatch, "etilde_q product needs |q| > 1");
      eval = [&](cplx z) {
        const cplx v = etilde_product(z, qp);
        return SeriesValue{v, 4e-16 * std::abs(v)};
      };
    } else if (a.name == "E_q") {
      if (!qp.inside_unit_disc()) throw Error(ErrorCode::regime_mismatch, "E_q product needs |q| < 1");
      eval = [&](cplx z) {
        const cplx v = E_q_product(z, qp);
        return SeriesValue{v, 4e-16 * std::abs(v)};
      };
    } else {
      throw Error(ErrorCode::unknown_function, "no product form for '" + a.name + "'");
    }
  } else {
    TruncatedSeries f;
    if (a.name == "exp_q") {
      f = exp_q(qp, cfg.N);
    } else if (a.name == "etilde_q") {
      f = etilde_q(qp, cfg.N);
    } else if (a.name == "E_q") {
      f = E_q(qp, cfg.N);
    } else if (a.name == "sin_q") {
      f = sinq_cosq(qp, cfg.N).first;
    } else if (a.name == "cos_q") {
      f = sinq_cosq(qp, cfg.N).second;
    } else if (a.name == "phi_rs") {
      f = phi_rs({parse_complex_list(a.alpha), parse_complex_list(a.beta), qp}, cfg.N);
    } else {
      throw Error(ErrorCode::unknown_function, "unknown function '" + a.name + "'");
    }
    eval = [f](cplx z) { return series_eval_with_error(f, z); };
  }

  if (cfg.format == OutputFormat::csv) {
    out << "z_re,z_im,re,im,error\n";
    for (cplx z : points) {
      const auto v = eval(z);
      out << sci(z.real()) << ',' << sci(z.imag()) << ',' << sci(v.value.real()) << ',' << sci(v.value.imag())
          << ',' << sci(v.error) << '\n';
    }
  } else {
    json rows = json::array();
    for (cplx z : points) {
      const auto v = eval(z);
      rows.push_back({{"z", jcplx(z)}, {"value", jcplx(v.value)}, {"error", jnum(v.error)}});
    }
    out << rows.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg, const std::string& file, bool n_given, std::ostream& out, std::ostream& err) {
  const auto pf = load_problem(file);
  const int order = n_given ? cfg.N : pf.N;
  const auto sol = solve_series(pf.problem, order);
  const auto res = residual(pf.problem, sol.f);
  const bool ok = res.max_abs <= cfg.tol * std::max(1.0, res.scale);

  if (cfg.format == OutputFormat::csv) {
    out << "n,re,im\n";
    for (int n = 0; n <= sol.f.order(); ++n) {
      out << n << ',' << sci(sol.f[n].real()) << ',' << sci(sol.f[n].imag()) << '\n';
    }
  } else {
    json c = json::array();
    for (const auto& x : sol.f.coeffs()) c.push_back(jcplx(x));
    out << json{{"coefficients", c},
                {"residual", jnum(res.max_abs)},
                {"scale", jnum(res.scale)},
                {"formal", sol.formal},
                {"ill_conditioned", sol.ill_conditioned}}
               .dump(2)
        << '\n';
  }
  err << "residual " << sci(res.max_abs) << " (scale " << sci(res.scale) << ")";
  if (sol.formal) err << ", formal series: no entire solution for |q| < 1 with polynomial A";
  if (!sol.ill_conditioned.empty()) err << ", " << sol.ill_conditioned.size() << " ill-conditioned coefficients";
  err << '\n';
  if (!ok) err << "residual above tolerance " << sci(cfg.tol) << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

struct EstimateRow {
  std::string estimator;
  OrderEstimate e;
  std::string status = "ok";
};

int cmd_order(const RunConfig& cfg, const ResolvedModel& m, std::ostream& out, std::ostream& err) {
  const auto grid = make_grid(cfg);
  std::vector<EstimateRow> rows;
  const auto attempt = [&](const std::string& name, const std::function<OrderEstimate()>& fn) {
    EstimateRow row{name, {}, "ok"};
    try {
      row.e = fn();
    } catch (const Error& e) {
      row.status = std::string(to_string(e.code()));
      err << name << ": " << e.what() << '\n';
    }
    rows.push_back(row);
  };
  if (m.series) {
    attempt("central_index", [&] { return log_order_from_nu(*m.series, grid.radii); });
  }
  if (m.mero) {
    std::optional<std::vector<NevanlinnaSample>> samples;
    const auto sweep = [&]() -> const std::vector<NevanlinnaSample>& {
      if (!samples) samples = sample_sweep(*m.mero, grid.nudged(*m.mero));
      return *samples;
    };
    if (m.mero->kind() != MeroModel::Kind::entire_series) {
      attempt("zero_counting", [&] { return log_order_from_N(sweep()); });
    }
    attempt("characteristic", [&] { return log_order_from_T(sweep()); });
  }

  bool any = false;
  for (const auto& r : rows) any = any || r.status == "ok";
  if (cfg.format == OutputFormat::csv) {
    out << "estimator,sigma_log,half_width,points,status\n";
    for (const auto& r : rows) {
      const bool ok = r.status == "ok";
      out << r.estimator << ',' << (ok ? sci(r.e.sigma) : "nan") << ',' << (ok ? sci(r.e.half_width) : "nan") << ','
          << r.e.points << ',' << r.status << '\n';
    }
  } else {
    json est = json::array();
    for (const auto& r : rows) {
      const bool ok = r.status == "ok";
      est.push_back({{"estimator", r.estimator},
                     {"sigma_log", ok ? jnum(r.e.sigma) : json(nullptr)},
                     {"half_width", ok ? jnum(r.e.half_width) : json(nullptr)},
                     {"points", r.e.points},
                     {"status", r.status}});
    }
    out << json{{"model", m.label}, {"estimates", est}}.dump(2) << '\n';
  }
  return any ? kExitOk : kExitUsage;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, double tol_scale, std::ostream& out) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else {
    names.push_back(suite);
  }
  std::vector<SuiteReport> reports;
  for (const auto& n : names) reports.push_back(run_suite(n, {cfg.seed, tol_scale}));

  bool ok = true;
  if (cfg.format == OutputFormat::csv) {
    out << "suite,check,value,relation,limit,status\n";
    for (const auto& r : reports) {
      for (const auto& c : r.checks) {
        out << r.suite << ",\"" << c.name << "\"," << sci(c.value) << ',' << c.relation << ',' << sci(c.limit) << ','
            << (c.passed ? "PASS" : "FAIL") << '\n';
      }
    }
  } else {
    json arr = json::array();
    for (const auto& r : reports) {
      json checks = json::array();
      for (const auto& c : r.checks) {
        checks.push_back({{"check", c.name},
                          {"value", jnum(c.value)},
                          {"relation", c.relation},
                          {"limit", jnum(c.limit)},
                          {"passed", c.passed}});
      }
      arr.push_back({{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}});
    }
    out << arr.dump(2) << '\n';
  }
  for (const auto& r : reports) ok = ok && r.passed();
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_sample(const RunConfig& cfg, const ResolvedModel& m, std::ostream& out) {
  if (!m.mero) throw Error(ErrorCode::target_unsupported, "model '" + m.label + "' cannot be sampled on circles");
  const auto samples = sample_sweep(*m.mero, make_grid(cfg).nudged(*m.mero));
  if (cfg.format == OutputFormat::csv) {
    write_samples_csv(out, samples);
  } else {
    out << samples_json(samples);
  }
  return kExitOk;
}

}  // namespace

GridSpec parse_grid(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) usage("grid: expected rmin:rmax:points");
  GridSpec g;
  try {
    std::size_t used = 0;
    const std::string a(text.substr(0, c1)), b(text.substr(c1 + 1, c2 - c1 - 1)), c(text.substr(c2 + 1));
    g.r_min = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    g.r_max = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    g.points = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
  } catch (const std::logic_error&) {
    usage("grid: expected rmin:rmax:points, got '" + std::string(text) + "'");
  }
  if (!(g.r_min > 0.0) || !(g.r_max > g.r_min) || !std::isfinite(g.r_max)) usage("grid: need 0 < rmin < rmax");
  if (g.points < 4) usage("grid: at least 4 points");
  return g;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jackson q-difference calculus: special functions, series solver, Nevanlinna checks", "qdiff"};
  app.require_subcommand(1, 1);

  RunConfig cfg;
  std::string q_text = "2", grid_text, format_text = "csv", coeffs, model_id, problem_file, suite;
  double verify_tol = 1.0;
  EvalArgs eval_args;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--q", q_text, "base q as re+imi")->capture_default_str();
    sub->add_option("--N", cfg.N, "series truncation order")->capture_default_str()->check(CLI::Range(1, 2000));
    sub->add_option("--grid", grid_text, "radii rmin:rmax:points, log-spaced (default 1e2:1e6:13)");
    sub->add_option("--nodes", cfg.nodes, "angular nodes per circle")->capture_default_str();
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", format_text, "csv or json")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* eval = app.add_subcommand("eval", "evaluate a q-special function");
  common(eval);
  eval->add_option("name", eval_args.name, "exp_q, etilde_q, E_q, sin_q, cos_q or phi_rs")->required();
  eval->add_option("--z", eval_args.z, "point as re+imi (otherwise the grid radii)");
  eval->add_option("--path", eval_args.path, "series or product")->capture_default_str();
  eval->add_option("--alpha", eval_args.alpha, "phi_rs numerator parameters, comma separated");
  eval->add_option("--beta", eval_args.beta, "phi_rs denominator parameters, comma separated");

  auto* solve = app.add_subcommand("solve", "series solution of a problem file");
  common(solve);
  solve->add_option("problem", problem_file, "problem JSON")->required();
  solve->add_option("--tol", cfg.tol, "residual tolerance relative to max |c_n|")->capture_default_str();

  auto* order = app.add_subcommand("order", "logarithmic order estimates");
  common(order);
  order->add_option("model", model_id, "etilde_q, E_q, exp_q, sin_q, cos_q, poly or a model file")->required();
  order->add_option("--coeffs", coeffs, "poly coefficients c0,c1,... as re+imi");

  auto* verify = app.add_subcommand("verify", "property suites with a pass/fail table");
  common(verify);
  verify->add_option("suite", suite, "suite name or all")->required();
  verify->add_option("--seed", cfg.seed, "seed of the randomized checks")->capture_default_str();
  verify->add_option("--tol", verify_tol, "scale applied to every suite tolerance")->capture_default_str();

  auto* sample = app.add_subcommand("sample", "Nevanlinna functionals over a radial grid");
  common(sample);
  sample->add_option("model", model_id, "etilde_q, E_q, exp_q, sin_q, cos_q, poly or a model file")->required();
  sample->add_option("--coeffs", coeffs, "poly coefficients c0,c1,... as re+imi");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  std::ostringstream buf;
  int code = kExitOk;
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.q = parse_complex(q_text);
    if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    cfg.format = format_text == "json" ? OutputFormat::json : OutputFormat::csv;
    if (!(cfg.tol > 0.0) || !(verify_tol > 0.0)) usage("tolerances must be positive");

    if (cfg.command == "eval") {
      code = cmd_eval(cfg, eval_args, buf);
    } else if (cfg.command == "solve") {
      code = cmd_solve(cfg, problem_file, solve->count("--N") > 0, buf, err);
    } else if (cfg.command == "order") {
      code = cmd_order(cfg, resolve_model(model_id, cfg, coeffs), buf, err);
    } else if (cfg.command == "verify") {
      code = cmd_verify(cfg, suite, verify_tol, buf);
    } else {
      code = cmd_sample(cfg, resolve_model(model_id, cfg, coeffs), buf);
    }
  } catch (const Error& e) {
    err << "qdiff " << cfg.command << ": " << e.what() << '\n';
    return kExitUsage;
  }

  if (cfg.out.empty()) {
    out << buf.str();
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "qdiff: cannot write " << cfg.out << '\n';
      return kExitUsage;
    }
    file << buf.str();
  }
  return code;
}

}  // namespace qdiff
