#include "cli.hpp"

#include <algorithm>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "baryiter/baryiter.hpp"

namespace baryiter::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string problem;
  std::string expr;
  std::string fixed_point;
  std::string x0;
  std::string method;
  std::string weights = "x";
  std::string alpha;
  std::size_t window = 0;
  std::string beta;
  std::string tol_f;
  std::string tol_x;
  std::size_t max_iter = 100;
  long precision_bits = Precision::kDefault;
  std::string bootstrap = "auto";
  std::string x1;
  std::string h;
  std::string output = "human";
  std::optional<std::size_t> digits;
};

struct OrderOptions {
  std::string family = "root";
  int m = 1;
  std::string n = "inf";
  std::string output = "human";
};

struct TableOptions {
  std::string which;
  std::string output = "human";
};

struct CompareOptions {
  CommonOptions common;
  std::vector<std::string> runs;
};

// A problem resolved from --problem or --expr.
struct Source {
  std::string name;
  ProblemKind kind = ProblemKind::Root;
  Evaluator f{Expr()};
  std::optional<Evaluator> g;
  Real x0;
  std::optional<Real> reference;
};

Real parse_real_flag(const std::string& flag, const std::string& text, long bits) {
  try {
    return Real::parse(text, checked_precision(bits));
  } catch (const Error& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::optional<Real> optional_real(const std::string& flag, const std::string& text, long bits) {
  if (text.empty()) return std::nullopt;
  return parse_real_flag(flag, text, bits);
}

Source resolve_source(const CommonOptions& o, ProblemKind kind) {
  if (o.problem.empty() == o.expr.empty()) throw UsageError("exactly one of --problem or --expr is required");
  Source s;
  s.kind = kind;
  if (!o.problem.empty()) {
    const Problem* p = nullptr;
    try {
      p = &find_problem(o.problem);
    } catch (const Error& e) {
      throw UsageError(std::string("--problem: ") + e.what());
    }
    if (p->kind != kind) {
      throw UsageError("--problem: '" + p->name + "' is " +
                       (p->kind == ProblemKind::Root ? "a root problem" : "an optimisation problem"));
    }
    s.name = p->name;
    s.f = p->evaluator();
    if (p->fixed_point) s.g.emplace(*p->fixed_point);
    s.x0 = parse_real_flag("--x0", o.x0.empty() ? p->default_x0 : o.x0, o.precision_bits);
    if (o.x0.empty()) s.reference = Corpus::shared().reference(p->name).with_precision(Precision(o.precision_bits));
  } else {
    try {
      s.f = Evaluator(o.expr);
      if (!o.fixed_point.empty()) s.g.emplace(o.fixed_point);
    } catch (const Error& e) {
      throw UsageError(std::string(o.fixed_point.empty() ? "--expr: " : "--expr/--fixed-point: ") + e.what());
    }
    if (o.x0.empty()) throw UsageError("--x0 is required with --expr");
    s.name = o.expr;
    s.x0 = parse_real_flag("--x0", o.x0, o.precision_bits);
  }
  return s;
}

Bootstrap<Real> bootstrap_from(const CommonOptions& o) {
  Bootstrap<Real> b;
  if (o.bootstrap == "auto") {
    b.kind = BootstrapKind::Auto;
  } else if (o.bootstrap == "picard") {
    b.kind = BootstrapKind::PicardStep;
  } else if (o.bootstrap == "perturb") {
    b.kind = BootstrapKind::Perturb;
    b.value = optional_real("--perturb-h", o.h, o.precision_bits);
  } else if (o.bootstrap == "explicit") {
    b.kind = BootstrapKind::ExplicitSecond;
    if (o.x1.empty()) throw UsageError("--bootstrap explicit needs --x1");
    b.value = parse_real_flag("--x1", o.x1, o.precision_bits);
  } else {
    throw UsageError("--bootstrap: expected auto, picard, perturb or explicit");
  }
  return b;
}

SolverConfig<Real> root_config(const CommonOptions& o, const std::string& method_text, std::size_t window) {
  SolverConfig<Real> c;
  auto m = parse_root_method(method_text);
  if (!m) throw UsageError("--method: unknown root method '" + method_text + "'");
  c.method = *m;
  if (o.weights == "x") c.weight_scheme = WeightScheme::XBased;
  else if (o.weights == "f") c.weight_scheme = WeightScheme::FBased;
  else if (o.weights == "alpha") c.weight_scheme = WeightScheme::AlphaShifted;
  else throw UsageError("--weights: expected x, f or alpha");
  c.alpha = optional_real("--alpha", o.alpha, o.precision_bits);
  c.window = window != 0 ? window : std::max<std::size_t>(min_samples(c.method), 2);
  c.beta = optional_real("--beta", o.beta, o.precision_bits);
  c.tol_f = optional_real("--tol-f", o.tol_f, o.precision_bits);
  c.tol_x = optional_real("--tol-x", o.tol_x, o.precision_bits);
  c.max_iter = o.max_iter;
  c.precision_bits = o.precision_bits;
  c.bootstrap = bootstrap_from(o);
  return c;
}

OptConfig<Real> opt_config(const CommonOptions& o) {
  OptConfig<Real> c;
  const std::string text = o.method.empty() ? "newton-df" : o.method;
  auto m = parse_opt_method(text);
  if (!m) throw UsageError("--method: unknown optimisation method '" + text + "'");
  c.method = *m;
  c.window = o.window != 0 ? o.window : 3;
  c.beta = optional_real("--beta", o.beta, o.precision_bits);
  c.tol_g = optional_real("--tol-f", o.tol_f, o.precision_bits);
  c.tol_x = optional_real("--tol-x", o.tol_x, o.precision_bits);
  c.max_iter = o.max_iter;
  c.precision_bits = o.precision_bits;
  c.bootstrap = bootstrap_from(o);
  if (c.bootstrap.kind == BootstrapKind::PicardStep) throw UsageError("--bootstrap picard is for root problems");
  return c;
}

// Fills in errors against a reference obtained by refining the final iterate.
void attach_reference(IterationTrace<Real>& trace, const Source& src) {
  if (trace.reference || trace.steps.empty()) return;
  const Real& last = trace.final_x();
  if (!last.is_finite()) return;
  Real ref;
  try {
    ref = refine_solution(src.f, src.kind, last);
  } catch (const Error&) {
    return;
  }
  trace.reference = ref.with_precision(Precision(trace.precision_bits));
  for (auto& s : trace.steps) s.error = s.x - *trace.reference;
}

std::optional<std::string> summary_order(const IterationTrace<Real>& trace) {
  if (!trace.reference) return std::nullopt;
  for (std::size_t k : {3, 2, 1}) {
    try {
      std::ostringstream os;
      os << std::setprecision(6) << empirical_order(trace, k);
      return os.str();
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

std::string render(const Real& v, std::optional<std::size_t> digits) {
  return v.to_decimal(digits ? *digits : v.full_digits());
}

TraceDocument make_document(const std::string& problem, const std::string& method, Json config,
                            const IterationTrace<Real>& trace, std::optional<std::size_t> digits) {
  TraceDocument doc;
  doc.problem = problem;
  doc.method = method;
  doc.config = std::move(config);
  for (const auto& s : trace.steps) {
    TraceDocument::Row row;
    row.i = s.index;
    row.x = render(s.x, digits);
    row.f = render(s.f, digits);
    if (auto e = s.abs_error()) row.abs_error = render(*e, digits);
    row.status = std::string(status_name(s.status));
    doc.steps.push_back(std::move(row));
  }
  doc.status = std::string(status_name(trace.status()));
  doc.iterations = trace.iterations();
  doc.empirical_order = summary_order(trace);
  return doc;
}

Json optional_string(const std::optional<Real>& v) {
  return v ? Json(v->to_decimal(v->full_digits())) : Json(nullptr);
}

Json root_config_json(const SolverConfig<Real>& c, const Real& x0) {
  Json j;
  j["method"] = method_name(c.method);
  j["weights"] = weight_scheme_name(c.weight_scheme);
  j["alpha"] = optional_string(c.alpha);
  j["window"] = c.window;
  j["beta"] = optional_string(c.beta);
  j["tol_f"] = optional_string(c.tol_f);
  j["tol_x"] = optional_string(c.tol_x);
  j["max_iter"] = c.max_iter;
  j["precision_bits"] = c.precision_bits;
  j["bootstrap"] = bootstrap_name(c.bootstrap.kind);
  j["x0"] = x0.to_decimal(x0.full_digits());
  return j;
}

Json opt_config_json(const OptConfig<Real>& c, const Real& x0) {
  Json j;
  j["method"] = method_name(c.method);
  j["window"] = c.window;
  j["beta"] = optional_string(c.beta);
  j["tol_g"] = optional_string(c.tol_g);
  j["tol_x"] = optional_string(c.tol_x);
  j["max_iter"] = c.max_iter;
  j["precision_bits"] = c.precision_bits;
  j["bootstrap"] = bootstrap_name(c.bootstrap.kind);
  j["x0"] = x0.to_decimal(x0.full_digits());
  return j;
}

void emit_human(const TraceDocument& doc, std::ostream& out) {
  out << "problem: " << doc.problem << "\nmethod:  " << doc.method << "\n";
  std::size_t wx = 1, wf = 1;
  for (const auto& r : doc.steps) wx = std::max(wx, r.x.size()), wf = std::max(wf, r.f.size());
  out << std::left << std::setw(4) << "i" << "  " << std::setw(static_cast<int>(wx)) << "x" << "  "
      << std::setw(static_cast<int>(wf)) << "f" << "  " << std::setw(10) << "|error|" << "  status\n";
  for (const auto& r : doc.steps) {
    out << std::left << std::setw(4) << r.i << "  " << std::setw(static_cast<int>(wx)) << r.x << "  "
        << std::setw(static_cast<int>(wf)) << r.f << "  " << std::setw(10) << r.abs_error.value_or("-") << "  "
        << r.status << "\n";
  }
  out << "status: " << doc.status << " after " << doc.iterations << " iterations";
  if (doc.empirical_order) out << ", empirical order " << *doc.empirical_order;
  out << "\n";
}

int emit(const TraceDocument& doc, const std::string& format, std::ostream& out) {
  if (format == "json") out << emit_json(doc) << "\n";
  else if (format == "csv") out << emit_csv(doc);
  else emit_human(doc, out);
  return doc.status == "converged" ? kOk : kFailed;
}

std::optional<std::size_t> display_digits(const CommonOptions& o) {
  if (o.digits) return o.digits;
  if (o.output == "human") return 20;
  return std::nullopt;
}

int cmd_solve(const CommonOptions& o, std::ostream& out) {
  Source src = resolve_source(o, ProblemKind::Root);
  if (o.method.empty()) throw UsageError("--method is required");
  SolverConfig<Real> c = root_config(o, o.method, o.window);
  auto problem = make_root_problem<Real>(src.name, src.f, src.g, src.x0, src.reference);
  IterationTrace<Real> trace;
  try {
    trace = solve(problem, c);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw UsageError(e.what());
    throw;
  }
  attach_reference(trace, src);
  return emit(make_document(src.name, std::string(method_name(c.method)), root_config_json(c, src.x0), trace,
                            display_digits(o)),
              o.output, out);
}

int cmd_optimize(const CommonOptions& o, std::ostream& out) {
  Source src = resolve_source(o, ProblemKind::Optimisation);
  OptConfig<Real> c = opt_config(o);
  auto problem = make_opt_problem<Real>(src.name, src.f, src.x0, src.reference);
  IterationTrace<Real> trace;
  try {
    trace = optimize(problem, c);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw UsageError(e.what());
    throw;
  }
  attach_reference(trace, src);
  return emit(make_document(src.name, std::string(method_name(c.method)), opt_config_json(c, src.x0), trace,
                            display_digits(o)),
              o.output, out);
}

int cmd_order(const OrderOptions& o, std::ostream& out) {
  OrderQuery q;
  if (o.family == "root") q.family = OrderFamily::Root;
  else if (o.family == "opt") q.family = OrderFamily::Opt;
  else throw UsageError("--family: expected root or opt");
  if (o.m < 1) throw UsageError("--m: must be >= 1");
  q.m = o.m;
  if (o.n != "inf") {
    try {
      std::size_t used = 0;
      int n = std::stoi(o.n, &used);
      if (used != o.n.size() || n < 0) throw std::invalid_argument(o.n);
      q.n = n;
    } catch (const std::exception&) {
      throw UsageError("--n: expected a non-negative integer or 'inf'");
    }
  }
  const double l = theoretical_order(q);
  std::ostringstream v;
  v << std::fixed << std::setprecision(5) << l;
  if (o.output == "json") {
    Json j;
    j["family"] = o.family;
    j["m"] = o.m;
    j["n"] = o.n;
    j["order"] = v.str();
    out << j.dump(2) << "\n";
  } else {
    out << v.str() << "\n";
  }
  return kOk;
}

struct TableColumn {
  std::string label;
  RootMethod method;
  std::size_t window;
  std::vector<std::string> published;
};

struct TableSpec {
  std::string title;
  std::size_t rows;
  std::vector<TableColumn> columns;
};

TableSpec table_spec(const std::string& which) {
  if (which == "table4") {
    return {"cos(x) - x, x0 = 3, Picard bootstrap, x-based weights",
            10,
            {{"Picard", RootMethod::Picard, 1,
              {"2.26e+00", "1.73e+00", "1.90e-01", "1.14e-01", "8.15e-02", "5.24e-02", "3.63e-02", "2.40e-02",
               "1.63e-02", "1.09e-02"}},
             {"n=1", RootMethod::ExactDF, 2,
              {"2.26e+00", "1.73e+00", "6.19e-01", "8.35e-01", "1.01e-01", "1.23e-02", "2.91e-04", "7.94e-07",
               "5.09e-11", "8.93e-18"}},
             {"n=2", RootMethod::ExactDF, 3,
              {"2.26e+00", "1.73e+00", "6.19e-01", "3.47e-01", "6.61e-02", "1.73e-03", "4.27e-06", "5.60e-11",
               "4.80e-20", "1.33e-36"}},
             {"n=3", RootMethod::ExactDF, 4,
              {"2.26e+00", "1.73e+00", "6.19e-01", "3.47e-01", "1.77e-02", "2.00e-04", "1.78e-08", "4.40e-16",
               "6.06e-31", "2.08e-59"}},
             {"Newton", RootMethod::Newton, 1,
              {"2.26e+00", "1.24e+00", "1.39e+00", "4.94e-02", "5.68e-04", "7.12e-08", "1.12e-15", "2.76e-31",
               "1.68e-62", "6.25e-125"}}}};
  }
  if (which == "table6") {
    return {"cos(x) - x, x0 = 3, x-based Hermite weights",
            7,
            {{"n=0", RootMethod::ExactD1, 1,
              {"2.26e+00", "1.24e+00", "1.39e+00", "4.94e-02", "5.68e-04", "7.12e-08", "1.12e-15"}},
             {"n=1", RootMethod::ExactD1, 2,
              {"2.26e+00", "1.24e+00", "1.18e-01", "6.85e-04", "1.35e-10", "1.88e-28", "1.41e-77"}},
             {"n=2", RootMethod::ExactD1, 3,
              {"2.26e+00", "1.24e+00", "1.18e-01", "2.44e-05", "9.33e-15", "2.87e-43", "1.56e-126"}},
             {"n=3", RootMethod::ExactD1, 4,
              {"2.26e+00", "1.24e+00", "1.18e-01", "2.44e-05", "4.76e-15", "6.73e-44", "7.76e-131"}},
             {"Halley", RootMethod::Halley, 1,
              {"2.26e+00", "8.72e-01", "5.27e-02", "1.65e-05", "5.19e-16", "1.62e-47", "4.93e-142"}}}};
  }
  throw UsageError("--reproduce: expected table4 or table6");
}

std::vector<std::string> run_table_column(const TableColumn& col, std::size_t rows) {
  constexpr long bits = Precision::kTable;
  const Problem& p = find_problem("cos_minus_x");
  auto problem = root_problem<Real>(p, bits);
  SolverConfig<Real> c;
  c.method = col.method;
  c.window = col.window;
  c.precision_bits = bits;
  c.max_iter = rows - 1;
  c.tol_f = Real::pow2(-4 * bits, Precision(bits));
  c.tol_x = c.tol_f;
  c.bootstrap.kind = BootstrapKind::PicardStep;
  auto trace = solve(problem, c);
  std::vector<std::string> cells;
  for (const auto& s : trace.steps) cells.push_back(s.abs_error()->to_decimal(3));
  return cells;
}

int cmd_table(const TableOptions& o, std::ostream& out) {
  const TableSpec spec = table_spec(o.which);
  std::vector<std::future<std::vector<std::string>>> jobs;
  for (const auto& col : spec.columns) {
    jobs.push_back(std::async(std::launch::async, run_table_column, std::cref(col), spec.rows));
  }
  std::vector<std::vector<std::string>> computed;
  for (auto& j : jobs) computed.push_back(j.get());

  std::size_t mismatches = 0, cells = 0;
  Json columns = Json::array();
  for (std::size_t c = 0; c < spec.columns.size(); ++c) {
    Json col;
    col["name"] = spec.columns[c].label;
    col["method"] = method_name(spec.columns[c].method);
    col["window"] = spec.columns[c].window;
    Json rows = Json::array();
    for (std::size_t i = 0; i < spec.rows; ++i) {
      const std::string got = i < computed[c].size() ? computed[c][i] : "missing";
      const bool match = got == spec.columns[c].published[i];
      ++cells;
      if (!match) ++mismatches;
      rows.push_back(Json{{"i", i}, {"published", spec.columns[c].published[i]}, {"computed", got}, {"match", match}});
    }
    col["cells"] = std::move(rows);
    columns.push_back(std::move(col));
  }

  if (o.output == "json") {
    Json j;
    j["table"] = o.which;
    j["title"] = spec.title;
    j["columns"] = std::move(columns);
    j["match"] = mismatches == 0;
    out << j.dump(2) << "\n";
  } else {
    const bool csv = o.output == "csv";
    out << (csv ? "i" : "  i");
    for (const auto& col : spec.columns) {
      if (csv) out << "," << col.label;
      else out << "  " << std::setw(11) << col.label;
    }
    out << "\n";
    for (std::size_t i = 0; i < spec.rows; ++i) {
      if (csv) out << i;
      else out << std::setw(3) << i;
      for (std::size_t c = 0; c < spec.columns.size(); ++c) {
        const auto& cell = columns[c]["cells"][i];
        std::string text = cell["computed"].get<std::string>();
        if (csv) {
          out << "," << text;
        } else {
          if (!cell["match"].get<bool>()) text += "*";
          out << "  " << std::setw(11) << text;
        }
      }
      out << "\n";
    }
    if (!csv) {
      out << (mismatches == 0 ? "all " + std::to_string(cells) + " cells match to 3 significant figures"
                              : std::to_string(mismatches) + " of " + std::to_string(cells) +
                                    " cells differ (marked *)")
          << "\n";
    }
  }
  return mismatches == 0 ? kOk : kFailed;
}

int cmd_compare(const CompareOptions& co, std::ostream& out) {
  const CommonOptions& o = co.common;
  Source src = resolve_source(o, ProblemKind::Root);
  if (co.runs.empty()) throw UsageError("--runs needs at least one method[:window]");

  struct Run {
    std::string label;
    SolverConfig<Real> config;
  };
  std::vector<Run> runs;
  for (const auto& spec : co.runs) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::size_t window = o.window;
    if (colon != std::string::npos) {
      try {
        window = std::stoul(spec.substr(colon + 1));
      } catch (const std::exception&) {
        throw UsageError("--runs: bad window in '" + spec + "'");
      }
    }
    runs.push_back({spec, root_config(o, name, window)});
  }
  auto problem = make_root_problem<Real>(src.name, src.f, src.g, src.x0, src.reference);
  for (const auto& r : runs) {
    try {
      detail::validate(problem, r.config);
    } catch (const Error& e) {
      throw UsageError("--runs " + r.label + ": " + e.what());
    }
  }

  std::vector<std::future<IterationTrace<Real>>> jobs;
  for (const auto& r : runs) {
    jobs.push_back(std::async(std::launch::async, [&problem, &r] { return solve(problem, r.config); }));
  }
  std::vector<TraceDocument> docs;
  bool all_converged = true;
  const auto digits = o.digits ? o.digits : std::optional<std::size_t>(3);
  for (std::size_t k = 0; k < runs.size(); ++k) {
    auto trace = jobs[k].get();
    attach_reference(trace, src);
    all_converged = all_converged && trace.status() == StepStatus::Converged;
    docs.push_back(make_document(src.name, runs[k].label, root_config_json(runs[k].config, src.x0), trace,
                                 o.output == "json" ? o.digits : digits));
  }

  if (o.output == "json") {
    Json j;
    j["problem"] = src.name;
    j["runs"] = Json::array();
    for (const auto& d : docs) j["runs"].push_back(to_json(d));
    out << j.dump(2) << "\n";
    return all_converged ? kOk : kFailed;
  }
  std::size_t rows = 0;
  for (const auto& d : docs) rows = std::max(rows, d.steps.size());
  const bool csv = o.output == "csv";
  out << (csv ? "i" : "  i");
  for (const auto& d : docs) {
    if (csv) out << "," << d.method;
    else out << "  " << std::setw(14) << d.method;
  }
  out << "\n";
  for (std::size_t i = 0; i < rows; ++i) {
    if (csv) out << i;
    else out << std::setw(3) << i;
    for (const auto& d : docs) {
      std::string cell = i < d.steps.size() ? d.steps[i].abs_error.value_or("-") : "";
      if (csv) out << "," << cell;
      else out << "  " << std::setw(14) << cell;
    }
    out << "\n";
  }
  return all_converged ? kOk : kFailed;
}

void add_common(CLI::App* app, CommonOptions& o, bool root) {
  app->add_option("--problem", o.problem, "built-in problem name");
  app->add_option("--expr", o.expr, "expression in x");
  if (root) app->add_option("--fixed-point", o.fixed_point, "g(x) with x = g(x), used by picard");
  app->add_option("--x0", o.x0, "starting point");
  app->add_option("--method", o.method, "iteration method");
  if (root) {
    app->add_option("--weights", o.weights, "x, f or alpha")->check(CLI::IsMember({"x", "f", "alpha"}));
    app->add_option("--alpha", o.alpha, "shift for alpha weights");
  }
  app->add_option("--window", o.window, "memory size n+1");
  app->add_option("--beta", o.beta, "Chebyshev-Halley parameter");
  app->add_option("--tol-f", o.tol_f, root ? "residual tolerance" : "tolerance on phi'");
  app->add_option("--tol-x", o.tol_x, "step tolerance");
  app->add_option("--max-iter", o.max_iter, "iteration budget");
  app->add_option("--precision-bits", o.precision_bits, "working precision")
      ->envname("BARYITER_PRECISION_BITS")
      ->check(CLI::Range(Precision::kMin, 1L << 20));
  app->add_option("--bootstrap", o.bootstrap, "auto, picard, perturb or explicit");
  app->add_option("--x1", o.x1, "second point for explicit bootstrap");
  app->add_option("--perturb-h", o.h, "perturbation for perturb bootstrap");
  app->add_option("--output", o.output, "json, csv or human")->check(CLI::IsMember({"json", "csv", "human"}));
  app->add_option("--digits", o.digits, "significant digits in the trace")->check(CLI::PositiveNumber);
}

}  // namespace

Json to_json(const TraceDocument& doc) {
  Json j;
  j["problem"] = doc.problem;
  j["method"] = doc.method;
  j["config"] = doc.config;
  Json steps = Json::array();
  for (const auto& r : doc.steps) {
    Json s;
    s["i"] = r.i;
    s["x"] = r.x;
    s["f"] = r.f;
    s["abs_error"] = r.abs_error ? Json(*r.abs_error) : Json(nullptr);
    s["status"] = r.status;
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  Json summary;
  summary["status"] = doc.status;
  summary["iterations"] = doc.iterations;
  summary["empirical_order"] = doc.empirical_order ? Json(*doc.empirical_order) : Json(nullptr);
  j["summary"] = std::move(summary);
  return j;
}

TraceDocument document_from_json(const Json& j) {
  TraceDocument doc;
  doc.problem = j.at("problem").get<std::string>();
  doc.method = j.at("method").get<std::string>();
  doc.config = j.at("config");
  for (const auto& s : j.at("steps")) {
    TraceDocument::Row r;
    r.i = s.at("i").get<std::size_t>();
    r.x = s.at("x").get<std::string>();
    r.f = s.at("f").get<std::string>();
    if (!s.at("abs_error").is_null()) r.abs_error = s.at("abs_error").get<std::string>();
    r.status = s.at("status").get<std::string>();
    doc.steps.push_back(std::move(r));
  }
  const auto& summary = j.at("summary");
  doc.status = summary.at("status").get<std::string>();
  doc.iterations = summary.at("iterations").get<std::size_t>();
  if (!summary.at("empirical_order").is_null()) doc.empirical_order = summary.at("empirical_order").get<std::string>();
  return doc;
}

std::string emit_json(const TraceDocument& doc) { return to_json(doc).dump(2); }

std::string emit_csv(const TraceDocument& doc) {
  std::ostringstream os;
  os << "i,x,f,abs_error,status\n";
  for (const auto& r : doc.steps) {
    os << r.i << ',' << r.x << ',' << r.f << ',' << r.abs_error.value_or("") << ',' << r.status << '\n';
  }
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Root finding and optimisation with barycentric interpolants"};
  app.name("baryiter");
  app.require_subcommand(1);

  CommonOptions solve_opts;
  CommonOptions opt_opts;
  OrderOptions order_opts;
  TableOptions table_opts;
  CompareOptions compare_opts;

  auto* solve_cmd = app.add_subcommand("solve", "find a root and print the iteration trace");
  add_common(solve_cmd, solve_opts, true);
  auto* opt_cmd = app.add_subcommand("optimize", "find a stationary point of phi");
  add_common(opt_cmd, opt_opts, false);
  auto* order_cmd = app.add_subcommand("order", "theoretical convergence order");
  order_cmd->add_option("--family", order_opts.family, "root or opt")->check(CLI::IsMember({"root", "opt"}));
  order_cmd->add_option("--m", order_opts.m, "coincidence multiplicity");
  order_cmd->add_option("--n", order_opts.n, "memory index, or inf");
  order_cmd->add_option("--output", order_opts.output, "json or human")->check(CLI::IsMember({"json", "human"}));
  auto* table_cmd = app.add_subcommand("table", "reproduce a published error table");
  table_cmd->add_option("--reproduce", table_opts.which, "table4 or table6")
      ->required()
      ->check(CLI::IsMember({"table4", "table6"}));
  table_cmd->add_option("--output", table_opts.output, "json, csv or human")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  auto* compare_cmd = app.add_subcommand("compare", "side-by-side error table for several methods");
  add_common(compare_cmd, compare_opts.common, true);
  compare_cmd->add_option("--runs", compare_opts.runs, "method[:window] list")->delimiter(',')->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_opts, out);
    if (opt_cmd->parsed()) return cmd_optimize(opt_opts, out);
    if (order_cmd->parsed()) return cmd_order(order_opts, out);
    if (table_cmd->parsed()) return cmd_table(table_opts, out);
    if (compare_cmd->parsed()) return cmd_compare(compare_opts, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

}  // namespace baryiter::cli
