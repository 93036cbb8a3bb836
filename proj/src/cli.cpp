#include "jbessel/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "jbessel/report.hpp"
#include "jbessel/verify.hpp"

namespace jbessel {

namespace {

const std::vector<std::string> kCommands = {"coeffs", "eval", "zeros", "verify", "conjecture"};

Perturbation parse_perturbation(const std::string& text) {
  const auto colon = text.find(':');
  std::size_t used = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
    const std::string idx = text.substr(0, colon), fac = text.substr(colon + 1);
    const long long index = std::stoll(idx, &used);
    if (used != idx.size() || index < 0) throw std::invalid_argument("bad index");
    const double factor = std::stod(fac, &used);
    if (used != fac.size()) throw std::invalid_argument("bad factor");
    return {static_cast<std::size_t>(index), factor};
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_argument, "--perturb expects index:factor, got '" + text + "'");
  }
}

Json error_json(std::string_view type, const std::string& message) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["error"] = {{"type", type}, {"message", message}};
  return j;
}

Json params_json(const ModelParams& p) {
  Json j;
  j["nu"] = p.nu();
  j["alpha"] = p.alpha();
  j["beta"] = p.beta();
  j["a"] = p.a();
  j["class"] = to_string(p.cls());
  j["mu"] = p.mu();
  return j;
}

Json header(const RunConfig& cfg, const ModelParams& p) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = cfg.command;
  j["params"] = params_json(p);
  j["source"] = to_string(cfg.source);
  Json pert = Json::array();
  for (const auto& q : cfg.perturbations) pert.push_back({{"index", q.index}, {"factor", q.factor}});
  j["perturbations"] = pert;
  return j;
}

Json check_json(const ResidualReport& r) {
  Json j;
  j["name"] = r.name;
  j["status"] = to_string(r.status);
  j["residual"] = r.residual;
  j["error_estimate"] = r.error_estimate;
  j["tolerance"] = r.tolerance;
  j["note"] = r.note;
  j["samples"] = r.samples;
  j["rel_residuals"] = r.rel_residuals;
  return j;
}

Json failed_check_json(const std::string& name, const Error& e) {
  Json j;
  j["name"] = name;
  j["status"] = "fail";
  j["error"] = {{"type", to_string(e.kind())}, {"message", e.what()}};
  return j;
}

CoefficientTable build_table(const RunConfig& cfg, const ModelParams& p, std::size_t N) {
  CoefficientTable t = make_table(p, N, cfg.source);
  for (const auto& q : cfg.perturbations) t = t.perturbed(q.index, q.factor);
  return t;
}

bool is_integer_beta(double beta) { return beta >= 0.0 && std::fabs(beta - std::round(beta)) <= 1e-9; }

// ---------------------------------------------------------------- commands

CommandResult cmd_coeffs(const RunConfig& cfg, const ModelParams& p) {
  const CoefficientTable t = build_table(cfg, p, cfg.n);
  CommandResult res;
  if (cfg.format == OutputFormat::csv) {
    res.text = csv_row({"n", "c_n", "log_abs_c_n", "sign", "abs_ratio"});
    for (std::size_t n = 0; n <= t.max_index(); ++n)
      res.text += csv_row({std::to_string(n), format_double(t.value(n)), format_double(t.log_abs[n]),
                           std::to_string(t.sign[n]), format_double(std::fabs(t.ratio[n]))});
    return res;
  }
  Json j = header(cfg, p);
  Json rows = Json::array();
  for (std::size_t n = 0; n <= t.max_index(); ++n) {
    Json r;
    r["n"] = n;
    r["c_n"] = t.value(n);
    r["log_abs_c_n"] = t.log_abs[n];
    r["sign"] = t.sign[n];
    r["abs_ratio"] = std::fabs(t.ratio[n]);
    rows.push_back(r);
  }
  j["coefficients"] = rows;
  res.text = dump_json(j);
  return res;
}

CommandResult cmd_eval(const RunConfig& cfg, const ModelParams& p) {
  if (cfg.z.empty()) throw Error(ErrorKind::invalid_argument, "eval needs at least one --z value");
  const double tol = cfg.tol.value_or(kDefaultSeriesTol);
  const SeriesFunction sf(build_table(cfg, p, std::max<std::size_t>(cfg.n, 1)));
  struct Row {
    double z;
    EvalResult F, dF;
    std::optional<double> f;
  };
  std::vector<Row> rows;
  for (double z : cfg.z) {
    Row r{z, sf.eval_F(z, tol), sf.eval_F_prime(z, tol), std::nullopt};
    if (z > 0.0 || (p.nu() >= 0.0 && p.nu() == std::floor(p.nu()))) r.f = sf.eval_f(z, tol);
    rows.push_back(r);
  }
  CommandResult res;
  if (cfg.format == OutputFormat::csv) {
    res.text = csv_row({"z", "F", "F_prime", "f", "error_bound", "terms_used", "precision_bits"});
    for (const auto& r : rows)
      res.text += csv_row({format_double(r.z), format_double(r.F.value), format_double(r.dF.value),
                           r.f ? format_double(*r.f) : "", format_double(r.F.error_bound),
                           std::to_string(r.F.terms_used), std::to_string(r.F.precision_bits)});
    return res;
  }
  Json j = header(cfg, p);
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json e;
    e["z"] = r.z;
    e["F"] = r.F.value;
    e["F_prime"] = r.dF.value;
    e["f"] = r.f ? Json(*r.f) : Json(nullptr);
    e["error_bound"] = r.F.error_bound;
    e["terms_used"] = r.F.terms_used;
    e["precision_bits"] = r.F.precision_bits;
    arr.push_back(e);
  }
  j["values"] = arr;
  res.text = dump_json(j);
  return res;
}

CommandResult cmd_zeros(const RunConfig& cfg, const ModelParams& p) {
  const std::size_t k = cfg.zeros.value_or(10);
  const SeriesFunction sf(build_table(cfg, p, std::max<std::size_t>(cfg.n, 1)));
  ScanOptions opt;
  if (cfg.tol) opt.refine_tol = *cfg.tol;
  const ZeroSet zs = find_zeros(sf, k, opt);
  CommandResult res;
  if (cfg.format == OutputFormat::csv) {
    res.text = csv_row({"n", "lambda", "F_prime", "f_prime"});
    for (std::size_t i = 0; i < zs.size(); ++i)
      res.text += csv_row({std::to_string(i + 1), format_double(zs.lambdas[i]), format_double(zs.F_prime[i]),
                           format_double(zs.f_prime[i])});
    return res;
  }
  Json j = header(cfg, p);
  j["refine_tol"] = zs.refine_tol;
  Json arr = Json::array();
  for (std::size_t i = 0; i < zs.size(); ++i)
    arr.push_back({{"n", i + 1}, {"lambda", zs.lambdas[i]}, {"F_prime", zs.F_prime[i]}, {"f_prime", zs.f_prime[i]}});
  j["zeros"] = arr;
  if (zs.size() >= 5) {
    const SummabilityReport d = summability_diagnostic(zs);
    j["summability"] = {{"slope", d.slope},           {"slope_stderr", d.slope_stderr},
                        {"exponent", d.exponent},     {"partial_sum", d.partial_sum},
                        {"tail_estimate", d.tail_estimate}, {"consistent", d.consistent}};
  }
  res.text = dump_json(j);
  return res;
}

CommandResult cmd_verify(const RunConfig& cfg, const ModelParams& p) {
  const double tol = cfg.tol.value_or(1e-10);
  const std::size_t M = cfg.zeros.value_or(40);
  const std::size_t gram_n = cfg.gram_size.value_or(6);
  const std::size_t quad_m = cfg.quad_m.value_or(48);

  const CoefficientTable table = build_table(cfg, p, std::max<std::size_t>(cfg.n, 200));
  const SeriesFunction sf(table);

  std::vector<Json> checks;
  auto run = [&](const std::string& name, const std::function<std::vector<ResidualReport>()>& body) {
    try {
      for (const auto& r : body()) checks.push_back(check_json(r));
    } catch (const Error& e) {
      checks.push_back(failed_check_json(name, e));
    }
  };

  run("coefficient_forms", [&] {
    std::vector<ResidualReport> out;
    const std::size_t N = std::min<std::size_t>(100, table.max_index());
    if (p.cls() == FunctionClass::B) {
      const auto other = table.source == CoefficientSource::closed_form ? class_b_recurrence(p, N)
                                                                        : class_b_closed_form(p, N);
      out.push_back(compare_tables(table, other, N));
      if (is_integer_beta(p.beta()) && table.source != CoefficientSource::hyperbessel) {
        auto r = compare_tables(table, hyperbessel_coeffs(p, N).table, N);
        r.name = "coefficient_forms_hyperbessel";
        out.push_back(r);
      }
    } else {
      const auto other = table.source == CoefficientSource::closed_form ? class_a_coeffs(p, N)
                                                                        : class_a_closed_form(p, N);
      out.push_back(compare_tables(table, other, N));
    }
    return out;
  });
  run("order", [&] { return std::vector{order_check(table)}; });

  // The first zero sets the sample scale; the full set feeds the zero-based
  // checks. Kept separate so a corrupted table that loses its later zeros
  // still reaches the residual checks.
  std::optional<double> first_zero;
  try {
    first_zero = find_zeros(sf, 1).lambdas.front();
  } catch (const Error& e) {
    checks.push_back(failed_check_json("first_zero", e));
  }
  if (first_zero) {
    const double l1 = *first_zero;
    run(p.cls() == FunctionClass::B ? "integral_equation_B" : "integral_equation_A", [&] {
      const auto samples = default_z_samples(l1);
      return std::vector{p.cls() == FunctionClass::B ? integral_eq_residual_B(sf, samples, tol)
                                                     : integral_eq_residual_A(sf, samples, tol)};
    });
    if (p.beta() == 0.0 && p.a() < 0.0) {
      run("bessel_reduction", [&] {
        std::vector<double> samples;
        for (int k = 1; k <= 20; ++k) samples.push_back(0.9 * l1 * k / 20.0);
        return std::vector{bessel_reduction_residual(sf, samples, tol)};
      });
    }
  }
  std::optional<ZeroSet> zs;
  if (first_zero) {
    try {
      zs = find_zeros(sf, std::max(M, gram_n));
    } catch (const Error& e) {
      checks.push_back(failed_check_json("zeros", e));
    }
  }
  if (zs) {
    const double l1 = zs->lambdas.front();
    run("zero_growth", [&] { return std::vector{zero_growth_check(*zs)}; });
    run("gram_orthogonality", [&] { return std::vector{to_report(gram_matrix(sf, *zs, gram_n, quad_m))}; });
    run("kernel", [&] {
      const auto k = kernel_checks(sf, *zs, M, default_kernel_pairs(l1));
      return std::vector{k.constant, k.identity};
    });
  }
  if (p.cls() == FunctionClass::B && is_integer_beta(p.beta()))
    run("ode_coefficients", [&] { return std::vector{ode_coefficient_residual(p, table, 60)}; });
  run("mellin_kernel", [&] { return std::vector{mellin_kernel_identity(p, default_s_samples(p), tol)}; });

  std::map<std::string, int> counts{{"pass", 0}, {"fail", 0}, {"evidence", 0}};
  for (const auto& c : checks) ++counts[c["status"].get<std::string>()];
  CommandResult res;
  res.exit_code = counts["fail"] > 0 ? kExitCheckFailed : kExitOk;
  if (cfg.format == OutputFormat::csv) {
    res.text = csv_row({"name", "status", "residual", "error_estimate", "tolerance", "note"});
    for (const auto& c : checks) {
      if (c.contains("error")) {
        res.text += csv_row({c["name"].get<std::string>(), "fail", "", "", "",
                             c["error"]["type"].get<std::string>() + ": " + c["error"]["message"].get<std::string>()});
      } else {
        res.text += csv_row({c["name"].get<std::string>(), c["status"].get<std::string>(),
                             format_double(c["residual"].get<double>()), format_double(c["error_estimate"].get<double>()),
                             format_double(c["tolerance"].get<double>()), c["note"].get<std::string>()});
      }
    }
    return res;
  }
  Json j = header(cfg, p);
  j["checks"] = checks;
  j["summary"] = {{"pass", counts["pass"]}, {"fail", counts["fail"]}, {"evidence", counts["evidence"]}};
  res.text = dump_json(j);
  return res;
}

CommandResult cmd_conjecture(const RunConfig& cfg, const ModelParams& p) {
  const std::size_t N = cfg.gram_size.value_or(8);
  const std::size_t m = cfg.quad_m.value_or(96);
  const double tol = cfg.tol.value_or(1e-8);
  const SeriesFunction sf(build_table(cfg, p, std::max<std::size_t>(cfg.n, 1)));
  const ZeroSet zs = find_zeros(sf, N);
  const GramReport g = gram_matrix(sf, zs, N, m, tol);
  CommandResult res;
  res.exit_code = g.status == CheckStatus::fail ? kExitCheckFailed : kExitOk;
  if (cfg.format == OutputFormat::csv) {
    res.text = csv_row({"n", "m", "G_nm"});
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b)
        res.text += csv_row({std::to_string(a + 1), std::to_string(b + 1), format_double(g.entries[a][b])});
    return res;
  }
  Json j = header(cfg, p);
  j["N"] = N;
  j["quad_m"] = m;
  j["lambdas"] = g.lambdas;
  j["gram"] = g.entries;
  j["max_offdiag"] = g.max_offdiag;
  j["quadrature_error_estimate"] = g.quadrature_error_estimate;
  j["tolerance"] = g.tolerance;
  j["status"] = to_string(g.status);
  res.text = dump_json(j);
  return res;
}

}  // namespace

CommandResult run_command(const RunConfig& cfg) {
  try {
    const ModelParams p = validate(cfg.params);
    if (cfg.command == "coeffs") return cmd_coeffs(cfg, p);
    if (cfg.command == "eval") return cmd_eval(cfg, p);
    if (cfg.command == "zeros") return cmd_zeros(cfg, p);
    if (cfg.command == "verify") return cmd_verify(cfg, p);
    if (cfg.command == "conjecture") return cmd_conjecture(cfg, p);
    throw Error(ErrorKind::invalid_argument, "unknown command '" + cfg.command + "'");
  } catch (const ConstraintViolation& e) {
    Json j = error_json(to_string(e.kind()), e.what());
    j["error"]["constraint"] = to_string(e.which());
    return {dump_json(j), kExitError};
  } catch (const Error& e) {
    return {dump_json(error_json(to_string(e.kind()), e.what())), kExitError};
  } catch (const std::exception& e) {
    return {dump_json(error_json("InternalError", e.what())), kExitError};
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Entire functions orthogonal over their own zeros: coefficients, zeros and identity checks"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  std::string cls = "B", format = "json", source = "recurrence";
  std::vector<std::string> perturb;
  std::size_t zeros = 0, gram = 0, quad = 0;
  double tol = 0.0;
  app.add_option("command", cfg.command, "coeffs | eval | zeros | verify | conjecture")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("--nu", cfg.params.nu, "nu");
  app.add_option("--alpha", cfg.params.alpha, "alpha");
  app.add_option("--beta", cfg.params.beta, "beta (> -1)");
  app.add_option("--a", cfg.params.a, "a (nonzero)");
  app.add_option("--class", cls, "function class")->check(CLI::IsMember({"A", "B"}));
  app.add_option("--n", cfg.n, "number of coefficients");
  auto* zeros_opt = app.add_option("--zeros", zeros, "zero count (kernel truncation M for verify)");
  auto* gram_opt = app.add_option("--gram-size", gram, "Gram matrix size");
  auto* quad_opt = app.add_option("--quad-m", quad, "Gauss-Jacobi rule size");
  auto* tol_opt = app.add_option("--tol", tol, "tolerance");
  app.add_option("--z", cfg.z, "evaluation points (eval)")->delimiter(',');
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--source", source, "coefficient route")
      ->check(CLI::IsMember({"recurrence", "closed_form", "hyperbessel"}));
  app.add_option("--perturb", perturb, "scale c_index by factor, as index:factor (repeatable)")->delimiter(',');

  auto emit = [&](const std::string& text) -> bool {
    if (cfg.out.empty()) {
      out << text;
      return true;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    f << text;
    f.close();
    if (!f) {
      out << dump_json(error_json("IOError", "cannot write " + cfg.out));
      err << "error: cannot write " << cfg.out << "\n";
      return false;
    }
    return true;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    out << dump_json(error_json("InvalidArgument", e.what()));
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    cfg.params.cls = cls == "A" ? FunctionClass::A : FunctionClass::B;
    cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    cfg.source = source == "closed_form"   ? CoefficientSource::closed_form
                 : source == "hyperbessel" ? CoefficientSource::hyperbessel
                                           : CoefficientSource::recurrence;
    for (const auto& s : perturb) cfg.perturbations.push_back(parse_perturbation(s));
    if (zeros_opt->count()) cfg.zeros = zeros;
    if (gram_opt->count()) cfg.gram_size = gram;
    if (quad_opt->count()) cfg.quad_m = quad;
    if (tol_opt->count()) cfg.tol = tol;
  } catch (const Error& e) {
    out << dump_json(error_json(to_string(e.kind()), e.what()));
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  const CommandResult res = run_command(cfg);
  if (res.exit_code == kExitError) {
    // Errors go to the report destination and to stderr as one line.
    err << "error: report contains an error object\n";
  }
  if (!emit(res.text)) return kExitError;
  return res.exit_code;
}

}  // namespace jbessel
