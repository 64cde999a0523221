#include "cli_app.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fpot/criteria.hpp"
#include "fpot/error.hpp"
#include "fpot/generator.hpp"
#include "fpot/means.hpp"
#include "fpot/verify.hpp"
#include "fpot/version.hpp"

namespace fpot::cli {

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input:
    case ErrorKind::parse:
    case ErrorKind::domain:
    case ErrorKind::monotonicity:
      return kInputError;
    case ErrorKind::singular_h:
      return kSingularH;
    default:
      return kNumericError;
  }
}

struct Options {
  std::string function;
  std::string interval;
  std::string lo;
  std::string hi;
  std::string out;
  std::string format;
  std::string atoms;
  std::string dist;
  std::string h;
  std::optional<double> x0;
  double A = 1.0;
  double B = 0.0;
  std::size_t grid = 64;
  std::size_t rows = 101;
  std::optional<double> tol;
  std::uint64_t seed = 7;
  std::size_t trials = 1000;
  bool deterministic = false;
};

std::optional<Interval> resolve_interval(const Options& o) {
  if (!o.interval.empty()) {
    const auto comma = o.interval.find(',');
    if (comma == std::string::npos) {
      throw InputError("interval '" + o.interval + "' must have the form lo,hi");
    }
    return Interval(parse_bound(trim(o.interval.substr(0, comma))),
                    parse_bound(trim(o.interval.substr(comma + 1))));
  }
  if (!o.lo.empty() || !o.hi.empty()) {
    return Interval(o.lo.empty() ? -kInf : parse_bound(o.lo),
                    o.hi.empty() ? kInf : parse_bound(o.hi));
  }
  return std::nullopt;
}

Interval require_interval(const Options& o) {
  auto i = resolve_interval(o);
  if (!i) throw InputError("an interval is required (-i lo,hi or --lo/--hi)");
  return *i;
}

Tolerance band_tolerance(const Options& o) {
  Tolerance tol;
  if (o.tol) tol.decision_band = *o.tol;
  tol.validate();
  return tol;
}

nlohmann::json bound_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

WeightedDistribution load_distribution(const Options& o) {
  if (!o.atoms.empty() && !o.dist.empty()) {
    throw InputError("give either --atoms or --dist, not both");
  }
  if (!o.atoms.empty()) return WeightedDistribution::parse_inline(o.atoms);
  if (o.dist.empty()) throw InputError("a distribution is required (--atoms or --dist)");
  std::ifstream in(o.dist);
  if (!in) throw InputError("cannot read distribution file '" + o.dist + "'");
  try {
    return WeightedDistribution::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("distribution file '" + o.dist + "': " + e.what());
  }
}

// Without an explicit interval, eval uses a small neighbourhood of the atoms.
Interval eval_domain(const Options& o, const WeightedDistribution& d) {
  if (auto i = resolve_interval(o)) return *i;
  const double lo = d.min_value();
  const double hi = d.max_value();
  const double pad = 1e-6 * std::max({1.0, hi - lo, std::abs(lo), std::abs(hi)});
  return Interval(lo - pad, hi + pad);
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto dist = load_distribution(o);
  const auto f = GeneratorFunction::from_expression(o.function, eval_domain(o, dist));
  const double lambda = eval_potential(f, dist);
  const std::string fmt = o.format.empty() ? "pretty" : o.format;
  if (fmt == "json") {
    out << nlohmann::json{{"tool", "fpot"},
                          {"version", kVersion},
                          {"function", o.function},
                          {"domain", {bound_json(f.domain().lo()), bound_json(f.domain().hi())}},
                          {"atoms", dist.to_json()},
                          {"lambda", lambda},
                          {"tolerances",
                           {{"inversion", "machine precision"},
                            {"probability_sum", WeightedDistribution::kSumTolerance}}}}
               .dump(2)
        << "\n";
  } else if (fmt == "csv") {
    out << "lambda,probability_sum_tolerance\n"
        << num(lambda) << "," << num(WeightedDistribution::kSumTolerance) << "\n";
  } else {
    out << num(lambda) << "\n"
        << "# inverted to machine precision; probabilities sum to 1 within "
        << num(WeightedDistribution::kSumTolerance) << "\n";
  }
  return kOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const auto f = GeneratorFunction::from_expression(o.function, require_interval(o));
  const auto report = classify_potential(f, o.grid, band_tolerance(o));
  const std::string fmt = o.format.empty() ? "json" : o.format;
  if (fmt == "json") {
    auto j = report.to_json();
    if (!o.deterministic) j["timestamp"] = utc_timestamp();
    out << j.dump(2) << "\n";
  } else if (fmt == "csv") {
    out << "function,lo,hi,f_direction,f_curvature,h_sign,h_curvature,type,potential\n"
        << '"' << o.function << "\"," << num(f.domain().lo()) << "," << num(f.domain().hi())
        << "," << to_string(report.f_direction) << "," << to_string(report.f_curvature.tag)
        << "," << to_string(report.h_sign) << "," << to_string(report.h_curvature.tag) << ","
        << to_string(report.potential_type) << "," << report.potential_verdict() << "\n";
  } else {
    out << "function     " << o.function << "\n"
        << "domain       (" << num(f.domain().lo()) << ", " << num(f.domain().hi()) << ")\n"
        << "f            " << to_string(report.f_direction) << ", "
        << to_string(report.f_curvature.tag) << "\n"
        << "h            " << to_string(report.h_sign) << ", "
        << to_string(report.h_curvature.tag) << "\n"
        << "type         " << to_string(report.potential_type) << "\n"
        << "potential    " << report.potential_verdict() << "\n";
    for (const auto* w : {&report.f_curvature.convexity_violation,
                          &report.f_curvature.concavity_violation}) {
      if (*w) {
        out << "witness      x0=" << num((*w)->x0) << " x1=" << num((*w)->x1)
            << " theta=" << num((*w)->theta) << " defect=" << num((*w)->defect) << "\n";
      }
    }
  }
  return report.potential_type == PotentialType::inconclusive ? kInconclusive : kOk;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.h.empty()) throw InputError("--h is required");
  const HSpec h = HSpec::from_expression(o.h, require_interval(o));
  const auto gen = generate_f(h, {o.x0, o.A, o.B});
  const double residual = gen.roundtrip_error(o.grid);
  const double limit = o.tol.value_or(1e-5);
  const auto range = gen.table_range();
  const auto xs = uniform_grid(range.lo(), range.hi(), std::max<std::size_t>(o.rows, 2));
  const std::string fmt = o.format.empty() ? "csv" : o.format;
  if (fmt == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (double x : xs) {
      const Jet2 j = gen.jet(x);
      rows.push_back({x, j.value, j.d1, j.d2});
    }
    out << nlohmann::json{{"tool", "fpot"},
                          {"version", kVersion},
                          {"h", o.h},
                          {"domain", {range.lo(), range.hi()}},
                          {"x0", gen.x0()},
                          {"A", gen.A()},
                          {"B", gen.B()},
                          {"columns", {"x", "f", "df", "d2f"}},
                          {"rows", rows},
                          {"roundtrip_h_max_rel_error", residual}}
               .dump(2)
        << "\n";
  } else {
    const char sep = fmt == "pretty" ? '\t' : ',';
    out << "x" << sep << "f" << sep << "df" << sep << "d2f\n";
    for (double x : xs) {
      const Jet2 j = gen.jet(x);
      out << num(x) << sep << num(j.value) << sep << num(j.d1) << sep << num(j.d2) << "\n";
    }
    out << "# roundtrip_h_max_rel_error=" << num(residual) << "\n";
  }
  if (!(residual <= limit)) {
    err << "fpot: round-trip error " << num(residual) << " exceeds " << num(limit) << "\n";
    return kNumericError;
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto f = GeneratorFunction::from_expression(o.function, require_interval(o));
  const auto report = consistency_suite(f, o.trials, o.seed, band_tolerance(o), o.grid);
  const std::string fmt = o.format.empty() ? "json" : o.format;
  if (fmt == "json") {
    out << report.to_json(o.deterministic).dump(2) << "\n";
  } else if (fmt == "csv") {
    out << "name,pass,skipped,worst_residual\n";
    for (const auto& p : report.properties) {
      out << p.name << "," << p.pass << "," << p.skipped << "," << num(p.worst_residual) << "\n";
    }
  } else {
    out << o.function << ": type " << to_string(report.potential_type) << "\n";
    for (const auto& p : report.properties) {
      out << (p.skipped ? "SKIP" : p.pass ? "PASS" : "FAIL") << "  " << p.name << "  "
          << num(p.worst_residual);
      if (!p.note.empty()) out << "  (" << p.note << ")";
      out << "\n";
    }
  }
  return report.all_pass() ? kOk : kVerificationFailed;
}

int cmd_table(const Options& o, std::ostream& out) {
  const Tolerance tol = band_tolerance(o);
  const auto rows = reproduce_table(o.grid, tol);
  const std::string fmt = o.format.empty() ? "json" : o.format;
  std::size_t passed = 0;
  for (const auto& r : rows) passed += r.pass ? 1 : 0;
  if (fmt == "json") {
    out << table_report_json(rows, o.grid, tol, o.deterministic).dump(2) << "\n";
  } else if (fmt == "csv") {
    out << "label,f,type,potential,h_max_rel_error,pass\n";
    for (const auto& r : rows) {
      out << r.row.label << ",\"" << r.row.f_source << "\","
          << (r.report ? to_string(r.report->potential_type) : "error") << ","
          << (r.report ? r.report->potential_verdict() : "error") << ","
          << num(r.h_max_rel_error) << "," << r.pass << "\n";
    }
  } else {
    for (const auto& r : rows) {
      out << (r.pass ? "PASS" : "FAIL") << "  " << r.row.label << "  " << r.row.f_source << "  "
          << (r.report ? to_string(r.report->potential_type) : "error") << "  "
          << (r.report ? r.report->potential_verdict() : "error") << "\n";
      for (const auto& d : r.diagnostics) out << "      " << d << "\n";
    }
    out << passed << "/" << rows.size() << " rows pass\n";
  }
  return passed == rows.size() ? kOk : kVerificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-arithmetic means (f-potentials): evaluation, convexity classification, "
               "generator reconstruction and verification.",
               "fpot"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options o;
  const std::vector<std::string> formats{"json", "csv", "pretty"};

  auto add_function = [&](CLI::App* c) {
    c->add_option("-f,--function", o.function, "Generator f(x), e.g. \"exp(x)\"")->required();
  };
  auto add_interval = [&](CLI::App* c) {
    c->add_option("-i,--interval", o.interval,
                  "Open interval lo,hi; quote negative bounds as \" -10,10\"; inf and "
                  "constants like pi/2 are accepted");
    c->add_option("--lo", o.lo, "Lower bound (alternative to -i)");
    c->add_option("--hi", o.hi, "Upper bound (alternative to -i)");
  };
  auto add_output = [&](CLI::App* c, const std::string& default_format) {
    c->add_option("--out", o.out, "Write the result to this file instead of stdout");
    c->add_option("--format", o.format, "Output format (default " + default_format + ")")
        ->check(CLI::IsMember(formats));
  };
  auto add_grid = [&](CLI::App* c) {
    c->add_option("--grid", o.grid, "Grid points for sweeps")->capture_default_str()
        ->check(CLI::Range(std::size_t{3}, std::size_t{1000000}));
  };
  auto add_band = [&](CLI::App* c) {
    c->add_option("--tol", o.tol, "Decision band for sign and curvature tests (default 1e-7)");
  };
  auto add_deterministic = [&](CLI::App* c) {
    c->add_flag("--deterministic", o.deterministic, "Omit the timestamp from reports");
  };

  auto* eval = app.add_subcommand("eval", "Evaluate the f-potential of a finite distribution");
  add_function(eval);
  add_interval(eval);
  eval->add_option("--atoms", o.atoms, "Inline atoms x:p,x:p,...");
  eval->add_option("--dist", o.dist, "JSON file with [{\"x\": .., \"p\": ..}, ...]");
  add_output(eval, "pretty");

  auto* classify = app.add_subcommand("classify", "Classify the potential of f on an interval");
  add_function(classify);
  add_interval(classify);
  add_grid(classify);
  add_band(classify);
  add_deterministic(classify);
  add_output(classify, "json");

  auto* generate = app.add_subcommand("generate", "Build f from a prescribed h = f'/f''");
  // -h would clash with --h.
  generate->set_help_flag("--help", "Print this help message and exit");
  generate->add_option("--h", o.h, "h(x), nonvanishing on the interval")->required();
  add_interval(generate);
  generate->add_option("--x0", o.x0, "Base point (default: interval midpoint)");
  generate->add_option("--A", o.A, "Scale, nonzero")->capture_default_str();
  generate->add_option("--B", o.B, "Shift")->capture_default_str();
  generate->add_option("--rows", o.rows, "Rows in the sampled table")->capture_default_str();
  add_grid(generate);
  generate->add_option("--tol", o.tol, "Largest accepted round-trip error (default 1e-5)");
  add_output(generate, "csv");

  auto* verify = app.add_subcommand("verify", "Run the consistency suite against f");
  add_function(verify);
  add_interval(verify);
  add_grid(verify);
  add_band(verify);
  verify->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  verify->add_option("--trials", o.trials, "Trials per property")->capture_default_str();
  add_deterministic(verify);
  add_output(verify, "json");

  auto* table = app.add_subcommand("table", "Reproduce the built-in classification table");
  add_grid(table);
  add_band(table);
  add_deterministic(table);
  add_output(table, "json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Prints help/version to out and parse errors to err.
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }

  std::ostringstream buffer;
  int code = kOk;
  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == eval) {
      code = cmd_eval(o, buffer);
    } else if (sub == classify) {
      code = cmd_classify(o, buffer);
    } else if (sub == generate) {
      code = cmd_generate(o, buffer, err);
    } else if (sub == verify) {
      code = cmd_verify(o, buffer);
    } else {
      code = cmd_table(o, buffer);
    }
  } catch (const Error& e) {
    err << "fpot: " << to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "fpot: " << e.what() << "\n";
    return kNumericError;
  }

  if (o.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(o.out);
    if (!file || !(file << buffer.str()) || !file.flush()) {
      err << "fpot: cannot write '" << o.out << "'\n";
      return kInputError;
    }
  }
  return code;
}

}  // namespace fpot::cli
