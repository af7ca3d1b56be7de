#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmoments/bounds.hpp"
#include "qmoments/errors.hpp"
#include "qmoments/io.hpp"
#include "qmoments/momentmatch.hpp"
#include "qmoments/quadrature.hpp"

namespace {

struct Options {
  long p = 0;
  int n = 0;
  std::vector<long> bases;
  int digits = 50;
  std::string format;
  std::string output;
  std::string from_file;
  int dim = 1;
  bool header = false;
  long cap = 1000000;
};

mpfr_prec_t pick_precision(int digits) {
  if (const char* env = std::getenv("QMOMENTS_PRECISION")) {
    char* end = nullptr;
    const long bits = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || bits < 32 || bits > (1L << 24)) {
      throw qmoments::domain_error("QMOMENTS_PRECISION must be an integer bit count in [32, 2^24]");
    }
    return static_cast<mpfr_prec_t>(bits);
  }
  const long bits = static_cast<long>(std::ceil(digits * 3.3219280948873626)) + 64;
  return static_cast<mpfr_prec_t>(std::max(192L, bits));
}

qmoments::BaseSpec make_spec(const Options& o) {
  if (!o.bases.empty()) return qmoments::BaseSpec(o.bases);
  if (o.p >= 2 && o.n >= 1) return qmoments::BaseSpec(o.p, o.n);
  throw qmoments::domain_error("provide --bases p1,p2,... or both --p and --n");
}

qmoments::CoefficientSet solve(const qmoments::BaseSpec& spec) {
  auto cs = spec.uniform()
                ? qmoments::coefficients(spec.bases.front(), spec.n(), 0)
                : qmoments::mixed_base_solve(spec, 0);
  return cs;
}

void write_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw qmoments::domain_error("cannot open output file: " + path);
  fn(file);
}

void check_node_cap(const qmoments::BaseSpec& spec, long cap) {
  if (spec.node_count() > cap) {
    throw qmoments::size_error("node count exceeds --cap (" + std::to_string(cap) + ")");
  }
}

int cmd_coeffs(const Options& o) {
  const auto spec = make_spec(o);
  const auto cs = solve(spec);
  std::string text;
  if (o.format == "csv") {
    text = qmoments::coeffs_csv(cs, o.digits, o.header);
  } else if (o.format == "text") {
    text = qmoments::coeffs_text(cs, o.digits);
  } else {
    text = qmoments::coeffs_json(cs, o.digits);
  }
  write_output(o.output, [&text](std::ostream& out) { out << text; });
  if (!cs.converged) {
    std::cerr << "solution could not be certified at the working precision\n";
    return 3;
  }
  return 0;
}

int cmd_nodes(const Options& o) {
  const auto spec = make_spec(o);
  check_node_cap(spec, o.cap);
  const auto cs = solve(spec);
  if (!cs.converged) {
    throw qmoments::precision_error("solution could not be certified at the working precision");
  }
  const auto qf = qmoments::enumerate_nodes(cs);
  std::string text;
  if (o.format == "csv") {
    text = qmoments::nodes_csv(qf, o.digits, o.header);
  } else if (o.format == "text") {
    text = qmoments::nodes_text(qf, o.digits);
  } else {
    text = qmoments::nodes_json(qf, o.digits);
  }
  write_output(o.output, [&text](std::ostream& out) { out << text; });
  return 0;
}

int cmd_verify(const Options& o) {
  qmoments::VerifyReport report;
  if (!o.from_file.empty()) {
    std::ifstream file(o.from_file, std::ios::binary);
    if (!file) throw qmoments::domain_error("cannot open input file: " + o.from_file);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    report = qmoments::verify_from_file(buffer.str());
  } else {
    report = qmoments::run_verification(make_spec(o), 0);
  }
  const std::string text =
      o.format == "text" ? qmoments::verify_text(report) : qmoments::verify_json(report);
  write_output(o.output, [&text](std::ostream& out) { out << text; });
  return report.all_pass() ? 0 : 1;
}

int cmd_figure(const Options& o) {
  const auto spec = make_spec(o);
  check_node_cap(spec, o.cap);
  const auto cs = solve(spec);
  if (!cs.converged) {
    throw qmoments::precision_error("solution could not be certified at the working precision");
  }
  const auto qf = qmoments::enumerate_nodes(cs);
  const auto fmt = o.format == "svg" ? qmoments::FigureFormat::svg : qmoments::FigureFormat::text;
  const std::string text = qmoments::emit_figure(qf, fmt);
  write_output(o.output, [&text](std::ostream& out) { out << text; });
  return 0;
}

int cmd_cubature(const Options& o) {
  const auto spec = make_spec(o);
  check_node_cap(spec, o.cap);
  const auto total = qmoments::int_pow(spec.node_count(), static_cast<unsigned long>(o.dim));
  if (total > o.cap) {
    throw qmoments::size_error("cubature point count exceeds --cap (" + std::to_string(o.cap) + ")");
  }
  const auto cs = solve(spec);
  if (!cs.converged) {
    throw qmoments::precision_error("solution could not be certified at the working precision");
  }
  const auto qf = qmoments::enumerate_nodes(cs);
  write_output(o.output, [&](std::ostream& out) {
    if (o.format == "json") {
      qmoments::cubature_json(out, qf, o.dim, o.digits);
    } else {
      qmoments::cubature_csv(out, qf, o.dim, o.digits, o.header);
    }
  });
  return 0;
}

void add_common(CLI::App* sub, Options& o, const std::vector<std::string>& formats,
                const std::string& default_format) {
  auto* opt_p = sub->add_option("--p", o.p, "uniform base (requires --n)");
  auto* opt_n = sub->add_option("--n", o.n, "number of variables for --p");
  auto* opt_bases =
      sub->add_option("--bases", o.bases, "comma-separated base list, one per variable")
          ->delimiter(',');
  opt_p->needs(opt_n);
  opt_bases->excludes(opt_p);
  opt_bases->excludes(opt_n);
  sub->add_option("--digits", o.digits, "significant decimal digits to print (default: 50)")
      ->check(CLI::Range(10, 100000));
  sub->add_option("--format", o.format, "output format (default: " + default_format + ")")
      ->check(CLI::IsMember(formats));
  sub->add_option("--output", o.output, "write to this file instead of standard output");
  sub->add_option("--cap", o.cap,
                  "abort if the node/point count exceeds this (default: 1000000)")
      ->check(CLI::Range(1L, 1000000L));
  sub->add_flag("--header", o.header, "emit a CSV column-header row");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Equal-weight quadrature on [-1,1] from sums of scaled discrete uniform "
      "variables: coefficient construction, node enumeration, certified "
      "verification, ruler figures, and product cubature grids. All output is "
      "deterministic. Set QMOMENTS_PRECISION to override the working precision "
      "in bits."};
  app.require_subcommand(1);

  Options o;
  auto* coeffs = app.add_subcommand("coeffs", "compute scaling coefficients");
  add_common(coeffs, o, {"json", "csv", "text"}, "json");
  auto* nodes = app.add_subcommand("nodes", "enumerate quadrature nodes");
  add_common(nodes, o, {"json", "csv", "text"}, "json");
  auto* verify = app.add_subcommand("verify", "run the certified verification battery");
  add_common(verify, o, {"json", "text"}, "json");
  verify->add_option("--from-file", o.from_file,
                     "re-check exactness from a nodes JSON document");
  auto* figure = app.add_subcommand("figure", "draw the ruler figure");
  add_common(figure, o, {"text", "svg"}, "text");
  auto* cubature = app.add_subcommand("cubature", "emit a d-dimensional product grid");
  add_common(cubature, o, {"csv", "json"}, "csv");
  cubature->add_option("--dim", o.dim, "grid dimension")->default_val(1)->check(CLI::Range(1, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  // --format binds one variable across subcommands, so per-command defaults
  // are applied here rather than through CLI11's default machinery.
  const auto fallback_format = [&o](const char* def) {
    if (o.format.empty()) o.format = def;
  };
  try {
    qmoments::set_default_precision(pick_precision(o.digits));
    if (coeffs->parsed()) {
      fallback_format("json");
      return cmd_coeffs(o);
    }
    if (nodes->parsed()) {
      fallback_format("json");
      return cmd_nodes(o);
    }
    if (verify->parsed()) {
      fallback_format("json");
      return cmd_verify(o);
    }
    if (figure->parsed()) {
      fallback_format("text");
      return cmd_figure(o);
    }
    if (cubature->parsed()) {
      fallback_format("csv");
      return cmd_cubature(o);
    }
    return 2;
  } catch (const qmoments::precision_error& e) {
    std::cerr << "precision failure: " << e.what() << '\n';
    return 3;
  } catch (const qmoments::consistency_error& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return 1;
  } catch (const qmoments::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
