#include "qmoments/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "qmoments/errors.hpp"
#include "qmoments/qseries.hpp"
#include "qmoments/bounds.hpp"

namespace qmoments {

namespace {

using ordered_json = nlohmann::ordered_json;

// Significant-digit scientific rendering of one endpoint, round-to-nearest.
std::string sig_string(mpfr_srcptr x, int digits) {
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Re", digits - 1, x);
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

std::string method_string(SolveMethod method) {
  return method == SolveMethod::polynomial_roots ? "polynomial_roots" : "newton_mixed";
}

std::string fraction_string(const BigRational& r) { return r.get_str(); }

BigRational parse_fraction_or_decimal(const std::string& s) {
  if (s.find('/') != std::string::npos) {
    BigRational r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0) {
      throw domain_error("parse: malformed fraction '" + s + "'");
    }
    mpq_canonicalize(r.get_mpq_t());
    return r;
  }
  return parse_decimal(s);
}

ordered_json q_field(const BaseSpec& spec) {
  if (spec.uniform()) {
    const long p = spec.bases.front();
    return ordered_json(p * p);
  }
  ordered_json arr = ordered_json::array();
  for (const long p : spec.bases) arr.push_back(p * p);
  return arr;
}

std::vector<std::string> ball_strings(const std::vector<Ball>& xs, int digits) {
  std::vector<std::string> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(decimal_string(x, digits));
  return out;
}

std::vector<std::string> radius_strings(const std::vector<Ball>& xs,
                                        const std::vector<std::string>& printed) {
  std::vector<std::string> out;
  out.reserve(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) out.push_back(radius_string(xs[i], printed[i]));
  return out;
}

bool contains_zero_all(const std::vector<Ball>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](const Ball& x) { return x.contains_zero(); });
}

double max_radius(const std::vector<Ball>& xs) {
  double m = 0.0;
  for (const auto& x : xs) m = std::max(m, x.radius_double());
  return m;
}

std::string magnitude_string(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

}  // namespace

std::string decimal_string(const Ball& x, int digits) {
  if (digits < 1) throw domain_error("decimal_string: digits must be >= 1");
  auto certified = [&x](int d) {
    std::string a = sig_string(x.lower(), d);
    return a == sig_string(x.upper(), d) ? a : std::string();
  };
  std::string full = certified(digits);
  if (!full.empty()) return full;
  // Rounding agreement is not monotone in the digit count, so scan downward.
  for (int d = digits - 1; d >= 1; --d) {
    std::string s = certified(d);
    if (!s.empty()) return s + "~";
  }
  return "0~";
}

std::string radius_string(const Ball& x, const std::string& printed) {
  const BigRational v = parse_decimal(printed);
  const BigRational r =
      std::max(x.upper_rational() - v, v - x.lower_rational());
  if (r == 0) return "0";
  if (r < 0) throw consistency_error("radius_string: printed value outside the enclosure");
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_set_q(t, r.get_mpq_t(), MPFR_RNDU);
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.1RUe", t);
  std::string out(raw);
  mpfr_free_str(raw);
  mpfr_clear(t);
  return out;
}

BigRational parse_decimal(const std::string& input) {
  std::string s;
  s.reserve(input.size());
  for (const char c : input) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (!s.empty() && s.back() == '~') s.pop_back();
  if (s.empty()) throw domain_error("parse_decimal: empty value");

  size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') {
    negative = (s[i] == '-');
    ++i;
  }
  std::string digits;
  long frac_len = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++frac_len;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw domain_error("parse_decimal: no digits in '" + input + "'");
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool exp_neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      exp_neg = (s[i] == '-');
      ++i;
    }
    if (i == s.size()) throw domain_error("parse_decimal: empty exponent in '" + input + "'");
    long e = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) break;
      e = e * 10 + (s[i] - '0');
      if (e > 1000000000L) throw domain_error("parse_decimal: exponent out of range");
    }
    exp10 = exp_neg ? -e : e;
  }
  if (i != s.size()) throw domain_error("parse_decimal: trailing characters in '" + input + "'");

  BigRational value(BigInt(digits, 10));
  const long shift = exp10 - frac_len;
  if (shift > 0) {
    value *= BigRational(int_pow(BigInt(10), static_cast<unsigned long>(shift)));
  } else if (shift < 0) {
    value /= BigRational(int_pow(BigInt(10), static_cast<unsigned long>(-shift)));
  }
  return negative ? BigRational(-value) : value;
}

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

VerifyReport run_verification(const BaseSpec& spec, mpfr_prec_t precision) {
  spec.validate();
  const mpfr_prec_t prec = precision > 0 ? precision : default_precision();
  const int n = spec.n();

  VerifyReport report;
  report.spec = spec;

  const CoefficientSet cs = spec.uniform()
                                ? coefficients(spec.bases.front(), n, prec)
                                : mixed_base_solve(spec, prec);
  report.checks.push_back(
      {"solve_converged", cs.converged, "method " + method_string(cs.method)});
  if (!cs.converged) return report;

  if (spec.uniform()) {
    const auto residuals = power_sum_residuals(cs);
    report.checks.push_back({"power_sums", contains_zero_all(residuals),
                             "max radius " + magnitude_string(max_radius(residuals))});
  } else {
    const auto residuals = mixed_power_residuals(cs);
    report.checks.push_back({"mixed_power_sums", contains_zero_all(residuals),
                             "max radius " + magnitude_string(max_radius(residuals))});
  }

  std::vector<long> distinct = spec.bases;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (const long p : distinct) {
    const auto residuals = cumulants_check(p, 8, prec);
    report.checks.push_back({"cumulant_relation_p" + std::to_string(p),
                             contains_zero_all(residuals),
                             "even cumulant scaling, orders 2..16"});
  }

  const QuadratureFormula qf = enumerate_nodes(cs);
  const auto residuals = exactness_residuals(qf, 2 * n + 2);
  bool exact = true;
  for (int k = 0; k <= 2 * n + 1; ++k) {
    exact = exact && residuals[static_cast<size_t>(k)].contains_zero();
  }
  report.checks.push_back({"exactness_through_degree_2n_plus_1", exact,
                           "max radius " + magnitude_string(max_radius(residuals))});
  const Ball& sharp = residuals.back();
  report.checks.push_back({"sharpness_at_degree_2n_plus_2", !sharp.contains_zero(),
                           "residual " + sharp.brief(3)});

  const RulerReport ruler = ruler_check(qf);
  report.checks.push_back({"ruler", ruler.pass(),
                           ruler.conjectural ? "conjectural for mixed bases" : "certified"});

  if (spec.uniform()) {
    const long p = spec.bases.front();
    report.checks.push_back(
        {"root_bounds", root_bound_check(p, n, prec).all_pass(), "scaled-root brackets"});
    const BoundReport ineq = theorem_inequality_check(cs);
    report.checks.push_back({"theorem_inequality", ineq.all_pass(),
                             "deviation sum " + ineq.sum.brief(3) + " < " +
                                 fraction_string(ineq.sum_bound)});
    const BigRational q = BigRational(p) * p;
    const bool same = poly_via_recurrence(q, n).coeffs == truncated_q_exponential(q, n).coeffs;
    report.checks.push_back({"recurrence_identity", same, "coefficientwise exact"});
  }
  return report;
}

VerifyReport verify_from_file(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  BaseSpec spec(j.at("bases").get<std::vector<long>>());
  spec.validate();
  const int n = spec.n();

  QuadratureFormula qf;
  qf.spec = spec;
  qf.weight = parse_fraction_or_decimal(j.at("weight").get<std::string>());
  qf.degree = 2 * n + 1;
  const auto& values = j.at("nodes");
  const auto& radii = j.at("radius");
  if (values.size() != radii.size()) {
    throw domain_error("verify_from_file: nodes and radius arrays differ in length");
  }
  qf.nodes.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    const BigRational v = parse_decimal(values[i].get<std::string>());
    const BigRational r = parse_decimal(radii[i].get<std::string>());
    if (r < 0) throw domain_error("verify_from_file: negative radius");
    qf.nodes.push_back(Ball::from_endpoints(v - r, v + r));
  }
  if (qf.nodes.size() != static_cast<size_t>(spec.node_count().get_si())) {
    throw domain_error("verify_from_file: node count does not match the bases");
  }

  VerifyReport report;
  report.spec = spec;
  const auto residuals = exactness_residuals(qf, 2 * n + 2);
  bool exact = true;
  for (int k = 0; k <= 2 * n + 1; ++k) {
    exact = exact && residuals[static_cast<size_t>(k)].contains_zero();
  }
  report.checks.push_back({"exactness_through_degree_2n_plus_1", exact,
                           "max radius " + magnitude_string(max_radius(residuals))});
  const Ball& sharp = residuals.back();
  report.checks.push_back({"sharpness_at_degree_2n_plus_2", !sharp.contains_zero(),
                           "residual " + sharp.brief(3)});
  return report;
}

std::string coeffs_json(const CoefficientSet& cs, int digits) {
  const auto a = ball_strings(cs.a, digits);
  ordered_json j;
  j["bases"] = cs.spec.bases;
  j["q"] = q_field(cs.spec);
  j["a"] = a;
  j["r"] = ball_strings(cs.r, digits);
  j["b"] = ball_strings(cs.b, digits);
  j["radius"] = radius_strings(cs.a, a);
  j["method"] = method_string(cs.method);
  j["converged"] = cs.converged;
  return j.dump(2) + "\n";
}

std::string coeffs_csv(const CoefficientSet& cs, int digits, bool header) {
  std::ostringstream out;
  if (header) out << "a,r,b,radius\n";
  for (size_t i = 0; i < cs.a.size(); ++i) {
    const std::string a = decimal_string(cs.a[i], digits);
    out << a << ',' << decimal_string(cs.r[i], digits) << ','
        << decimal_string(cs.b[i], digits) << ',' << radius_string(cs.a[i], a) << '\n';
  }
  return out.str();
}

std::string coeffs_text(const CoefficientSet& cs, int digits) {
  std::ostringstream out;
  out << "bases:";
  for (const long p : cs.spec.bases) out << ' ' << p;
  out << "\nmethod: " << method_string(cs.method)
      << "\nconverged: " << (cs.converged ? "yes" : "no") << "\n";
  for (size_t i = 0; i < cs.a.size(); ++i) {
    const std::string a = decimal_string(cs.a[i], digits);
    out << "j=" << (i + 1) << "  a=" << a << " (+- " << radius_string(cs.a[i], a) << ")"
        << "  r=" << decimal_string(cs.r[i], digits)
        << "  b=" << decimal_string(cs.b[i], digits) << "\n";
  }
  return out.str();
}

std::string nodes_json(const QuadratureFormula& qf, int digits) {
  const auto nodes = ball_strings(qf.nodes, digits);
  ordered_json j;
  j["bases"] = qf.spec.bases;
  j["q"] = q_field(qf.spec);
  j["weight"] = fraction_string(qf.weight);
  j["degree"] = qf.degree;
  j["count"] = qf.count();
  j["nodes"] = nodes;
  j["radius"] = radius_strings(qf.nodes, nodes);
  return j.dump(2) + "\n";
}

std::string nodes_csv(const QuadratureFormula& qf, int digits, bool header) {
  std::ostringstream out;
  if (header) out << "node\n";
  for (const auto& node : qf.nodes) out << decimal_string(node, digits) << '\n';
  return out.str();
}

std::string nodes_text(const QuadratureFormula& qf, int digits) {
  std::ostringstream out;
  out << "bases:";
  for (const long p : qf.spec.bases) out << ' ' << p;
  out << "\ncount: " << qf.count() << "\nweight: " << fraction_string(qf.weight)
      << "\nexact through degree: " << qf.degree << "\n";
  for (const auto& node : qf.nodes) {
    const std::string v = decimal_string(node, digits);
    out << v << " (+- " << radius_string(node, v) << ")\n";
  }
  return out.str();
}

std::string verify_json(const VerifyReport& report) {
  ordered_json j;
  j["bases"] = report.spec.bases;
  j["n"] = report.spec.n();
  ordered_json checks = ordered_json::array();
  for (const auto& check : report.checks) {
    ordered_json c;
    c["name"] = check.name;
    c["pass"] = check.pass;
    c["detail"] = check.detail;
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  j["all_pass"] = report.all_pass();
  return j.dump(2) + "\n";
}

std::string verify_text(const VerifyReport& report) {
  std::ostringstream out;
  for (const auto& check : report.checks) {
    out << (check.pass ? "PASS" : "FAIL") << "  " << check.name;
    if (!check.detail.empty()) out << "  (" << check.detail << ")";
    out << '\n';
  }
  out << (report.all_pass() ? "all checks passed" : "CHECKS FAILED") << '\n';
  return out.str();
}

namespace {

ordered_json cubature_metadata(const QuadratureFormula& qf, int dim) {
  ordered_json meta;
  meta["bases"] = qf.spec.bases;
  meta["q"] = q_field(qf.spec);
  meta["dim"] = dim;
  meta["count"] = int_pow(BigInt(static_cast<long>(qf.count())),
                          static_cast<unsigned long>(dim))
                      .get_str();
  meta["point_weight"] = fraction_string(rat_pow(qf.weight, dim));
  return meta;
}

}  // namespace

void cubature_csv(std::ostream& out, const QuadratureFormula& qf, int dim, int digits,
                  bool header) {
  out << cubature_metadata(qf, dim).dump() << '\n';
  if (header) {
    for (int i = 1; i <= dim; ++i) out << 'x' << i << ',';
    out << "weight\n";
  }
  const std::string weight = fraction_string(rat_pow(qf.weight, dim));
  std::vector<std::string> rendered;
  rendered.reserve(qf.count());
  for (const auto& node : qf.nodes) rendered.push_back(decimal_string(node, digits));
  for_each_cubature_point(qf, dim, [&](const std::vector<const Ball*>& point) {
    for (const Ball* b : point) {
      out << rendered[static_cast<size_t>(b - qf.nodes.data())] << ',';
    }
    out << weight << '\n';
  });
}

void cubature_json(std::ostream& out, const QuadratureFormula& qf, int dim, int digits) {
  ordered_json j = cubature_metadata(qf, dim);
  std::vector<std::string> rendered;
  rendered.reserve(qf.count());
  for (const auto& node : qf.nodes) rendered.push_back(decimal_string(node, digits));
  ordered_json points = ordered_json::array();
  for_each_cubature_point(qf, dim, [&](const std::vector<const Ball*>& point) {
    ordered_json row = ordered_json::array();
    for (const Ball* b : point) {
      row.push_back(rendered[static_cast<size_t>(b - qf.nodes.data())]);
    }
    points.push_back(std::move(row));
  });
  j["points"] = std::move(points);
  out << j.dump(2) << '\n';
}

}  // namespace qmoments
