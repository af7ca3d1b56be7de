#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qmoments/ball.hpp"
#include "qmoments/momentmatch.hpp"
#include "qmoments/quadrature.hpp"
#include "qmoments/rational.hpp"

namespace qmoments {

// Correctly rounded decimal rendering of an enclosure.  At most `digits`
// significant digits are printed, and never more than the enclosure width
// certifies: every point of the ball must round to the printed string.  When
// the full request cannot be certified the longest certified prefix is
// printed with a trailing "~"; "0~" means not even the leading digit is
// certain.  Scientific notation, deterministic bytes.
std::string decimal_string(const Ball& x, int digits);

// Upper bound on |true value - parse_decimal(printed)|, rendered with two
// significant digits, rounded up.  Combined with the printed value this
// always encloses the ball, including any truncation absorbed by "~".
std::string radius_string(const Ball& x, const std::string& printed);

// One verification check: a short stable name, a verdict, and a human detail.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  BaseSpec spec;
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

// Runs the full battery for a base specification: residual checks (power sums
// or their mixed-base analogue), cumulant relations per base, quadrature
// exactness through degree 2n+1 with sharpness at 2n+2, the ruler property,
// and -- for uniform bases -- root bounds, the coefficient deviation
// inequality, and the recurrence identity.
VerifyReport run_verification(const BaseSpec& spec, mpfr_prec_t precision = 0);

// Re-ingests a JSON document produced by nodes_json and re-derives the
// exactness and sharpness verdicts from the printed enclosures alone.
VerifyReport verify_from_file(const std::string& json_text);

// Serializers.  JSON objects use a frozen field order; CSV has no header row
// unless requested; all formats are deterministic byte-for-byte.
std::string coeffs_json(const CoefficientSet& cs, int digits);
std::string coeffs_csv(const CoefficientSet& cs, int digits, bool header);
std::string coeffs_text(const CoefficientSet& cs, int digits);

std::string nodes_json(const QuadratureFormula& qf, int digits);
std::string nodes_csv(const QuadratureFormula& qf, int digits, bool header);
std::string nodes_text(const QuadratureFormula& qf, int digits);

std::string verify_json(const VerifyReport& report);
std::string verify_text(const VerifyReport& report);

// Cubature grids can be large, so these stream.  CSV output starts with a
// single-line JSON metadata object, then one row per point: d coordinates
// followed by the point weight.  JSON output is a single document.
void cubature_csv(std::ostream& out, const QuadratureFormula& qf, int dim, int digits,
                  bool header);
void cubature_json(std::ostream& out, const QuadratureFormula& qf, int dim, int digits);

}  // namespace qmoments
