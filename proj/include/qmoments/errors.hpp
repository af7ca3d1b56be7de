#pragma once

#include <stdexcept>
#include <string>

namespace qmoments {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A precondition on the inputs was violated (q <= 1, k < 1, base < 2, ...).
struct domain_error : error {
  using error::error;
};

// A factor or divisor that the mathematics requires to be nonzero vanished
// (e.g. a q-Pochhammer factor 1 - a q^{-j} at a = q^j).
struct pole_error : error {
  using error::error;
};

// An enclosure became too wide to certify the requested conclusion.  Retrying
// at higher working precision is the intended remedy.
struct precision_error : error {
  using error::error;
};

// A certified computation contradicts a property that is supposed to hold
// (sign alternation, root separation, a proven inequality).  Indicates a bug
// or a genuinely false claim, not a numerical shortfall.
struct consistency_error : error {
  using error::error;
};

// A configured size cap (node counts, cubature grids, figure output) would be
// exceeded.  Raised before any large allocation happens.
struct size_error : error {
  using error::error;
};

}  // namespace qmoments
