#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qmoments/ball.hpp"
#include "qmoments/momentmatch.hpp"

namespace qmoments {

// Size caps (checked before allocating anything large).
inline constexpr long kNodeCap = 1000000;    // enumeration / cubature points
inline constexpr long kFigureCap = 100000;   // nodes in a figure

// The equal-weight quadrature rule given by all values of sum_j a_j X_j.
// Nodes are sorted ascending with certified pairwise separation.
// outcomes_flat keeps, for each sorted node, the support values X_1..X_n that
// produced it (row-major), which the ruler check needs.
struct QuadratureFormula {
  BaseSpec spec;
  std::vector<Ball> nodes;
  BigRational weight;  // 1 / count
  int degree = 0;      // 2n + 1
  std::vector<long> outcomes_flat;

  size_t count() const { return nodes.size(); }
  long outcome(size_t node_index, int j) const {
    return outcomes_flat[node_index * static_cast<size_t>(spec.n()) + static_cast<size_t>(j)];
  }
};

struct RulerNodeEntry {
  std::vector<long> digits;  // the node's X_j support values
  long cell = 0;             // predicted subinterval index
  bool inside = false;       // node ball strictly inside its open subinterval
};

struct RulerReport {
  std::vector<RulerNodeEntry> entries;
  bool bijection = false;    // cell indices are a permutation of 0..count-1
  bool all_inside = false;
  bool conjectural = false;  // set for mixed bases (conjectured reading)

  bool pass() const { return bijection && all_inside; }
};

// All prod p_j support combinations of sum a_j X_j, sorted ascending.
// Requires a converged CoefficientSet; throws precision_error if two node
// enclosures overlap (ordering cannot be certified), size_error over the cap.
QuadratureFormula enumerate_nodes(const CoefficientSet& cs);

// residual_k = weight * sum node^k - uniform_moment(k), k = 0..max_degree.
std::vector<Ball> exactness_residuals(const QuadratureFormula& qf, int max_degree);

// Checks that node i sits strictly inside the open subinterval indexed by
// k_i = sum_j d_j prod_{m>j} p_m with digits d_j = (X_j + p_j - 1)/2, and
// that the k_i form a permutation.  Mixed bases use the mixed-radix cell
// reading and are flagged conjectural.
RulerReport ruler_check(const QuadratureFormula& qf);

// Full tensor grid of count^d points (weight 1/count^d).  The callback form
// streams points without materializing the grid; the vector form materializes
// and is subject to the same total-point cap.
void for_each_cubature_point(const QuadratureFormula& qf, int d,
                             const std::function<void(const std::vector<const Ball*>&)>& fn);
std::vector<std::vector<Ball>> product_cubature(const QuadratureFormula& qf, int d);

// Residual of the cubature rule on the monomial prod_i x_i^{alpha_i} against
// prod_i uniform_moment(alpha_i), evaluated by direct enumeration.
Ball cubature_monomial_residual(const QuadratureFormula& qf, const std::vector<int>& alpha);

enum class FigureFormat { text, svg };

// Deterministic ruler figure: baseline [-1,1], graded ticks at multiples of
// the cell width (height graded by trailing-zero depth in the mixed-radix
// expansion of the tick index), one dot per node.
std::string emit_figure(const QuadratureFormula& qf, FigureFormat format);

}  // namespace qmoments
