#include "qmoments/quadrature.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace qmoments {

namespace {

// Trailing-zero depth of tick index i in the mixed radix (p_1 ... p_n), read
// from the least significant (p_n) digit.  The endpoints i = 0 and i = count
// get the full depth n.
int tick_level(long i, const std::vector<long>& bases, long count) {
  const int n = static_cast<int>(bases.size());
  if (i == 0 || i == count) return n + 1;
  int zeros = 0;
  for (int j = n - 1; j >= 0; --j) {
    const long p = bases[static_cast<size_t>(j)];
    if (i % p != 0) break;
    i /= p;
    ++zeros;
  }
  return zeros + 1;
}

}  // namespace

QuadratureFormula enumerate_nodes(const CoefficientSet& cs) {
  cs.spec.validate();
  if (!cs.converged) {
    throw domain_error("enumerate_nodes: requires a converged CoefficientSet");
  }
  const BigInt total = cs.spec.node_count();
  if (total > kNodeCap) {
    throw size_error("enumerate_nodes: node count exceeds the cap of 1e6");
  }
  const long count = total.get_si();
  const int n = cs.spec.n();

  // Scaled supports a_j * X_j for every outcome X_j in {p-1, p-3, ..., 1-p}.
  std::vector<std::vector<Ball>> scaled(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const long p = cs.spec.bases[static_cast<size_t>(j)];
    scaled[static_cast<size_t>(j)].reserve(static_cast<size_t>(p));
    for (long i = 0; i < p; ++i) {
      scaled[static_cast<size_t>(j)].push_back(cs.a[static_cast<size_t>(j)] * (p - 1 - 2 * i));
    }
  }

  QuadratureFormula qf;
  qf.spec = cs.spec;
  qf.weight = BigRational(1) / BigRational(count);
  qf.degree = 2 * n + 1;
  qf.nodes.reserve(static_cast<size_t>(count));
  qf.outcomes_flat.reserve(static_cast<size_t>(count) * static_cast<size_t>(n));

  // Depth-first over the support grid, carrying partial sums.
  std::vector<long> idx(static_cast<size_t>(n), 0);
  std::vector<Ball> partial(static_cast<size_t>(n) + 1);
  partial[0] = Ball(cs.a.front().precision());
  int depth = 0;
  while (depth >= 0) {
    if (depth == n) {
      qf.nodes.push_back(partial[static_cast<size_t>(n)]);
      for (int j = 0; j < n; ++j) {
        const long p = cs.spec.bases[static_cast<size_t>(j)];
        // idx has already advanced past the entry in use at this leaf.
        qf.outcomes_flat.push_back(p - 1 - 2 * (idx[static_cast<size_t>(j)] - 1));
      }
      --depth;
      continue;
    }
    const long p = cs.spec.bases[static_cast<size_t>(depth)];
    if (idx[static_cast<size_t>(depth)] == p) {
      idx[static_cast<size_t>(depth)] = 0;
      --depth;
      continue;
    }
    partial[static_cast<size_t>(depth) + 1] =
        partial[static_cast<size_t>(depth)] +
        scaled[static_cast<size_t>(depth)][static_cast<size_t>(idx[static_cast<size_t>(depth)])];
    ++idx[static_cast<size_t>(depth)];
    ++depth;
  }

  // Sort nodes (and their outcome rows) ascending by lower endpoint, then
  // demand strict separation so the order is certified.
  std::vector<size_t> order(static_cast<size_t>(count));
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&qf](size_t lhs, size_t rhs) {
    return mpfr_less_p(qf.nodes[lhs].lower(), qf.nodes[rhs].lower()) != 0;
  });
  std::vector<Ball> sorted_nodes;
  std::vector<long> sorted_outcomes;
  sorted_nodes.reserve(qf.nodes.size());
  sorted_outcomes.reserve(qf.outcomes_flat.size());
  for (const size_t src : order) {
    sorted_nodes.push_back(std::move(qf.nodes[src]));
    for (int j = 0; j < n; ++j) {
      sorted_outcomes.push_back(qf.outcomes_flat[src * static_cast<size_t>(n) + static_cast<size_t>(j)]);
    }
  }
  qf.nodes = std::move(sorted_nodes);
  qf.outcomes_flat = std::move(sorted_outcomes);

  for (size_t i = 0; i + 1 < qf.nodes.size(); ++i) {
    if (!qf.nodes[i].strictly_less(qf.nodes[i + 1])) {
      throw precision_error("enumerate_nodes: node enclosures overlap; raise the working precision");
    }
  }
  return qf;
}

std::vector<Ball> exactness_residuals(const QuadratureFormula& qf, int max_degree) {
  if (max_degree < 0) throw domain_error("exactness_residuals: max_degree must be >= 0");
  const mpfr_prec_t prec = qf.nodes.front().precision();
  std::vector<Ball> residuals;
  residuals.reserve(static_cast<size_t>(max_degree) + 1);
  std::vector<Ball> power(qf.nodes.size());
  for (auto& pw : power) pw = Ball::exact(1L, prec);
  for (int k = 0; k <= max_degree; ++k) {
    if (k > 0) {
      for (size_t i = 0; i < power.size(); ++i) power[i] = power[i] * qf.nodes[i];
    }
    Ball sum(prec);
    for (const auto& pw : power) sum = sum + pw;
    residuals.push_back(sum * qf.weight - uniform_moment(k));
  }
  return residuals;
}

RulerReport ruler_check(const QuadratureFormula& qf) {
  const int n = qf.spec.n();
  const long count = static_cast<long>(qf.count());

  RulerReport report;
  report.conjectural = !qf.spec.uniform();
  report.entries.reserve(qf.count());

  // Cell widths 2/count; suffix products give each digit's place value.
  std::vector<long> place(static_cast<size_t>(n), 1);
  for (int j = n - 2; j >= 0; --j) {
    place[static_cast<size_t>(j)] =
        place[static_cast<size_t>(j) + 1] * qf.spec.bases[static_cast<size_t>(j) + 1];
  }

  std::vector<bool> seen(static_cast<size_t>(count), false);
  bool bijection = true;
  bool all_inside = true;
  for (size_t i = 0; i < qf.count(); ++i) {
    RulerNodeEntry entry;
    entry.digits.resize(static_cast<size_t>(n));
    long cell = 0;
    for (int j = 0; j < n; ++j) {
      const long x = qf.outcome(i, j);
      entry.digits[static_cast<size_t>(j)] = x;
      const long d = (x + qf.spec.bases[static_cast<size_t>(j)] - 1) / 2;
      cell += d * place[static_cast<size_t>(j)];
    }
    entry.cell = cell;
    const BigRational left = BigRational(2 * cell - count, count);      // -1 + 2k/count
    const BigRational right = BigRational(2 * (cell + 1) - count, count);
    entry.inside = qf.nodes[i].strictly_greater(left) && qf.nodes[i].strictly_less(right);
    if (!entry.inside) all_inside = false;
    if (cell < 0 || cell >= count || seen[static_cast<size_t>(cell)]) {
      bijection = false;
    } else {
      seen[static_cast<size_t>(cell)] = true;
    }
    report.entries.push_back(std::move(entry));
  }
  report.bijection = bijection;
  report.all_inside = all_inside;
  return report;
}

void for_each_cubature_point(const QuadratureFormula& qf, int d,
                             const std::function<void(const std::vector<const Ball*>&)>& fn) {
  if (d < 1) throw domain_error("cubature: dimension must be >= 1");
  const BigInt total = int_pow(BigInt(static_cast<long>(qf.count())), static_cast<unsigned long>(d));
  if (total > kNodeCap) {
    throw size_error("cubature: total point count exceeds the cap of 1e6");
  }
  std::vector<size_t> idx(static_cast<size_t>(d), 0);
  std::vector<const Ball*> point(static_cast<size_t>(d));
  while (true) {
    for (int i = 0; i < d; ++i) point[static_cast<size_t>(i)] = &qf.nodes[idx[static_cast<size_t>(i)]];
    fn(point);
    int axis = d - 1;
    while (axis >= 0 && ++idx[static_cast<size_t>(axis)] == qf.count()) {
      idx[static_cast<size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
}

std::vector<std::vector<Ball>> product_cubature(const QuadratureFormula& qf, int d) {
  std::vector<std::vector<Ball>> grid;
  for_each_cubature_point(qf, d, [&grid](const std::vector<const Ball*>& point) {
    std::vector<Ball> row;
    row.reserve(point.size());
    for (const Ball* b : point) row.push_back(*b);
    grid.push_back(std::move(row));
  });
  return grid;
}

Ball cubature_monomial_residual(const QuadratureFormula& qf, const std::vector<int>& alpha) {
  if (alpha.empty()) throw domain_error("cubature_monomial_residual: empty exponent vector");
  const int d = static_cast<int>(alpha.size());
  const mpfr_prec_t prec = qf.nodes.front().precision();
  Ball sum(prec);
  for_each_cubature_point(qf, d, [&](const std::vector<const Ball*>& point) {
    Ball term = Ball::exact(1L, prec);
    for (int i = 0; i < d; ++i) {
      term = term * point[static_cast<size_t>(i)]->pow(static_cast<unsigned long>(alpha[static_cast<size_t>(i)]));
    }
    sum = sum + term;
  });
  const BigRational weight = rat_pow(qf.weight, d);
  BigRational target(1);
  for (const int a : alpha) target *= uniform_moment(a);
  return sum * weight - target;
}

std::string emit_figure(const QuadratureFormula& qf, FigureFormat format) {
  if (static_cast<long>(qf.count()) > kFigureCap) {
    throw size_error("emit_figure: node count exceeds the figure cap of 1e5");
  }
  const long count = static_cast<long>(qf.count());
  const int n = qf.spec.n();

  if (format == FigureFormat::text) {
    // 257 columns spanning [-1, 1]; tick rows from the deepest level down,
    // then a baseline, then one dot row.
    const long width = 257;
    auto column_of = [](const BigRational& x) {
      // round((x + 1) * 128), exact in rational arithmetic
      const BigRational c = (x + 1) * 128 + BigRational(1, 2);
      BigInt f;
      mpz_fdiv_q(f.get_mpz_t(), mpq_numref(c.get_mpq_t()), mpq_denref(c.get_mpq_t()));
      return f.get_si();
    };
    std::vector<long> tick_col(static_cast<size_t>(count) + 1);
    std::vector<int> level(static_cast<size_t>(count) + 1);
    for (long i = 0; i <= count; ++i) {
      tick_col[static_cast<size_t>(i)] = column_of(BigRational(2 * i - count, count));
      level[static_cast<size_t>(i)] = tick_level(i, qf.spec.bases, count);
    }
    std::ostringstream out;
    for (int row = n + 1; row >= 1; --row) {
      std::string line(static_cast<size_t>(width), ' ');
      for (long i = 0; i <= count; ++i) {
        if (level[static_cast<size_t>(i)] >= row) {
          line[static_cast<size_t>(tick_col[static_cast<size_t>(i)])] = '|';
        }
      }
      out << line << '\n';
    }
    std::string base(static_cast<size_t>(width), '-');
    for (long i = 0; i <= count; ++i) base[static_cast<size_t>(tick_col[static_cast<size_t>(i)])] = '|';
    out << base << '\n';
    std::string dots(static_cast<size_t>(width), ' ');
    for (const auto& node : qf.nodes) {
      dots[static_cast<size_t>(column_of(node.midpoint_rational()))] = '*';
    }
    out << dots << '\n';
    return out.str();
  }

  // SVG: fixed 8 x 1.25 viewBox; baseline at y = 1.2 with ticks rising to a
  // height graded by level; nodes drawn as dots on the baseline.
  std::ostringstream out;
  char buf[160];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-4 0 8 1.25\">\n";
  out << "<line x1=\"-4\" y1=\"1.2\" x2=\"4\" y2=\"1.2\" stroke=\"black\" stroke-width=\"0.015\"/>\n";
  for (long i = 0; i <= count; ++i) {
    const double x = 4.0 * (2.0 * static_cast<double>(i) / static_cast<double>(count) - 1.0);
    const int lvl = tick_level(i, qf.spec.bases, count);
    const double h = 1.1 * static_cast<double>(lvl) / static_cast<double>(n + 1);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.6f\" y1=\"1.2\" x2=\"%.6f\" y2=\"%.6f\" stroke=\"black\" "
                  "stroke-width=\"0.01\"/>\n",
                  x, x, 1.2 - h);
    out << buf;
  }
  for (const auto& node : qf.nodes) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.6f\" cy=\"1.2\" r=\"0.05\"/>\n",
                  4.0 * node.midpoint_double());
    out << buf;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace qmoments
