// Numerical integration building blocks: Gauss-Legendre node tables (computed
// once per order via Newton iteration on the Legendre recurrence) and a
// recursive adaptive Simpson integrator for finite smooth integrands.

#ifndef QCSTAT_QUADRATURE_HPP
#define QCSTAT_QUADRATURE_HPP

#include <cmath>
#include <vector>

namespace qcstat {

struct GLTable {
  std::vector<double> node;    // on (-1, 1)
  std::vector<double> weight;  // sums to 2
};

// Cached table for an n-point rule; thread-safe.
const GLTable& gauss_legendre(int n);

template <typename F>
double gl_integrate(const GLTable& table, F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < table.node.size(); ++i) {
    sum += table.weight[i] * f(mid + half * table.node[i]);
  }
  return sum * half;
}

namespace detail {

template <typename F>
double simpson_recurse(F& f, double a, double b, double fa, double fm,
                       double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Absolute-tolerance adaptive Simpson on [a,b].
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol,
                        int max_depth = 48) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace qcstat

#endif  // QCSTAT_QUADRATURE_HPP
