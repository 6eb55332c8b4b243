#include "qcstat/quadrature.hpp"

#include <map>
#include <mutex>

#include "qcstat/errors.hpp"

namespace qcstat {

namespace {

// Newton iteration on P_n with the three-term recurrence; nodes are the
// roots, weights 2/((1-x^2) P_n'(x)^2). Symmetric pairs share one solve.
GLTable build_table(int n) {
  GLTable table;
  table.node.resize(n);
  table.weight.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    table.node[i] = -x;
    table.node[n - 1 - i] = x;
    table.weight[i] = w;
    table.weight[n - 1 - i] = w;
  }
  if (n % 2 == 1) table.node[n / 2] = 0.0;
  return table;
}

}  // namespace

const GLTable& gauss_legendre(int n) {
  if (n < 1 || n > 2048) throw domain_error("gauss_legendre: bad order");
  static std::mutex mutex;
  static std::map<int, GLTable> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_table(n)).first;
  return it->second;
}

}  // namespace qcstat
