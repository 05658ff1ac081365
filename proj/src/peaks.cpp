#include "qwsearch/peaks.hpp"

#include <algorithm>
#include <cmath>

#include "qwsearch/error.hpp"

namespace qwsearch {

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance) {
  require(lo <= hi, ErrorCode::InvalidArgs, "golden section bracket is reversed");
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
    // Bracket no longer shrinks in floating point.
    if (c >= d) break;
  }
  return fc >= fd ? c : d;
}

Peak locate_peak(std::span<const double> xs, std::span<const double> fs,
                 const std::function<double(double)>& f, double tolerance,
                 const PeakOptions& options) {
  require(xs.size() == fs.size() && !xs.empty(), ErrorCode::InvalidArgs,
          "peak search needs a non-empty sampled curve");
  const std::size_t last = xs.size() - 1;
  const double largest = *std::max_element(fs.begin(), fs.end());
  const double threshold = options.first_peak_fraction * largest;

  for (std::size_t i = 1; i < last; ++i) {
    if (fs[i] > fs[i - 1] && fs[i] >= fs[i + 1] && fs[i] >= threshold) {
      const double x = golden_section_maximize(f, xs[i - 1], xs[i + 1], tolerance);
      const double v = f(x);
      if (v >= fs[i]) return Peak{x, v, false};
      return Peak{xs[i], fs[i], false};
    }
  }

  const auto best = static_cast<std::size_t>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  return Peak{xs[best], fs[best], best == 0 || best == last};
}

}  // namespace qwsearch
