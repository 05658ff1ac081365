#pragma once

// Maximum location on a sampled curve with bracketed refinement.

#include <functional>
#include <span>

namespace qwsearch {

struct PeakOptions {
  /// The reported maximum is the earliest grid local maximum reaching this
  /// fraction of the largest sampled value. 1.0 selects the global maximum.
  double first_peak_fraction = 0.5;
};

struct Peak {
  double location = 0.0;
  double value = 0.0;
  bool on_boundary = false;  // no interior peak; value is at a window edge
};

/// Golden-section search for a maximum of `f` on [lo, hi], stopping when the
/// bracket is narrower than `tolerance`.
double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance);

/// Picks the peak on the sampled curve (xs, fs) and refines it on the
/// bracket formed by its neighbouring grid points using `f`.
Peak locate_peak(std::span<const double> xs, std::span<const double> fs,
                 const std::function<double(double)>& f, double tolerance,
                 const PeakOptions& options = {});

}  // namespace qwsearch
