#include <cmath>

#include "aeromanip/model.hpp"
#include "aeromanip/workspace.hpp"

namespace aeromanip {

SizingResult size_arm(double body_length, double ratio, double target_radius,
                      const SizingOptions& opts) {
  if (!(body_length > 0.0) || !(ratio > 0.0)) {
    throw Error("size_arm: body length and ratio must be positive");
  }
  const double total = body_length / ratio;
  if (target_radius > total) {
    throw Error("size_arm: target radius " + format_number(target_radius) +
                " m exceeds the total arm length " + format_number(total) + " m");
  }
  SizingResult res;
  res.total_length = total;
  res.lengths << 0.0, total / 4, total / 4, total / 4, total / 4;

  for (int it = 0;; ++it) {
    res.iterations = it;
    res.coverage = hemisphere_coverage(make_arm(res.lengths, 1.0), target_radius, opts.grid_points);
    if (res.coverage >= 1.0) return res;
    if (it >= opts.max_iterations) break;

    // Shorten links 1-3 (respecting minimums) and give the length to links 4-5.
    Vec5 next = res.lengths;
    double moved = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double take = std::min(opts.step, next[i] - opts.min_lengths[i]);
      if (take > 0.0) {
        next[i] -= take;
        moved += take;
      }
    }
    if (moved <= 0.0) break;
    next[3] += moved / 2;
    next[4] += moved / 2;
    res.lengths = next;
  }
  throw ConvergenceError("size_arm did not reach full coverage after " +
                         std::to_string(res.iterations) + " iterations (last coverage " +
                         format_number(res.coverage) + ")");
}

}  // namespace aeromanip
