#pragma once

#include <span>
#include <vector>

namespace nlpc {

// Mono sample sequence in [-1, 1]. `gain` is the factor that restores the
// original amplitude scale (samples * gain); 1 for an unnormalized signal.
struct Signal {
  std::vector<double> samples;
  int sample_rate_hz = 8000;
  double gain = 1.0;

  std::size_t size() const { return samples.size(); }
};

// Peak-normalizes `raw` so that max |sample| == 1 and records the removed
// peak as the gain. Throws NumericError on empty or all-zero input.
Signal normalize(std::span<const double> raw, int sample_rate_hz = 8000);

// Same, re-normalizing an existing signal; gains compose.
Signal normalize(const Signal& signal);

}  // namespace nlpc
