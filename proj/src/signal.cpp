#include "nlpc/signal.hpp"

#include <algorithm>
#include <cmath>

#include "nlpc/errors.hpp"

namespace nlpc {

Signal normalize(std::span<const double> raw, int sample_rate_hz) {
  if (raw.empty()) throw NumericError("normalize: empty input has no valid gain");
  double peak = 0.0;
  for (double s : raw) peak = std::max(peak, std::abs(s));
  if (peak == 0.0) throw NumericError("normalize: all-zero input has no valid gain");

  Signal out;
  out.samples.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out.samples[i] = raw[i] / peak;
  out.sample_rate_hz = sample_rate_hz;
  out.gain = peak;
  return out;
}

Signal normalize(const Signal& signal) {
  Signal out = normalize(signal.samples, signal.sample_rate_hz);
  out.gain *= signal.gain;
  return out;
}

}  // namespace nlpc
