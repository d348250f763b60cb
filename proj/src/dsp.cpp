#include "nlpc/dsp.hpp"

#include <cmath>
#include <stdexcept>

#include "nlpc/errors.hpp"

namespace nlpc {

std::vector<double> compute_delta(std::span<const double> window) {
  if (window.size() < 2)
    throw std::invalid_argument("compute_delta: window must hold at least 2 samples");
  std::vector<double> out(window.size() - 1);
  for (std::size_t k = 0; k + 1 < window.size(); ++k) out[k] = window[k + 1] - window[k];
  return out;
}

TrainingSet make_training_set(std::span<const double> samples, int order, bool augmented) {
  if (order < 1) throw std::invalid_argument("make_training_set: order must be >= 1");
  const std::size_t min_len = static_cast<std::size_t>(order) + (augmented ? 3 : 2);
  if (samples.size() < min_len)
    throw std::invalid_argument("make_training_set: signal too short for the given order");

  const int L = order;
  const std::size_t rows =
      samples.size() - static_cast<std::size_t>(L) - (augmented ? 1 : 0);

  TrainingSet set;
  set.order = L;
  set.augmented = augmented;
  set.inputs.resize(static_cast<Eigen::Index>(rows), augmented ? 2 * L : L);
  set.targets.resize(static_cast<Eigen::Index>(rows));

  for (std::size_t row = 0; row < rows; ++row) {
    // j is the index of the oldest raw sample in this row's window
    const std::size_t j = row + (augmented ? 1 : 0);
    if (augmented) {
      for (int k = 0; k < L; ++k)
        set.inputs(static_cast<Eigen::Index>(row), k) = samples[j + k] - samples[j + k - 1];
      for (int k = 0; k < L; ++k)
        set.inputs(static_cast<Eigen::Index>(row), L + k) = samples[j + k];
    } else {
      for (int k = 0; k < L; ++k)
        set.inputs(static_cast<Eigen::Index>(row), k) = samples[j + k];
    }
    set.targets(static_cast<Eigen::Index>(row)) = samples[j + L];
  }
  return set;
}

TrainingSet make_training_set(const Signal& signal, int order, bool augmented) {
  return make_training_set(std::span<const double>(signal.samples), order, augmented);
}

std::vector<double> autocorrelation(std::span<const double> samples, int max_lag) {
  if (max_lag < 0) throw std::invalid_argument("autocorrelation: max_lag must be >= 0");
  if (samples.size() <= static_cast<std::size_t>(max_lag))
    throw std::invalid_argument("autocorrelation: sequence shorter than max_lag");
  const double n = static_cast<double>(samples.size());
  std::vector<double> r(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (int k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (std::size_t i = static_cast<std::size_t>(k); i < samples.size(); ++i)
      acc += samples[i] * samples[i - k];
    r[static_cast<std::size_t>(k)] = acc / n;  // biased estimator
  }
  return r;
}

LevinsonResult levinson_durbin(std::span<const double> autocorr) {
  if (autocorr.size() < 2)
    throw std::invalid_argument("levinson_durbin: need autocorrelation lags 0..L with L >= 1");
  const int L = static_cast<int>(autocorr.size()) - 1;
  const double r0 = autocorr[0];
  if (!(r0 > 0.0)) throw NumericError("levinson_durbin: autocorrelation[0] must be positive");

  LevinsonResult res;
  res.model.order = L;
  std::vector<double>& a = res.model.coefficients;
  a.assign(static_cast<std::size_t>(L), 0.0);
  double err = r0;

  std::vector<double> prev(static_cast<std::size_t>(L), 0.0);
  for (int m = 1; m <= L; ++m) {
    if (!(err > 0.0))
      throw NumericError("levinson_durbin: invalid autocorrelation (non-positive residual)");
    double acc = autocorr[static_cast<std::size_t>(m)];
    for (int i = 1; i < m; ++i) acc -= a[static_cast<std::size_t>(i - 1)] * autocorr[static_cast<std::size_t>(m - i)];
    const double k = acc / err;
    if (std::abs(k) > 1.0 + 1e-10)
      throw NumericError("levinson_durbin: invalid autocorrelation (reflection > 1)");
    res.reflections.push_back(k);

    prev = a;
    a[static_cast<std::size_t>(m - 1)] = k;
    for (int i = 1; i < m; ++i)
      a[static_cast<std::size_t>(i - 1)] = prev[static_cast<std::size_t>(i - 1)] - k * prev[static_cast<std::size_t>(m - 1 - i)];
    err *= (1.0 - k * k);
  }

  res.prediction_error = std::max(err, 0.0);
  return res;
}

SegSnrReport segsnr(std::span<const double> original, std::span<const double> reconstructed,
                    int frame_len) {
  if (original.size() != reconstructed.size())
    throw std::invalid_argument("segsnr: length mismatch");
  if (frame_len < 1) throw std::invalid_argument("segsnr: frame_len must be >= 1");

  constexpr double kEnergyFloor = 1e-10;
  constexpr double kMaxDb = 80.0;

  SegSnrReport rep;
  rep.frame_len = frame_len;
  const std::size_t frames = original.size() / static_cast<std::size_t>(frame_len);
  for (std::size_t f = 0; f < frames; ++f) {
    double sig = 0.0, noise = 0.0;
    const std::size_t base = f * static_cast<std::size_t>(frame_len);
    for (std::size_t i = base; i < base + static_cast<std::size_t>(frame_len); ++i) {
      const double e = original[i] - reconstructed[i];
      sig += original[i] * original[i];
      noise += e * e;
    }
    if (sig < kEnergyFloor) continue;
    double db = noise <= 0.0 ? kMaxDb : std::min(10.0 * std::log10(sig / noise), kMaxDb);
    rep.per_frame_db.push_back(db);
  }

  if (rep.per_frame_db.empty()) throw NumericError("segsnr: no frames with usable energy");

  double mean = 0.0;
  for (double v : rep.per_frame_db) mean += v;
  mean /= static_cast<double>(rep.per_frame_db.size());
  double var = 0.0;
  for (double v : rep.per_frame_db) var += (v - mean) * (v - mean);
  var /= static_cast<double>(rep.per_frame_db.size());
  rep.mean_db = mean;
  rep.std_db = std::sqrt(var);
  return rep;
}

SegSnrReport segsnr(const Signal& original, const Signal& reconstructed, int frame_len) {
  return segsnr(std::span<const double>(original.samples),
                std::span<const double>(reconstructed.samples), frame_len);
}

}  // namespace nlpc
