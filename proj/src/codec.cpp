#include "nlpc/codec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlpc/errors.hpp"

namespace nlpc {

namespace {

double reconstruct_level(std::uint32_t magnitude, bool negative, double step) {
  const double v = (static_cast<double>(magnitude) + 0.5) * step;
  return negative ? -v : v;
}

void adapt_step(QuantizerState& st, std::uint32_t magnitude) {
  st.step = std::clamp(st.step * st.multipliers[magnitude], st.step_min, st.step_max);
}

QuantizerState make_state(const CodecConfig& config, int nq_bits, double initial_step) {
  QuantizerState st;
  st.step = initial_step;
  st.nq_bits = nq_bits;
  st.multipliers = config.multipliers.empty() ? default_multipliers(nq_bits) : config.multipliers;
  st.step_min = config.step_min;
  st.step_max = config.step_max;
  if (st.multipliers.size() != (1u << (nq_bits - 1)))
    throw std::invalid_argument("codec: multiplier table must have 2^(nq_bits-1) entries");
  if (!(st.step_min > 0.0) || st.step_min > st.step_max)
    throw std::invalid_argument("codec: need 0 < step_min <= step_max");
  if (st.step < st.step_min || st.step > st.step_max)
    throw std::invalid_argument("codec: initial step outside [step_min, step_max]");
  return st;
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

std::vector<double> default_multipliers(int nq_bits) {
  switch (nq_bits) {
    case 2:
      return {0.8, 1.6};
    case 3:
      return {0.9, 0.9, 1.25, 1.75};
    case 4:
      return {0.9, 0.9, 0.9, 0.9, 1.2, 1.6, 2.0, 2.4};
    case 5:
      // Near-log-linear profile; a flat 0.9 over the ten inner cells parks
      // the step equilibrium in overload and caps the 5-bit SNR.
      return {0.90, 0.92, 0.94, 0.96, 0.98, 1.02, 1.06, 1.10,
              1.15, 1.20, 1.30, 1.45, 1.65, 1.95, 2.35, 2.80};
    default:
      throw std::invalid_argument("default_multipliers: nq_bits must be in [2, 5]");
  }
}

QuantizeResult quantize(QuantizerState& st, double e) {
  if (std::isnan(e)) throw std::invalid_argument("quantize: NaN residual");
  const std::uint32_t max_m = (1u << (st.nq_bits - 1)) - 1;
  const bool neg = e < 0.0;
  const double cells = std::floor(std::abs(e) / st.step);
  const std::uint32_t m =
      cells >= static_cast<double>(max_m) ? max_m : static_cast<std::uint32_t>(cells);

  QuantizeResult res;
  res.code = (static_cast<std::uint32_t>(neg) << (st.nq_bits - 1)) | m;
  res.value = reconstruct_level(m, neg, st.step);
  adapt_step(st, m);
  return res;
}

double dequantize(QuantizerState& st, std::uint32_t code) {
  if (code >= (1u << st.nq_bits)) throw std::invalid_argument("dequantize: code out of range");
  const std::uint32_t max_m = (1u << (st.nq_bits - 1)) - 1;
  const std::uint32_t m = code & max_m;
  const bool neg = (code >> (st.nq_bits - 1)) != 0;
  const double value = reconstruct_level(m, neg, st.step);
  adapt_step(st, m);
  return value;
}

EncodeResult adpcm_encode(const Signal& signal, const Committee& predictor,
                          const CodecConfig& config) {
  if (config.nq_bits < 2 || config.nq_bits > 5)
    throw std::invalid_argument("adpcm_encode: nq_bits must be in [2, 5]");
  const int history = predictor.history_needed();
  const std::size_t n = signal.samples.size();
  if (n < static_cast<std::size_t>(history))
    throw std::invalid_argument("adpcm_encode: signal shorter than the predictor history");
  for (double s : signal.samples)
    if (std::abs(s) > 1.0 + 1e-12)
      throw std::invalid_argument("adpcm_encode: signal is not normalized");

  QuantizerState st = make_state(config, config.nq_bits, config.initial_step);

  EncodeResult out;
  Signal& recon = out.reconstruction;
  recon.sample_rate_hz = signal.sample_rate_hz;
  recon.gain = signal.gain;
  recon.samples.assign(signal.samples.begin(), signal.samples.begin() + history);
  recon.samples.reserve(n);
  out.bitstream.codes.reserve(n - static_cast<std::size_t>(history));

  for (std::size_t i = static_cast<std::size_t>(history); i < n; ++i) {
    const double xhat = predictor.predict(recon.samples);
    const double e = signal.samples[i] - xhat;
    const QuantizeResult q = quantize(st, e);
    recon.samples.push_back(clamp_unit(xhat + q.value));
    out.bitstream.codes.push_back(q.code);
  }

  CodecHeader& h = out.bitstream.header;
  h.nq_bits = config.nq_bits;
  h.sample_rate_hz = signal.sample_rate_hz;
  h.prediction_order = history;
  h.num_samples = n;
  h.gain = signal.gain;
  h.initial_step = config.initial_step;
  h.seed_samples.assign(signal.samples.begin(), signal.samples.begin() + history);
  h.predictor_payload = serialize_committee(predictor);
  return out;
}

EncodeResult adpcm_encode(const Signal& signal, const Predictor& predictor,
                          const CodecConfig& config) {
  Committee c;
  c.members.push_back(predictor);
  return adpcm_encode(signal, c, config);
}

Signal adpcm_decode(const Bitstream& bits, const CodecConfig& config) {
  const CodecHeader& h = bits.header;
  if (h.nq_bits < 2 || h.nq_bits > 5) throw FormatError("adpcm_decode: nq_bits out of range");
  if (bits.codes.size() != h.num_samples - static_cast<std::uint64_t>(h.prediction_order))
    throw FormatError("adpcm_decode: code count does not match header");

  Committee predictor = deserialize_committee(h.predictor_payload);
  if (predictor.history_needed() != h.prediction_order)
    throw FormatError("adpcm_decode: corrupt payload (history does not match header order)");

  QuantizerState st = make_state(config, h.nq_bits, h.initial_step);

  Signal out;
  out.sample_rate_hz = h.sample_rate_hz;
  out.gain = h.gain;
  out.samples = h.seed_samples;
  out.samples.reserve(static_cast<std::size_t>(h.num_samples));

  for (std::uint32_t code : bits.codes) {
    const double xhat = predictor.predict(out.samples);
    const double eq = dequantize(st, code);
    out.samples.push_back(clamp_unit(xhat + eq));
  }
  return out;
}

}  // namespace nlpc
