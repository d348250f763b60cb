#pragma once

#include <cstdint>
#include <vector>

#include "nlpc/bitstream.hpp"
#include "nlpc/predictor.hpp"
#include "nlpc/signal.hpp"

namespace nlpc {

// Jayant-style step multiplier table for the given word length: inner
// magnitude cells shrink the step, outer cells grow it.
std::vector<double> default_multipliers(int nq_bits);

// Adaptive mid-rise scalar quantizer state. The table is indexed by code
// magnitude and rescales the step after every sample.
struct QuantizerState {
  double step = 0.02;
  int nq_bits = 4;
  std::vector<double> multipliers;
  double step_min = 1e-5;
  double step_max = 1.0;
};

struct QuantizeResult {
  std::uint32_t code = 0;
  double value = 0.0;  // reconstructed residual
};

// Quantizes a prediction residual and adapts the step. Total over finite
// reals; NaN is rejected.
QuantizeResult quantize(QuantizerState& state, double e);

// Decoder mirror: reproduces exactly the value and step trajectory the
// encoder produced for this code.
double dequantize(QuantizerState& state, std::uint32_t code);

struct CodecConfig {
  int nq_bits = 4;             // in [2, 5]
  double initial_step = 0.02;
  double step_min = 1e-5;
  double step_max = 1.0;
  std::vector<double> multipliers;  // empty selects default_multipliers(nq_bits)
};

struct EncodeResult {
  Bitstream bitstream;
  Signal reconstruction;  // encoder-side reconstruction, normalized domain
};

// Closed-loop ADPCM: predicts each sample from the reconstructed history,
// quantizes the residual, and tracks the decoder state exactly. The first
// history_needed() samples travel verbatim in the header.
EncodeResult adpcm_encode(const Signal& signal, const Committee& predictor,
                          const CodecConfig& config);
EncodeResult adpcm_encode(const Signal& signal, const Predictor& predictor,
                          const CodecConfig& config);

// Rebuilds the predictor from the header payload and replays the quantizer
// trajectory. Quantizer bounds/multipliers must match the encoder's; the
// defaults are used when `config` leaves them empty.
Signal adpcm_decode(const Bitstream& bits, const CodecConfig& config = {});

}  // namespace nlpc
