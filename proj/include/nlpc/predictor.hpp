#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nlpc/dsp.hpp"
#include "nlpc/model_io.hpp"
#include "nlpc/rbf.hpp"
#include "nlpc/signal.hpp"

namespace nlpc {

enum class PredictorKind { lpc, rbf1, rbf2 };

// A fitted sample predictor. `order` is the raw history length L; with delta
// augmentation the model consumes 2L inputs assembled from L+1 samples.
// Predictions are clamped to [-1, 1].
struct Predictor {
  Model model;
  int order = 10;
  bool augmented = false;

  int history_needed() const { return order + (augmented ? 1 : 0); }
  bool is_lpc() const { return std::holds_alternative<LpcModel>(model); }
  double predict(std::span<const double> history) const;
};

// Combination of predictors sharing one reconstruction history; the fused
// output is the arithmetic mean of the member predictions.
struct Committee {
  std::vector<Predictor> members;

  int history_needed() const;
  double predict(std::span<const double> history) const;
};

struct PredictorConfig {
  PredictorKind kind = PredictorKind::lpc;
  int order = 10;          // L
  bool augmented = false;  // delta parameters
  int neurons = 20;        // S, rbf only
  double spread = 0.22;    // rbf1 only
  double goal_mse = 0.0;   // rbf1 only
  int em_epochs = 10;      // rbf2 only
  int kmeans_iters = 5;    // rbf2 only
  bool output_bias = true; // rbf2 only
};

// Fits a predictor on the clean signal over its full duration. LPC uses the
// Levinson recursion on the biased autocorrelation (a plain least-squares
// fit when augmented); RBF variants train on the extracted training set.
Predictor fit_predictor(const PredictorConfig& config, const Signal& signal,
                        std::uint64_t seed = kDefaultSeed);

// Fits each member independently; member i uses seed + i.
Committee fit_committee(std::span<const PredictorConfig> configs, const Signal& signal,
                        std::uint64_t seed = kDefaultSeed);

// Committee wire format: member count, then per member the augmented flag,
// the raw order as u16, and the model bytes.
std::vector<std::uint8_t> serialize_committee(const Committee& committee);
Committee deserialize_committee(std::span<const std::uint8_t> data);

}  // namespace nlpc
