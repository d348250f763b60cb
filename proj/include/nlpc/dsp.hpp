#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "nlpc/signal.hpp"

namespace nlpc {

// First-order finite differences of a window of L+1 consecutive samples:
// result[k] = window[k+1] - window[k].
std::vector<double> compute_delta(std::span<const double> window);

// Input/target pairs extracted from consecutive samples. Rows run oldest to
// newest; when augmented, each row is the L deltas followed by the L raw
// samples, consuming one extra history sample.
struct TrainingSet {
  Eigen::MatrixXd inputs;   // N x D, D = order or 2*order
  Eigen::VectorXd targets;  // N
  int order = 0;            // raw prediction order L
  bool augmented = false;
};

TrainingSet make_training_set(std::span<const double> samples, int order, bool augmented);
TrainingSet make_training_set(const Signal& signal, int order, bool augmented);

// Linear predictor x^(n) = sum_k coefficients[k] * x(n-1-k): most recent
// sample first. An augmented linear model instead stores one coefficient per
// column of the augmented training row.
struct LpcModel {
  std::vector<double> coefficients;
  int order = 0;
};

// Biased autocorrelation estimate r[0..max_lag] over the whole sequence.
std::vector<double> autocorrelation(std::span<const double> samples, int max_lag);

struct LevinsonResult {
  LpcModel model;
  std::vector<double> reflections;  // one per order step, all |k| <= 1
  double prediction_error = 0.0;    // residual energy at the final order
};

// Solves the Toeplitz normal equations for autocorr[0..L]. Throws
// NumericError when autocorr[0] <= 0 or the sequence is not a valid
// autocorrelation (non-positive residual before the final order).
LevinsonResult levinson_durbin(std::span<const double> autocorr);

struct SegSnrReport {
  std::vector<double> per_frame_db;  // retained frames only
  double mean_db = 0.0;
  double std_db = 0.0;  // population standard deviation
  int frame_len = 0;
};

// Segmental SNR over complete frames. Frames with original energy below
// 1e-10 are skipped; per-frame SNR is clamped to 80 dB.
SegSnrReport segsnr(const Signal& original, const Signal& reconstructed, int frame_len = 160);
SegSnrReport segsnr(std::span<const double> original, std::span<const double> reconstructed,
                    int frame_len = 160);

}  // namespace nlpc
