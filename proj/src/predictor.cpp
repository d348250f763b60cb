#include "nlpc/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlpc/detail/bytes.hpp"
#include "nlpc/errors.hpp"

namespace nlpc {

namespace {

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

// Input vector in training-row order: the last L samples (oldest first),
// preceded by the L deltas over the last L+1 samples when augmented.
std::vector<double> assemble_input(std::span<const double> history, int order, bool augmented) {
  std::vector<double> x;
  if (augmented) {
    x.resize(2 * static_cast<std::size_t>(order));
    const std::size_t base = history.size() - static_cast<std::size_t>(order) - 1;
    for (int k = 0; k < order; ++k)
      x[static_cast<std::size_t>(k)] = history[base + k + 1] - history[base + k];
    for (int k = 0; k < order; ++k)
      x[static_cast<std::size_t>(order + k)] = history[base + k + 1];
  } else {
    x.resize(static_cast<std::size_t>(order));
    const std::size_t base = history.size() - static_cast<std::size_t>(order);
    for (int k = 0; k < order; ++k) x[static_cast<std::size_t>(k)] = history[base + k];
  }
  return x;
}

}  // namespace

double Predictor::predict(std::span<const double> history) const {
  if (history.size() < static_cast<std::size_t>(history_needed()))
    throw std::invalid_argument("predict: insufficient history");

  double y = 0.0;
  if (const auto* lpc = std::get_if<LpcModel>(&model)) {
    if (!augmented) {
      if (lpc->coefficients.size() != static_cast<std::size_t>(order))
        throw std::invalid_argument("predict: model input dimension mismatch");
      // Inner product with the most recent samples, most recent first.
      const std::size_t end = history.size();
      for (int k = 0; k < order; ++k)
        y += lpc->coefficients[static_cast<std::size_t>(k)] * history[end - 1 - k];
    } else {
      auto x = assemble_input(history, order, true);
      if (lpc->coefficients.size() != x.size())
        throw std::invalid_argument("predict: model input dimension mismatch");
      for (std::size_t k = 0; k < x.size(); ++k) y += lpc->coefficients[k] * x[k];
    }
  } else {
    auto x = assemble_input(history, order, augmented);
    y = rbf_forward(std::get<RbfNetwork>(model), x);
  }
  return clamp_unit(y);
}

int Committee::history_needed() const {
  if (members.empty()) throw std::invalid_argument("committee: no members");
  int need = 0;
  for (const auto& m : members) need = std::max(need, m.history_needed());
  return need;
}

double Committee::predict(std::span<const double> history) const {
  if (members.empty()) throw std::invalid_argument("committee: no members");
  double acc = 0.0;
  for (const auto& m : members) acc += m.predict(history);
  return clamp_unit(acc / static_cast<double>(members.size()));
}

Predictor fit_predictor(const PredictorConfig& config, const Signal& signal, std::uint64_t seed) {
  if (config.order < 1) throw std::invalid_argument("fit_predictor: order must be >= 1");

  Predictor p;
  p.order = config.order;
  p.augmented = config.augmented;

  switch (config.kind) {
    case PredictorKind::lpc: {
      if (!config.augmented) {
        auto r = autocorrelation(signal.samples, config.order);
        p.model = levinson_durbin(r).model;
      } else {
        // Deltas are linear in the raw window, so the augmented linear model
        // is fit directly by least squares on the training rows.
        TrainingSet set = make_training_set(signal, config.order, true);
        Eigen::VectorXd w = solve_output_layer(set.inputs, set.targets);
        LpcModel lpc;
        lpc.order = config.order;
        lpc.coefficients.assign(w.data(), w.data() + w.size());
        p.model = lpc;
      }
      break;
    }
    case PredictorKind::rbf1: {
      TrainingSet set = make_training_set(signal, config.order, config.augmented);
      Rbf1Options opts;
      opts.max_neurons = config.neurons;
      opts.spread = config.spread;
      opts.goal_mse = config.goal_mse;
      p.model = train_rbf1(set, opts).network;
      break;
    }
    case PredictorKind::rbf2: {
      TrainingSet set = make_training_set(signal, config.order, config.augmented);
      Rbf2Options opts;
      opts.neurons = config.neurons;
      opts.em_epochs = config.em_epochs;
      opts.kmeans_iters = config.kmeans_iters;
      opts.output_bias = config.output_bias;
      p.model = train_rbf2(set, opts, seed);
      break;
    }
  }
  return p;
}

Committee fit_committee(std::span<const PredictorConfig> configs, const Signal& signal,
                        std::uint64_t seed) {
  if (configs.empty()) throw std::invalid_argument("fit_committee: no member configs");
  Committee c;
  c.members.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i)
    c.members.push_back(fit_predictor(configs[i], signal, seed + i));
  return c;
}

std::vector<std::uint8_t> serialize_committee(const Committee& committee) {
  if (committee.members.empty() || committee.members.size() > 255)
    throw std::invalid_argument("serialize_committee: need 1..255 members");
  std::vector<std::uint8_t> out;
  detail::put_u8(out, static_cast<std::uint8_t>(committee.members.size()));
  for (const auto& m : committee.members) {
    detail::put_u8(out, m.augmented ? 1 : 0);
    detail::put_u16(out, static_cast<std::uint16_t>(m.order));
    detail::append_model(out, m.model);
  }
  return out;
}

Committee deserialize_committee(std::span<const std::uint8_t> data) {
  detail::ByteReader r(data);
  const std::uint8_t count = r.u8();
  if (count == 0) throw FormatError("committee payload with zero members");
  Committee c;
  c.members.reserve(count);
  for (int i = 0; i < count; ++i) {
    Predictor p;
    p.augmented = r.u8() != 0;
    p.order = r.u16();
    if (p.order < 1) throw FormatError("committee member with invalid order");
    p.model = detail::read_model(r);
    c.members.push_back(std::move(p));
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after committee payload");
  return c;
}

}  // namespace nlpc
