#include "nlpc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "nlpc/dsp.hpp"
#include "nlpc/errors.hpp"
#include "nlpc/wav.hpp"

namespace nlpc {

namespace {

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string format_axis(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct SentenceData {
  std::string label;
  Signal normalized;
};

std::vector<SentenceData> load_corpus(const std::vector<std::filesystem::path>& paths) {
  if (paths.empty()) throw std::invalid_argument("experiment: empty corpus");
  std::vector<SentenceData> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    SentenceData s;
    s.label = p.stem().string();
    s.normalized = normalize(load_wav(p));
    out.push_back(std::move(s));
  }
  return out;
}

double encode_segsnr(const Signal& sentence, const Committee& predictor, CodecConfig codec,
                     int nq, int frame_len) {
  codec.nq_bits = nq;
  EncodeResult enc = adpcm_encode(sentence, predictor, codec);
  return segsnr(sentence, enc.reconstruction, frame_len).mean_db;
}

}  // namespace

GridEntry parse_grid_token(const std::string& token, const PredictorConfig& base) {
  if (token.empty()) throw std::invalid_argument("empty predictor token");
  GridEntry entry;
  entry.label = token;
  std::size_t pos = 0;
  while (pos != std::string::npos) {
    std::size_t plus = token.find('+', pos);
    std::string part = token.substr(pos, plus == std::string::npos ? plus : plus - pos);
    pos = plus == std::string::npos ? plus : plus + 1;

    PredictorConfig cfg = base;
    std::string name = part;
    const std::size_t colon = part.find(':');
    if (colon != std::string::npos) {
      name = part.substr(0, colon);
      cfg.spread = std::stod(part.substr(colon + 1));
    }
    if (name == "lpc")
      cfg.kind = PredictorKind::lpc;
    else if (name == "rbf1")
      cfg.kind = PredictorKind::rbf1;
    else if (name == "rbf2")
      cfg.kind = PredictorKind::rbf2;
    else
      throw std::invalid_argument("unknown predictor '" + name + "' in token '" + token + "'");
    if (colon != std::string::npos && name != "rbf1")
      throw std::invalid_argument("only rbf1 takes a :spread suffix (token '" + token + "')");
    entry.members.push_back(cfg);
  }
  return entry;
}

std::vector<EvalRow> run_eval(const EvalSpec& spec) {
  if (spec.grid.empty()) throw std::invalid_argument("run_eval: empty grid");
  if (spec.nq_list.empty()) throw std::invalid_argument("run_eval: empty nq list");
  if (spec.delta_options.empty()) throw std::invalid_argument("run_eval: empty delta options");

  auto corpus = load_corpus(spec.corpus);
  std::vector<EvalRow> rows;

  for (const auto& sentence : corpus) {
    for (const auto& entry : spec.grid) {
      for (bool delta : spec.delta_options) {
        std::vector<PredictorConfig> members = entry.members;
        for (auto& m : members) m.augmented = delta;
        Committee predictor = fit_committee(members, sentence.normalized, spec.seed);
        for (int nq : spec.nq_list) {
          CodecConfig codec = spec.codec;
          codec.nq_bits = nq;
          EncodeResult enc = adpcm_encode(sentence.normalized, predictor, codec);
          SegSnrReport rep = segsnr(sentence.normalized, enc.reconstruction, spec.frame_len);
          rows.push_back({sentence.label, entry.label, delta ? 1 : 0, nq, rep.mean_db,
                          rep.std_db});
        }
      }
    }
  }

  std::sort(rows.begin(), rows.end(), [](const EvalRow& a, const EvalRow& b) {
    return std::tie(a.sentence, a.predictor, a.delta, a.nq) <
           std::tie(b.sentence, b.predictor, b.delta, b.nq);
  });

  // Corpus aggregates: mean of per-sentence means, deviation across sentences.
  std::map<std::tuple<std::string, int, int>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{r.predictor, r.delta, r.nq}].push_back(r.segsnr_mean_db);
  std::vector<EvalRow> aggregates;
  for (const auto& [key, means] : groups) {
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(means.size());
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= static_cast<double>(means.size());
    aggregates.push_back({"corpus", std::get<0>(key), std::get<1>(key), std::get<2>(key), mean,
                          std::sqrt(var)});
  }
  rows.insert(rows.end(), aggregates.begin(), aggregates.end());
  return rows;
}

std::string eval_csv(const std::vector<EvalRow>& rows) {
  std::string out = "sentence,predictor,delta,nq,segsnr_mean_db,segsnr_std_db\n";
  for (const auto& r : rows) {
    out += r.sentence + ',' + r.predictor + ',' + std::to_string(r.delta) + ',' +
           std::to_string(r.nq) + ',' + format_fixed(r.segsnr_mean_db) + ',' +
           format_fixed(r.segsnr_std_db) + '\n';
  }
  return out;
}

SweepRange default_sweep_range(SweepAxis axis, int neurons) {
  switch (axis) {
    case SweepAxis::spread:
      return {0.011, neurons == 20 ? 1.2 : 0.5, 0.01};
    case SweepAxis::neurons:
      return {5, 100, 5};
    case SweepAxis::order:
    default:
      return {1, 16, 1};
  }
}

std::vector<double> sweep_axis_values(const SweepRange& range) {
  if (!(range.step > 0.0)) throw std::invalid_argument("sweep range: step must be positive");
  if (range.stop < range.start) throw std::invalid_argument("sweep range: empty range");
  std::vector<double> values;
  for (int i = 0;; ++i) {
    const double v = range.start + i * range.step;
    if (v > range.stop + 1e-9) break;
    values.push_back(v);
  }
  return values;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  auto corpus = load_corpus(spec.corpus);
  auto values = sweep_axis_values(spec.range);

  std::vector<SweepRow> rows;
  for (double v : values) {
    PredictorConfig cfg = spec.base;
    switch (spec.axis) {
      case SweepAxis::spread:
        cfg.kind = PredictorKind::rbf1;
        cfg.spread = v;
        break;
      case SweepAxis::neurons:
        if (cfg.kind == PredictorKind::lpc) cfg.kind = PredictorKind::rbf1;
        cfg.neurons = static_cast<int>(std::lround(v));
        break;
      case SweepAxis::order:
        cfg.kind = PredictorKind::lpc;
        cfg.order = static_cast<int>(std::lround(v));
        break;
    }

    double acc = 0.0;
    for (const auto& sentence : corpus) {
      Predictor p = fit_predictor(cfg, sentence.normalized, spec.seed);
      acc += encode_segsnr(sentence.normalized, Committee{{p}}, spec.codec, spec.codec.nq_bits,
                           spec.frame_len);
    }
    rows.push_back({v, acc / static_cast<double>(corpus.size())});
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "axis_value,segsnr_mean_db\n";
  for (const auto& r : rows)
    out += format_axis(r.axis_value) + ',' + format_fixed(r.segsnr_mean_db) + '\n';
  return out;
}

}  // namespace nlpc
