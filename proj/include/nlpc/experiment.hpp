#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nlpc/codec.hpp"
#include "nlpc/predictor.hpp"

namespace nlpc {

// One column of the evaluation grid: a predictor or a committee of several.
struct GridEntry {
  std::string label;
  std::vector<PredictorConfig> members;
};

// Parses a predictor token: members joined by '+', each one of
//   lpc | rbf1[:spread] | rbf2
// Unspecified parameters come from `base`.
GridEntry parse_grid_token(const std::string& token, const PredictorConfig& base);

struct EvalSpec {
  std::vector<std::filesystem::path> corpus;
  std::vector<GridEntry> grid;
  std::vector<bool> delta_options = {false, true};
  std::vector<int> nq_list = {2, 3, 4, 5};
  int frame_len = 160;
  CodecConfig codec;  // nq_bits is overridden per row
  std::uint64_t seed = kDefaultSeed;
};

struct EvalRow {
  std::string sentence;  // file stem, or "corpus" for aggregate rows
  std::string predictor;
  int delta = 0;
  int nq = 0;
  double segsnr_mean_db = 0.0;
  double segsnr_std_db = 0.0;
};

// One row per (sentence, grid entry, delta, nq) plus per-config corpus
// aggregates: mean of the per-sentence means and the population deviation
// across sentences. Rows are sorted so output is order-independent.
std::vector<EvalRow> run_eval(const EvalSpec& spec);

std::string eval_csv(const std::vector<EvalRow>& rows);

enum class SweepAxis { spread, neurons, order };

struct SweepRange {
  double start = 0.0, stop = 0.0, step = 1.0;
};

// Built-in ranges: spread 0.011:0.5:0.01 at 50 neurons and 0.011:1.2:0.01
// at 20 (wider nets tolerate narrower kernels), neurons 5:100:5, order 1:16:1.
SweepRange default_sweep_range(SweepAxis axis, int neurons);

// All values start, start+step, ... not exceeding stop (within 1e-9 slack).
std::vector<double> sweep_axis_values(const SweepRange& range);

struct SweepSpec {
  std::vector<std::filesystem::path> corpus;
  SweepAxis axis = SweepAxis::spread;
  SweepRange range;
  PredictorConfig base;  // the swept parameter is overridden per value
  int frame_len = 160;
  CodecConfig codec;
  std::uint64_t seed = kDefaultSeed;
};

struct SweepRow {
  double axis_value = 0.0;
  double segsnr_mean_db = 0.0;  // mean over corpus sentences
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace nlpc
