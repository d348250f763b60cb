// Acceptance suite: exercises every release criterion against the synthetic
// desk corpus and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nlpc/codec.hpp"
#include "nlpc/corpus.hpp"
#include "nlpc/dsp.hpp"
#include "nlpc/experiment.hpp"
#include "nlpc/rbf.hpp"
#include "nlpc/wav.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace nlpc;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure : std::runtime_error {
  explicit Failure(const std::string& what) : std::runtime_error(what) {}
};

void expect(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Fixture {
  fs::path dir;
  std::vector<Signal> corpus;  // normalized desk sentences
  fs::path manifest;           // full desk corpus
  fs::path manifest_one;       // first sentence only
};

Fixture g;

void setup() {
  g.dir = fs::temp_directory_path() / "nlpc_acceptance";
  fs::create_directories(g.dir);
  auto wavs = synth_desk_corpus(g.dir / "corpus", kDefaultSeed);
  g.manifest = g.dir / "corpus" / "manifest.txt";
  for (const auto& p : wavs) g.corpus.push_back(normalize(load_wav(p)));

  g.manifest_one = g.dir / "corpus" / "manifest_one.txt";
  std::ofstream m(g.manifest_one, std::ios::trunc);
  m << wavs.front().filename().string() << "\n";
}

double mean_segsnr(const Signal& sentence, const Committee& predictor, int nq) {
  CodecConfig codec;
  codec.nq_bits = nq;
  EncodeResult enc = adpcm_encode(sentence, predictor, codec);
  return segsnr(sentence, enc.reconstruction).mean_db;
}

// --- criteria -------------------------------------------------------------

void round_trip_exactness() {
  const auto t0 = Clock::now();

  struct Combo {
    int kind;  // 0 lpc, 1 rbf1, 2 rbf2, 3 committee rbf1+rbf2
    int nq;
    bool delta;
  };
  std::vector<Combo> combos;
  for (int kind = 0; kind < 4; ++kind)
    for (int nq = 2; nq <= 5; ++nq)
      for (int delta = 0; delta < 2; ++delta) combos.push_back({kind, nq, delta != 0});
  std::mt19937_64 rng(0xACCEu);
  std::shuffle(combos.begin(), combos.end(), rng);
  combos.resize(20);

  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    const Combo& combo = combos[ci];
    std::vector<PredictorConfig> members;
    PredictorConfig base;
    base.order = 10;
    base.augmented = combo.delta;
    switch (combo.kind) {
      case 0:
        base.kind = PredictorKind::lpc;
        members = {base};
        break;
      case 1:
        base.kind = PredictorKind::rbf1;
        base.neurons = 8;
        base.spread = 0.3;
        members = {base};
        break;
      case 2:
        base.kind = PredictorKind::rbf2;
        base.neurons = 10;
        members = {base};
        break;
      default: {
        PredictorConfig a = base, b = base;
        a.kind = PredictorKind::rbf1;
        a.neurons = 6;
        a.spread = 0.22;
        b.kind = PredictorKind::rbf2;
        b.neurons = 8;
        members = {a, b};
        break;
      }
    }

    for (std::size_t si = 0; si < g.corpus.size(); ++si) {
      const Signal& sentence = g.corpus[si];
      Committee predictor = fit_committee(members, sentence, 1000 + ci);
      CodecConfig codec;
      codec.nq_bits = combo.nq;
      EncodeResult enc = adpcm_encode(sentence, predictor, codec);

      auto bytes = serialize_bitstream(enc.bitstream);
      Bitstream back = parse_bitstream(bytes);
      Signal dec = adpcm_decode(back);

      expect(dec.samples.size() == enc.reconstruction.samples.size(),
             "decoded length mismatch");
      for (std::size_t i = 0; i < dec.samples.size(); ++i)
        expect(dec.samples[i] == enc.reconstruction.samples[i],
               "sample " + std::to_string(i) + " differs on sentence " + std::to_string(si) +
                   ", config " + std::to_string(ci));
    }
  }
  const double secs = seconds_since(t0);
  expect(secs < 120.0, "round-trip runtime " + fmt(secs) + " s exceeds 2 min");
}

void rate_quality_monotonicity() {
  PredictorConfig cfg;
  cfg.kind = PredictorKind::lpc;
  cfg.order = 10;
  for (std::size_t si = 0; si < g.corpus.size(); ++si) {
    Committee predictor{{fit_predictor(cfg, g.corpus[si])}};
    double prev = 0.0;
    for (int nq = 2; nq <= 5; ++nq) {
      const double snr = mean_segsnr(g.corpus[si], predictor, nq);
      if (nq > 2)
        expect(snr - prev >= 3.0, "sentence " + std::to_string(si) + ": gain " +
                                      fmt(snr - prev) + " dB from Nq=" + std::to_string(nq - 1) +
                                      " to " + std::to_string(nq) + " is below 3 dB");
      prev = snr;
    }
  }
}

void radbas_anchor() {
  expect(std::abs(radbas(0.8326) - 0.5) <= 1e-4,
         "radbas(0.8326) = " + fmt(radbas(0.8326)));
  RbfNetwork net;
  net.centers = Eigen::MatrixXd::Zero(1, 2);
  net.biases = Eigen::VectorXd::Constant(1, 0.1);
  net.out_weights = Eigen::VectorXd::Constant(1, 1.0);
  net.out_bias = 0.0;
  Eigen::VectorXd x(2);
  x << 8.326, 0.0;
  const double y = rbf_forward(net, x);
  expect(std::abs(y - 0.5) <= 1e-3, "bias-0.1 neuron at distance 8.326 output " + fmt(y));
}

void least_squares_optimality() {
  std::mt19937_64 rng(0x15AAC);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> rows_d(8, 40);
    const int rows = rows_d(rng);
    std::uniform_int_distribution<int> cols_d(2, 8);
    const int cols = std::min(cols_d(rng), rows);

    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd targets(rows);
    for (int i = 0; i < rows; ++i) {
      targets(i) = dist(rng);
      for (int j = 0; j < cols; ++j) design(i, j) = dist(rng);
    }
    Eigen::VectorXd w = solve_output_layer(design, targets);

    oracle::Matrix d(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(cols)));
    std::vector<double> t(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) {
      t[static_cast<std::size_t>(i)] = targets(i);
      for (int j = 0; j < cols; ++j)
        d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = design(i, j);
    }
    const auto ref = oracle::normal_equations_lstsq(d, t);

    Eigen::VectorXd wr(cols);
    for (int j = 0; j < cols; ++j) wr(j) = ref[static_cast<std::size_t>(j)];
    Eigen::VectorXd r = targets - design * w;
    Eigen::VectorXd rr = targets - design * wr;
    const double scale = std::max(1.0, targets.lpNorm<Eigen::Infinity>());
    expect((r - rr).lpNorm<Eigen::Infinity>() <= 1e-8 * scale,
           "residual differs from the oracle by " +
               fmt((r - rr).lpNorm<Eigen::Infinity>()) + " on trial " + std::to_string(trial));

    for (int j = 0; j < cols; ++j) {
      const double scaled = std::abs(design.col(j).dot(r)) /
                            (design.col(j).norm() * targets.norm() + 1e-300);
      expect(scaled <= 1e-8, "residual not orthogonal: " + fmt(scaled));
    }
  }
}

void em_monotonicity() {
  std::mt19937_64 rng(0xE33);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> n_d(20, 60), d_d(1, 4), k_d(1, 4);
    const int n = n_d(rng), dim = d_d(rng), k = k_d(rng);
    Eigen::MatrixXd pts(n, dim);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < dim; ++j) pts(i, j) = dist(rng);

    GmmFit fit = em_gmm_circular(pts, k, 10, 7000 + static_cast<std::uint64_t>(trial));
    expect(fit.log_likelihood.size() == 10, "expected one log-likelihood entry per epoch");
    for (std::size_t e = 1; e < fit.log_likelihood.size(); ++e)
      expect(fit.log_likelihood[e] >= fit.log_likelihood[e - 1] - 1e-9,
             "log-likelihood fell at epoch " + std::to_string(e) + " (trial " +
                 std::to_string(trial) + ")");

    if (k == 1) {
      Eigen::RowVectorXd mean = pts.colwise().mean();
      const double var = (pts.rowwise() - mean).squaredNorm() / static_cast<double>(n * dim);
      expect((fit.model.means.row(0) - mean).lpNorm<Eigen::Infinity>() <= 1e-9,
             "single-component mean deviates from the MLE");
      expect(std::abs(fit.model.variances(0) - var) <= 1e-9 * std::max(1.0, var),
             "single-component variance deviates from the MLE");
    }
  }
}

void rbf1_greedy_exact() {
  std::mt19937_64 rng(0x6EE);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double spreads[] = {0.5, 0.8, 1.2};
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<int> n_d(10, 30), d_d(2, 4);
    const int n = n_d(rng), dim = d_d(rng);
    const double spread = spreads[trial % 3];
    const int s = 1 + trial % 3;

    TrainingSet set;
    set.inputs.resize(n, dim);
    set.targets.resize(n);
    for (int i = 0; i < n; ++i) {
      set.targets(i) = dist(rng);
      for (int j = 0; j < dim; ++j) set.inputs(i, j) = dist(rng);
    }
    set.order = dim;

    Rbf1Options opts;
    opts.max_neurons = s;
    opts.spread = spread;
    Rbf1Result res = train_rbf1(set, opts);

    oracle::Matrix inputs(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(dim)));
    std::vector<double> targets(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      targets[static_cast<std::size_t>(i)] = set.targets(i);
      for (int j = 0; j < dim; ++j)
        inputs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = set.inputs(i, j);
    }
    auto chosen = oracle::greedy_centers(inputs, targets, static_cast<std::size_t>(s),
                                         spread_to_bias(spread));

    expect(res.network.size() == s, "committed neuron count mismatch");
    for (int i = 0; i < s; ++i) {
      const Eigen::RowVectorXd want =
          set.inputs.row(static_cast<Eigen::Index>(chosen[static_cast<std::size_t>(i)]));
      expect(res.network.centers.row(i) == want,
             "center " + std::to_string(i) + " differs from the exhaustive oracle (trial " +
                 std::to_string(trial) + ")");
    }
  }
}

void interpolation_regime() {
  std::mt19937_64 rng(0x17E4);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> n_d(5, 40), d_d(2, 5);
    const int n = n_d(rng), dim = d_d(rng);
    TrainingSet set;
    set.inputs.resize(n, dim);
    set.targets.resize(n);
    for (int i = 0; i < n; ++i) {
      set.targets(i) = dist(rng);
      for (int j = 0; j < dim; ++j) set.inputs(i, j) = dist(rng);
    }
    set.order = dim;

    Rbf1Options opts;
    opts.max_neurons = n;
    opts.spread = 1.0;
    Rbf1Result res = train_rbf1(set, opts);
    expect(res.network.size() == n, "expected one neuron per distinct input");

    double mse = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y =
          rbf_forward(res.network, Eigen::VectorXd(set.inputs.row(i).transpose()));
      mse += (y - set.targets(i)) * (y - set.targets(i));
    }
    mse /= n;
    expect(mse <= 1e-6,
           "training MSE " + fmt(mse) + " above 1e-6 on trial " + std::to_string(trial));
  }
}

void delta_linear_equivalence() {
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    auto x = synth_ar_process(std::vector<double>{1.2, -0.5}, 600, 0.2, 900 + trial);
    const int order = 4 + static_cast<int>(trial) * 2;
    TrainingSet aug = make_training_set(x, order, true);
    TrainingSet raw = make_training_set(x, order + 1, false);
    expect(aug.inputs.rows() == raw.inputs.rows(), "row count mismatch");

    Eigen::VectorXd wa = solve_output_layer(aug.inputs, aug.targets);
    Eigen::VectorXd wr = solve_output_layer(raw.inputs, raw.targets);
    const double mse_aug = (aug.inputs * wa - aug.targets).squaredNorm() /
                           static_cast<double>(aug.inputs.rows());
    const double mse_raw = (raw.inputs * wr - raw.targets).squaredNorm() /
                           static_cast<double>(raw.inputs.rows());
    expect(std::abs(mse_aug - mse_raw) <= 1e-9,
           "augmented linear MSE " + fmt(mse_aug) + " vs raw order-(L+1) MSE " + fmt(mse_raw));
  }
}

void delta_nonlinear_trend() {
  PredictorConfig cfg;
  cfg.kind = PredictorKind::rbf2;
  cfg.order = 10;
  cfg.neurons = 20;
  cfg.em_epochs = 10;

  std::vector<Committee> raw_nets, delta_nets;
  for (const Signal& sentence : g.corpus) {
    cfg.augmented = false;
    raw_nets.push_back(Committee{{fit_predictor(cfg, sentence)}});
    cfg.augmented = true;
    delta_nets.push_back(Committee{{fit_predictor(cfg, sentence)}});
  }

  for (int nq = 2; nq <= 5; ++nq) {
    double raw_mean = 0.0, delta_mean = 0.0;
    for (std::size_t si = 0; si < g.corpus.size(); ++si) {
      raw_mean += mean_segsnr(g.corpus[si], raw_nets[si], nq);
      delta_mean += mean_segsnr(g.corpus[si], delta_nets[si], nq);
    }
    raw_mean /= static_cast<double>(g.corpus.size());
    delta_mean /= static_cast<double>(g.corpus.size());
    expect(delta_mean >= raw_mean - 0.5,
           "Nq=" + std::to_string(nq) + ": delta mean " + fmt(delta_mean) +
               " dB fell more than 0.5 dB below raw mean " + fmt(raw_mean) + " dB");
  }
}

void sweep_interior_maximum() {
  const auto t0 = Clock::now();
  SweepSpec spec;
  spec.corpus = {g.dir / "corpus" / "s0.wav"};
  spec.axis = SweepAxis::spread;
  spec.range = {0.011, 1.2, 0.01};
  spec.base.kind = PredictorKind::rbf1;
  spec.base.order = 10;
  spec.base.neurons = 20;
  spec.codec.nq_bits = 4;
  auto rows = run_sweep(spec);
  expect(rows.size() == 119, "expected 119 sweep rows, got " + std::to_string(rows.size()));

  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].segsnr_mean_db > rows[best].segsnr_mean_db) best = i;
  expect(best != 0 && best != rows.size() - 1,
         "maximum sits on the sweep boundary (spread " + fmt(rows[best].axis_value) + ")");
  expect(rows[best].segsnr_mean_db > rows.front().segsnr_mean_db &&
             rows[best].segsnr_mean_db > rows.back().segsnr_mean_db,
         "interior maximum does not exceed both endpoints");

  const double secs = seconds_since(t0);
  expect(secs < 600.0, "sweep runtime " + fmt(secs) + " s exceeds 10 min");
}

void order_sweep_oracle() {
  // AR(2) saturation: no order beyond 2 buys more than 0.1 dB.
  auto ar2 = synth_ar_process(std::vector<double>{1.0572, -0.81}, 12000, 0.2, 0xA12);
  Signal ar2_sig;
  ar2_sig.samples = ar2;
  save_wav(g.dir / "ar2.wav", ar2_sig);
  {
    std::ofstream m(g.dir / "ar2_manifest.txt", std::ios::trunc);
    m << "ar2.wav\n";
  }
  SweepSpec spec;
  spec.corpus = read_manifest(g.dir / "ar2_manifest.txt");
  spec.axis = SweepAxis::order;
  spec.range = {1, 8, 1};
  spec.codec.nq_bits = 4;
  auto rows = run_sweep(spec);
  expect(rows.size() == 8, "expected 8 order rows");
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double gain = rows[i + 1].segsnr_mean_db - rows[i].segsnr_mean_db;
    expect(gain < 0.1, "order " + std::to_string(static_cast<int>(rows[i + 1].axis_value)) +
                           " still gains " + fmt(gain) + " dB on the AR(2) signal");
  }

  // Pitch bump: a period-40 pulse train rewards orders that reach lag 40.
  auto pulse = synth_periodic_pulse_ar(9000, 40, 0.004, 0xA40);
  Signal pulse_sig;
  pulse_sig.samples = pulse;
  save_wav(g.dir / "pulse40.wav", pulse_sig);
  {
    std::ofstream m(g.dir / "pulse_manifest.txt", std::ios::trunc);
    m << "pulse40.wav\n";
  }
  spec.corpus = read_manifest(g.dir / "pulse_manifest.txt");
  spec.range = {30, 42, 1};
  auto prows = run_sweep(spec);
  expect(prows.size() == 13, "expected 13 order rows");
  double before = -1e9, bump = -1e9;
  for (const auto& r : prows) {
    if (r.axis_value <= 36.5)
      before = std::max(before, r.segsnr_mean_db);
    else if (r.axis_value >= 37.5)
      bump = std::max(bump, r.segsnr_mean_db);
  }
  expect(bump > before + 0.1, "no pitch bump: best of orders 38-42 is " + fmt(bump) +
                                  " dB vs " + fmt(before) + " dB before the period");
}

void cli_determinism() {
  const std::string cli = NLPC_CLI_PATH;
  auto runc = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    expect(std::system(cmd.c_str()) == 0, "command failed: " + args);
  };
  auto slurp = [&](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    expect(f.good(), "missing output " + p.string());
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  };

  const std::string ev = "eval " + g.manifest_one.string() +
                         " --predictors lpc,rbf2,rbf1:0.25+rbf2 --delta both --bits 3,5 "
                         "--neurons 8 --seed 21 --out ";
  runc(ev + (g.dir / "acc_a.csv").string());
  runc(ev + (g.dir / "acc_b.csv").string());
  expect(slurp(g.dir / "acc_a.csv") == slurp(g.dir / "acc_b.csv"),
         "eval CSV differs between identical runs");

  const std::string sw = "sweep " + g.manifest_one.string() +
                         " --axis spread --range 0.15:0.45:0.15 --neurons 8 --seed 21 --out ";
  runc(sw + (g.dir / "acc_sa.csv").string());
  runc(sw + (g.dir / "acc_sb.csv").string());
  expect(slurp(g.dir / "acc_sa.csv") == slurp(g.dir / "acc_sb.csv"),
         "sweep CSV differs between identical runs");

  const std::string enc = "encode " + (g.dir / "corpus" / "s1.wav").string() + " ";
  runc(enc + (g.dir / "acc_a.nlpc").string() + " --predictor rbf2 --neurons 8 --seed 21");
  runc(enc + (g.dir / "acc_b.nlpc").string() + " --predictor rbf2 --neurons 8 --seed 21");
  expect(slurp(g.dir / "acc_a.nlpc") == slurp(g.dir / "acc_b.nlpc"),
         "bitstreams differ between identical runs");
}

}  // namespace

int main() {
  setup();

  std::printf(
      "NOTE: absolute SEGSNR levels depend on the evaluation corpus, and the desk corpus\n"
      "      here is synthetic; the criteria below therefore check properties and trends\n"
      "      rather than absolute SEGSNR targets.\n");

  struct Criterion {
    const char* name;
    std::function<void()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"round-trip-exactness", round_trip_exactness},
      {"rate-quality-monotonicity", rate_quality_monotonicity},
      {"radbas-anchor", radbas_anchor},
      {"least-squares-optimality", least_squares_optimality},
      {"em-monotonicity", em_monotonicity},
      {"rbf1-greedy-exact", rbf1_greedy_exact},
      {"interpolation-regime", interpolation_regime},
      {"delta-linear-equivalence", delta_linear_equivalence},
      {"delta-nonlinear-trend", delta_nonlinear_trend},
      {"sweep-interior-maximum", sweep_interior_maximum},
      {"order-sweep-oracle", order_sweep_oracle},
      {"cli-determinism", cli_determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    try {
      c.fn();
      std::printf("PASS: %s\n", c.name);
    } catch (const std::exception& e) {
      ++failed;
      std::printf("FAIL: %s: %s\n", c.name, e.what());
    }
    std::fflush(stdout);
  }

  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
