// nlpc: nonlinear-predictive ADPCM speech codec.
//
// Subcommands: encode, decode, eval, sweep, synth. See README.md.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "nlpc/codec.hpp"
#include "nlpc/corpus.hpp"
#include "nlpc/dsp.hpp"
#include "nlpc/errors.hpp"
#include "nlpc/experiment.hpp"
#include "nlpc/wav.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumeric = 3;

std::uint64_t resolve_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("NLPC_SEED")) return std::stoull(env);
  return flag_seed;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::trunc | std::ios::binary);
  if (!f) throw nlpc::FormatError("cannot open output file: " + path);
  f << text;
}

std::vector<int> parse_bits_list(const std::string& csv) {
  try {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
      const std::size_t comma = csv.find(',', pos);
      const std::string part = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
      if (!part.empty()) out.push_back(std::stoi(part));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--bits", e.what());
  }
}

// Token mistakes are usage errors, not numeric failures.
nlpc::GridEntry parse_token_cli(const std::string& token, const nlpc::PredictorConfig& base) {
  try {
    return nlpc::parse_grid_token(token, base);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--predictor", e.what());
  }
}

struct CommonFlags {
  int order = 10;
  int neurons = 20;
  double spread = 0.22;
  int epochs = 10;
  std::uint64_t seed = nlpc::kDefaultSeed;
};

nlpc::PredictorConfig base_config(const CommonFlags& f) {
  nlpc::PredictorConfig cfg;
  cfg.order = f.order;
  cfg.neurons = f.neurons;
  cfg.spread = f.spread;
  cfg.em_epochs = f.epochs;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlinear-predictive ADPCM speech codec"};
  app.require_subcommand(1);

  CommonFlags flags;

  // encode
  auto* enc = app.add_subcommand("encode", "encode a WAV file to an .nlpc bitstream");
  std::string enc_in, enc_out;
  std::string enc_predictor = "lpc";
  std::string enc_committee;
  int enc_bits = 4;
  bool enc_delta = false, enc_report = false;
  enc->add_option("input", enc_in, "input WAV (16-bit mono PCM)")->required();
  enc->add_option("output", enc_out, "output bitstream path")->required();
  enc->add_option("--predictor", enc_predictor, "lpc | rbf1[:spread] | rbf2, '+' combines");
  enc->add_option("--committee", enc_committee, "committee members, e.g. rbf1+rbf2");
  enc->add_option("--bits", enc_bits, "quantizer bits (2..5)")->check(CLI::Range(2, 5));
  enc->add_option("--order", flags.order, "prediction order L");
  enc->add_option("--neurons", flags.neurons, "RBF neurons S");
  enc->add_option("--spread", flags.spread, "RBF-1 spread");
  enc->add_option("--epochs", flags.epochs, "RBF-2 EM epochs");
  enc->add_flag("--delta", enc_delta, "augment inputs with delta parameters");
  enc->add_flag("--report", enc_report, "print segsnr_mean_db,segsnr_std_db,rate_bps");
  enc->add_option("--seed", flags.seed, "RNG seed (NLPC_SEED overrides)");

  // decode
  auto* dec = app.add_subcommand("decode", "decode an .nlpc bitstream to WAV");
  std::string dec_in, dec_out;
  dec->add_option("input", dec_in, "input bitstream")->required();
  dec->add_option("output", dec_out, "output WAV path")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "SEGSNR table over a corpus and predictor grid");
  std::string ev_manifest, ev_out;
  std::string ev_predictors = "rbf1:0.22,rbf1:0.4,rbf2";
  std::string ev_delta = "both";
  std::string ev_bits = "2,3,4,5";
  int ev_frame = 160;
  ev->add_option("manifest", ev_manifest, "corpus manifest (one WAV path per line)")->required();
  ev->add_option("--out", ev_out, "output CSV path (default stdout)");
  ev->add_option("--predictors", ev_predictors, "comma list of predictor tokens");
  ev->add_option("--delta", ev_delta, "off | on | both")
      ->check(CLI::IsMember({"off", "on", "both"}));
  ev->add_option("--bits", ev_bits, "comma list of quantizer bits");
  ev->add_option("--frame", ev_frame, "SEGSNR frame length in samples");
  ev->add_option("--order", flags.order, "prediction order L");
  ev->add_option("--neurons", flags.neurons, "RBF neurons S");
  ev->add_option("--spread", flags.spread, "default RBF-1 spread");
  ev->add_option("--epochs", flags.epochs, "RBF-2 EM epochs");
  ev->add_option("--seed", flags.seed, "RNG seed (NLPC_SEED overrides)");

  // sweep
  auto* sw = app.add_subcommand("sweep", "SEGSNR over one parameter axis");
  std::string sw_manifest, sw_out, sw_axis, sw_range;
  std::string sw_predictor = "rbf1";
  int sw_bits = 4, sw_frame = 160;
  bool sw_neurons_given = false;
  sw->add_option("manifest", sw_manifest, "corpus manifest")->required();
  sw->add_option("--axis", sw_axis, "spread | neurons | order")
      ->required()
      ->check(CLI::IsMember({"spread", "neurons", "order"}));
  sw->add_option("--range", sw_range, "start:stop:step (defaults follow the axis)");
  sw->add_option("--predictor", sw_predictor, "base predictor for the sweep");
  sw->add_option("--out", sw_out, "output CSV path (default stdout)");
  sw->add_option("--bits", sw_bits, "quantizer bits")->check(CLI::Range(2, 5));
  sw->add_option("--frame", sw_frame, "SEGSNR frame length in samples");
  sw->add_option("--order", flags.order, "prediction order L");
  auto* sw_neurons_opt = sw->add_option("--neurons", flags.neurons, "RBF neurons S");
  sw->add_option("--spread", flags.spread, "RBF-1 spread when not swept");
  sw->add_option("--epochs", flags.epochs, "RBF-2 EM epochs");
  sw->add_option("--seed", flags.seed, "RNG seed (NLPC_SEED overrides)");

  // synth
  auto* sy = app.add_subcommand("synth", "write the synthetic desk corpus");
  std::string sy_dir;
  sy->add_option("dir", sy_dir, "output directory")->required();
  sy->add_option("--seed", flags.seed, "RNG seed (NLPC_SEED overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::uint64_t seed = resolve_seed(flags.seed);

  try {
    if (*enc) {
      nlpc::Signal raw = nlpc::load_wav(enc_in);
      nlpc::Signal sig = nlpc::normalize(raw);

      const std::string token = enc_committee.empty() ? enc_predictor : enc_committee;
      nlpc::GridEntry entry = parse_token_cli(token, base_config(flags));
      for (auto& m : entry.members) m.augmented = enc_delta;
      nlpc::Committee predictor = nlpc::fit_committee(entry.members, sig, seed);

      nlpc::CodecConfig codec;
      codec.nq_bits = enc_bits;
      nlpc::EncodeResult res = nlpc::adpcm_encode(sig, predictor, codec);
      nlpc::write_bitstream(enc_out, res.bitstream);

      if (enc_report) {
        nlpc::SegSnrReport rep = nlpc::segsnr(sig, res.reconstruction);
        std::printf("%.6f,%.6f,%d\n", rep.mean_db, rep.std_db,
                    enc_bits * sig.sample_rate_hz);
      }
    } else if (*dec) {
      nlpc::Bitstream bits = nlpc::read_bitstream(dec_in);
      nlpc::Signal out = nlpc::adpcm_decode(bits);
      nlpc::save_wav(dec_out, out);
    } else if (*ev) {
      nlpc::EvalSpec spec;
      spec.corpus = nlpc::read_manifest(ev_manifest);
      const nlpc::PredictorConfig base = base_config(flags);
      std::size_t pos = 0;
      while (pos <= ev_predictors.size()) {
        const std::size_t comma = ev_predictors.find(',', pos);
        const std::string token =
            ev_predictors.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!token.empty()) spec.grid.push_back(parse_token_cli(token, base));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (ev_delta == "off")
        spec.delta_options = {false};
      else if (ev_delta == "on")
        spec.delta_options = {true};
      else
        spec.delta_options = {false, true};
      spec.nq_list = parse_bits_list(ev_bits);
      spec.frame_len = ev_frame;
      spec.seed = seed;
      write_text(ev_out, nlpc::eval_csv(nlpc::run_eval(spec)));
    } else if (*sw) {
      nlpc::SweepSpec spec;
      spec.corpus = nlpc::read_manifest(sw_manifest);
      spec.base = base_config(flags);
      nlpc::GridEntry entry = parse_token_cli(sw_predictor, spec.base);
      if (entry.members.size() != 1)
        throw CLI::ValidationError("--predictor", "sweeps take a single predictor");
      spec.base = entry.members[0];
      sw_neurons_given = sw_neurons_opt->count() > 0;

      if (sw_axis == "spread") {
        spec.axis = nlpc::SweepAxis::spread;
        if (!sw_neurons_given) spec.base.neurons = 50;
      } else if (sw_axis == "neurons") {
        spec.axis = nlpc::SweepAxis::neurons;
      } else {
        spec.axis = nlpc::SweepAxis::order;
      }
      spec.range = nlpc::default_sweep_range(spec.axis, spec.base.neurons);
      if (!sw_range.empty()) {
        const auto c1 = sw_range.find(':');
        const auto c2 = sw_range.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
          throw CLI::ValidationError("--range", "expected start:stop:step");
        spec.range.start = std::stod(sw_range.substr(0, c1));
        spec.range.stop = std::stod(sw_range.substr(c1 + 1, c2 - c1 - 1));
        spec.range.step = std::stod(sw_range.substr(c2 + 1));
      }
      spec.codec.nq_bits = sw_bits;
      spec.frame_len = sw_frame;
      spec.seed = seed;
      write_text(sw_out, nlpc::sweep_csv(nlpc::run_sweep(spec)));
    } else if (*sy) {
      nlpc::synth_desk_corpus(sy_dir, seed);
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const nlpc::FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return 0;
}
