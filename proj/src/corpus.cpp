#include "nlpc/corpus.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "nlpc/errors.hpp"
#include "nlpc/wav.hpp"

namespace nlpc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Two-pole resonator y(n) = x(n) + 2 r cos(theta) y(n-1) - r^2 y(n-2), with
// the center frequency drifting linearly from from_hz to to_hz.
void resonate(std::vector<double>& x, double from_hz, double to_hz, double radius,
              int rate_hz) {
  const double a2 = -radius * radius;
  double y1 = 0.0, y2 = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = from_hz + (to_hz - from_hz) * static_cast<double>(i) / n;
    const double a1 = 2.0 * radius * std::cos(2.0 * kPi * f / rate_hz);
    const double y = x[i] + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    x[i] = y;
  }
}

void scale_peak(std::vector<double>& x, double peak) {
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  if (mx > 0.0)
    for (double& v : x) v *= peak / mx;
}

struct SentenceRecipe {
  int pitch_period;
  double f1_hz, f2_hz;
  double radius;
  double noise;  // aspiration level relative to the unit glottal pulse
  int syllables;
};

constexpr SentenceRecipe kRecipes[kDeskCorpusSize] = {
    {40, 380, 1200, 0.88, 0.22, 2},  {46, 450, 1500, 0.87, 0.18, 3},
    {53, 520, 1750, 0.88, 0.28, 2},  {60, 600, 1950, 0.85, 0.18, 3},
    {68, 350, 1100, 0.89, 0.22, 2},  {77, 480, 1600, 0.86, 0.32, 3},
    {88, 550, 2050, 0.84, 0.18, 2},  {100, 420, 1350, 0.87, 0.25, 3},
};

}  // namespace

Signal synth_sentence(int index, std::uint64_t seed) {
  if (index < 0 || index >= kDeskCorpusSize)
    throw std::invalid_argument("synth_sentence: index out of range");
  const SentenceRecipe& rc = kRecipes[index];
  const int rate = 8000;
  const int n = 3200;  // 0.4 s

  std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(index + 1)));
  std::normal_distribution<double> normal(0.0, 1.0);

  // Voiced part: a smooth glottal pulse every pitch period over an
  // aspiration-noise floor, shaped by two slowly drifting formants.
  std::vector<double> voiced(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const int phase = i % rc.pitch_period;
    if (phase < 6)
      voiced[static_cast<std::size_t>(i)] +=
          0.5 * (1.0 - std::cos(2.0 * kPi * (phase + 1) / 7.0));
    voiced[static_cast<std::size_t>(i)] += rc.noise * normal(rng);
  }
  resonate(voiced, rc.f1_hz * 0.88, rc.f1_hz * 1.12, rc.radius, rate);
  resonate(voiced, rc.f2_hz * 1.12, rc.f2_hz * 0.88, rc.radius - 0.02, rate);

  // Fricative-like part: noise through a broad high resonance. The mixed-in
  // unvoiced stretch keeps the per-sentence predictor fit a compromise, as
  // on real sentences.
  std::vector<double> unvoiced(static_cast<std::size_t>(n));
  for (double& v : unvoiced) v = 0.8 * normal(rng);
  resonate(unvoiced, 2600.0, 2900.0, 0.75, rate);

  // Crossfade the unvoiced stretch in, then apply a syllable-like loudness
  // modulation so frame energies vary.
  std::vector<double> x(static_cast<std::size_t>(n));
  const int uv_start = static_cast<int>(0.55 * n), uv_end = static_cast<int>(0.75 * n);
  const int fade = 80;
  for (int i = 0; i < n; ++i) {
    double mix = 0.0;
    if (i >= uv_start + fade && i < uv_end - fade)
      mix = 1.0;
    else if (i >= uv_start && i < uv_start + fade)
      mix = static_cast<double>(i - uv_start) / fade;
    else if (i >= uv_end - fade && i < uv_end)
      mix = static_cast<double>(uv_end - i) / fade;
    const std::size_t k = static_cast<std::size_t>(i);
    x[k] = (1.0 - mix) * voiced[k] + 0.5 * mix * unvoiced[k];
    const double phase = kPi * rc.syllables * static_cast<double>(i) / n;
    x[k] *= 0.35 + 0.65 * std::sin(phase) * std::sin(phase);
  }

  scale_peak(x, 0.95);

  Signal out;
  out.samples = std::move(x);
  out.sample_rate_hz = rate;
  out.gain = 1.0;
  return out;
}

std::vector<std::filesystem::path> synth_desk_corpus(const std::filesystem::path& dir,
                                                     std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  std::ofstream manifest(dir / "manifest.txt", std::ios::trunc);
  if (!manifest) throw FormatError("cannot write manifest in " + dir.string());
  manifest << "# desk corpus: synthetic 8 kHz sentences\n";
  for (int i = 0; i < kDeskCorpusSize; ++i) {
    const auto path = dir / ("s" + std::to_string(i) + ".wav");
    save_wav(path, synth_sentence(i, seed));
    manifest << path.filename().string() << "\n";
    paths.push_back(path);
  }
  return paths;
}

std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open manifest: " + path.string());
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::vector<std::filesystem::path> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    std::filesystem::path p(line.substr(first, last - first + 1));
    out.push_back(p.is_absolute() ? p : base / p);
  }
  if (out.empty()) throw FormatError("manifest lists no files: " + path.string());
  return out;
}

std::vector<double> synth_ar_process(std::span<const double> ar_coeffs, int n, double noise_sigma,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, noise_sigma);
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double v = normal(rng);
    for (std::size_t k = 0; k < ar_coeffs.size(); ++k)
      if (i > static_cast<int>(k)) v += ar_coeffs[k] * x[static_cast<std::size_t>(i) - k - 1];
    x[static_cast<std::size_t>(i)] = v;
  }
  scale_peak(x, 0.95);
  return x;
}

std::vector<double> synth_periodic_pulse_ar(int n, int period, double noise_sigma,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, noise_sigma);
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    if (i % period == 0) x[static_cast<std::size_t>(i)] += 1.0;
    x[static_cast<std::size_t>(i)] += normal(rng);
  }
  resonate(x, 500.0, 500.0, 0.94, 8000);
  resonate(x, 1400.0, 1400.0, 0.92, 8000);
  scale_peak(x, 0.95);
  return x;
}

}  // namespace nlpc
