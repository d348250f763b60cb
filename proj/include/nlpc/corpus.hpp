#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nlpc/rbf.hpp"
#include "nlpc/signal.hpp"

namespace nlpc {

inline constexpr int kDeskCorpusSize = 8;

// One synthetic test sentence: a pitch-periodic pulse train with additive
// noise, shaped by a pair of formant resonators and a syllable-like
// amplitude envelope. 0.4 s at 8 kHz, peak 0.95. Deterministic in
// (index, seed).
Signal synth_sentence(int index, std::uint64_t seed = kDefaultSeed);

// Writes the 8 desk sentences as s0.wav..s7.wav plus manifest.txt into dir;
// returns the WAV paths.
std::vector<std::filesystem::path> synth_desk_corpus(const std::filesystem::path& dir,
                                                     std::uint64_t seed = kDefaultSeed);

// Manifest: one WAV path per line, '#' comments, blank lines ignored.
// Relative paths resolve against the manifest's directory.
std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& path);

// Generators for controlled test signals.
std::vector<double> synth_ar_process(std::span<const double> ar_coeffs, int n, double noise_sigma,
                                     std::uint64_t seed);
std::vector<double> synth_periodic_pulse_ar(int n, int period, double noise_sigma,
                                            std::uint64_t seed);

}  // namespace nlpc
