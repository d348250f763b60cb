#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nlpc {

inline constexpr std::uint16_t kFormatVersion = 1;

// Self-describing coded-file header. The first `prediction_order` samples and
// the serialized predictor travel here so the decoder needs nothing else.
// Wire layout: magic "NLPC", then little-endian fields in declaration order;
// reals are 64-bit IEEE-754.
struct CodecHeader {
  std::uint16_t version = kFormatVersion;
  int nq_bits = 4;                 // quantizer bits, in [2, 5]
  int sample_rate_hz = 8000;
  int prediction_order = 10;       // history samples sent verbatim
  std::uint64_t num_samples = 0;
  double gain = 1.0;
  double initial_step = 0.02;
  std::vector<double> seed_samples;            // prediction_order entries
  std::vector<std::uint8_t> predictor_payload; // serialized predictor set
};

struct Bitstream {
  CodecHeader header;
  std::vector<std::uint32_t> codes;  // one per sample beyond the seed, each < 2^nq_bits
};

// Packs codes MSB-first, nq_bits each, zero-padded to a byte boundary.
std::vector<std::uint8_t> pack_codes(std::span<const std::uint32_t> codes, int nq_bits);
std::vector<std::uint32_t> unpack_codes(std::span<const std::uint8_t> bytes, std::size_t count,
                                        int nq_bits);

std::vector<std::uint8_t> serialize_bitstream(const Bitstream& bits);
Bitstream parse_bitstream(std::span<const std::uint8_t> data);

void write_bitstream(const std::filesystem::path& path, const Bitstream& bits);
Bitstream read_bitstream(const std::filesystem::path& path);

}  // namespace nlpc
