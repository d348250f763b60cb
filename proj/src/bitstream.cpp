#include "nlpc/bitstream.hpp"

#include <fstream>
#include <string>

#include "nlpc/detail/bytes.hpp"
#include "nlpc/errors.hpp"

namespace nlpc {

namespace {

constexpr std::uint8_t kMagic[4] = {'N', 'L', 'P', 'C'};

void validate(const Bitstream& bits) {
  const CodecHeader& h = bits.header;
  if (h.nq_bits < 2 || h.nq_bits > 5)
    throw std::invalid_argument("nq_bits must be in [2, 5]");
  if (h.prediction_order < 1)
    throw std::invalid_argument("prediction_order must be positive");
  if (h.seed_samples.size() != static_cast<std::size_t>(h.prediction_order))
    throw std::invalid_argument("seed_samples must hold prediction_order samples");
  if (h.num_samples < static_cast<std::uint64_t>(h.prediction_order))
    throw std::invalid_argument("num_samples smaller than prediction_order");
  if (bits.codes.size() != h.num_samples - h.prediction_order)
    throw std::invalid_argument("code count must equal num_samples - prediction_order");
  const std::uint32_t limit = 1u << h.nq_bits;
  for (std::uint32_t c : bits.codes)
    if (c >= limit) throw std::invalid_argument("code does not fit in nq_bits");
}

}  // namespace

std::vector<std::uint8_t> pack_codes(std::span<const std::uint32_t> codes, int nq_bits) {
  std::vector<std::uint8_t> out;
  out.reserve((codes.size() * nq_bits + 7) / 8);
  std::uint8_t cur = 0;
  int nbits = 0;
  for (std::uint32_t c : codes) {
    for (int b = nq_bits - 1; b >= 0; --b) {
      cur = static_cast<std::uint8_t>((cur << 1) | ((c >> b) & 1u));
      if (++nbits == 8) {
        out.push_back(cur);
        cur = 0;
        nbits = 0;
      }
    }
  }
  if (nbits > 0) out.push_back(static_cast<std::uint8_t>(cur << (8 - nbits)));
  return out;
}

std::vector<std::uint32_t> unpack_codes(std::span<const std::uint8_t> bytes, std::size_t count,
                                        int nq_bits) {
  if (bytes.size() * 8 < count * static_cast<std::size_t>(nq_bits))
    throw FormatError("truncated code region");
  std::vector<std::uint32_t> out(count);
  std::size_t bit = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t c = 0;
    for (int b = 0; b < nq_bits; ++b, ++bit)
      c = (c << 1) | ((bytes[bit >> 3] >> (7 - (bit & 7))) & 1u);
    out[i] = c;
  }
  return out;
}

std::vector<std::uint8_t> serialize_bitstream(const Bitstream& bits) {
  validate(bits);
  const CodecHeader& h = bits.header;

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  detail::put_u16(out, h.version);
  detail::put_u8(out, static_cast<std::uint8_t>(h.nq_bits));
  detail::put_u32(out, static_cast<std::uint32_t>(h.sample_rate_hz));
  detail::put_u32(out, static_cast<std::uint32_t>(h.prediction_order));
  detail::put_u64(out, h.num_samples);
  detail::put_f64(out, h.gain);
  detail::put_f64(out, h.initial_step);
  for (double s : h.seed_samples) detail::put_f64(out, s);
  detail::put_u32(out, static_cast<std::uint32_t>(h.predictor_payload.size()));
  out.insert(out.end(), h.predictor_payload.begin(), h.predictor_payload.end());

  auto packed = pack_codes(bits.codes, h.nq_bits);
  out.insert(out.end(), packed.begin(), packed.end());
  return out;
}

Bitstream parse_bitstream(std::span<const std::uint8_t> data) {
  detail::ByteReader r(data);
  auto magic = r.bytes(4);
  for (int i = 0; i < 4; ++i)
    if (magic[i] != kMagic[i]) throw FormatError("bad magic, not an NLPC bitstream");

  Bitstream bits;
  CodecHeader& h = bits.header;
  h.version = r.u16();
  if (h.version != kFormatVersion)
    throw FormatError("version mismatch: got " + std::to_string(h.version) + ", expected " +
                      std::to_string(kFormatVersion));
  h.nq_bits = r.u8();
  if (h.nq_bits < 2 || h.nq_bits > 5) throw FormatError("nq_bits out of range [2, 5]");
  h.sample_rate_hz = static_cast<int>(r.u32());
  h.prediction_order = static_cast<int>(r.u32());
  if (h.prediction_order < 1) throw FormatError("prediction_order must be positive");
  h.num_samples = r.u64();
  if (h.num_samples < static_cast<std::uint64_t>(h.prediction_order))
    throw FormatError("num_samples smaller than prediction_order");
  h.gain = r.f64();
  h.initial_step = r.f64();
  h.seed_samples.resize(h.prediction_order);
  for (double& s : h.seed_samples) s = r.f64();
  std::uint32_t payload_len = r.u32();
  auto payload = r.bytes(payload_len);
  h.predictor_payload.assign(payload.begin(), payload.end());

  const std::size_t count = static_cast<std::size_t>(h.num_samples) - h.prediction_order;
  const std::size_t code_bytes = (count * h.nq_bits + 7) / 8;
  if (r.remaining() < code_bytes) throw FormatError("truncated code region");
  if (r.remaining() > code_bytes) throw FormatError("trailing bytes after code region");
  bits.codes = unpack_codes(r.bytes(code_bytes), count, h.nq_bits);
  return bits;
}

void write_bitstream(const std::filesystem::path& path, const Bitstream& bits) {
  auto data = serialize_bitstream(bits);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError("cannot open file for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!f) throw FormatError("write failed: " + path.string());
}

Bitstream read_bitstream(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return parse_bitstream(data);
}

}  // namespace nlpc
