#include "nlpc/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "nlpc/detail/bytes.hpp"
#include "nlpc/errors.hpp"

namespace nlpc {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return data;
}

constexpr std::uint16_t kFormatPcm = 1;

}  // namespace

Signal load_wav(const std::filesystem::path& path) {
  auto data = read_file(path);
  detail::ByteReader r(data);

  std::uint32_t riff = r.u32();
  r.u32();  // chunk size, unreliable in the wild
  std::uint32_t wave = r.u32();
  if (riff != 0x46464952u || wave != 0x45564157u)  // "RIFF", "WAVE"
    throw FormatError("not a RIFF/WAVE file: " + path.string());

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::vector<double> samples;
  bool have_data = false;

  while (r.remaining() >= 8) {
    std::uint32_t id = r.u32();
    std::uint32_t len = r.u32();
    if (id == 0x20746d66u) {  // "fmt "
      if (len < 16) throw FormatError("malformed fmt chunk");
      auto chunk = r.bytes(len + (len & 1u));
      detail::ByteReader f(chunk);
      format = f.u16();
      channels = f.u16();
      rate = f.u32();
      f.u32();  // byte rate
      f.u16();  // block align
      bits = f.u16();
      have_fmt = true;
    } else if (id == 0x61746164u) {  // "data"
      if (!have_fmt) throw FormatError("data chunk before fmt chunk");
      if (format != kFormatPcm) throw FormatError("unsupported compression (PCM only)");
      if (channels != 1) throw FormatError("unsupported channel count (mono only)");
      if (bits != 16) throw FormatError("unsupported sample width (16-bit only)");
      auto chunk = r.bytes(len + (len & 1u));
      std::size_t n = len / 2;
      samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::int16_t s = static_cast<std::int16_t>(chunk[2 * i] | (chunk[2 * i + 1] << 8));
        samples[i] = s / 32768.0;
      }
      have_data = true;
    } else {
      r.bytes(std::min<std::size_t>(len + (len & 1u), r.remaining()));
    }
  }

  if (!have_data) throw FormatError("no data chunk in " + path.string());
  if (rate != 8000)
    std::fprintf(stderr, "warning: %s has sample rate %u Hz, expected 8000 Hz\n",
                 path.string().c_str(), rate);

  Signal out;
  out.samples = std::move(samples);
  out.sample_rate_hz = static_cast<int>(rate);
  out.gain = 1.0;
  return out;
}

void save_wav(const std::filesystem::path& path, const Signal& signal) {
  const std::size_t n = signal.samples.size();
  std::vector<std::uint8_t> out;
  out.reserve(44 + 2 * n);

  detail::put_u32(out, 0x46464952u);  // "RIFF"
  detail::put_u32(out, static_cast<std::uint32_t>(36 + 2 * n));
  detail::put_u32(out, 0x45564157u);  // "WAVE"
  detail::put_u32(out, 0x20746d66u);  // "fmt "
  detail::put_u32(out, 16);
  detail::put_u16(out, kFormatPcm);
  detail::put_u16(out, 1);  // mono
  detail::put_u32(out, static_cast<std::uint32_t>(signal.sample_rate_hz));
  detail::put_u32(out, static_cast<std::uint32_t>(signal.sample_rate_hz * 2));
  detail::put_u16(out, 2);   // block align
  detail::put_u16(out, 16);  // bits per sample
  detail::put_u32(out, 0x61746164u);  // "data"
  detail::put_u32(out, static_cast<std::uint32_t>(2 * n));

  for (double s : signal.samples) {
    double v = std::clamp(s * signal.gain, -1.0, 1.0);
    long q = std::lround(v * 32768.0);
    q = std::clamp(q, -32768L, 32767L);
    detail::put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError("cannot open file for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw FormatError("write failed: " + path.string());
}

}  // namespace nlpc
