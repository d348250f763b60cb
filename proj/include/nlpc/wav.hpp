#pragma once

#include <filesystem>

#include "nlpc/signal.hpp"

namespace nlpc {

// Reads a 16-bit mono PCM WAV file. Samples are scaled by 1/32768 and the
// gain is left at 1; normalization is a separate step. Anything other than
// single-channel 16-bit PCM is rejected with FormatError. A sample rate
// other than 8000 Hz is accepted with a warning on stderr.
Signal load_wav(const std::filesystem::path& path);

// Writes samples * gain as 16-bit mono PCM, clamping to full scale.
void save_wav(const std::filesystem::path& path, const Signal& signal);

}  // namespace nlpc
