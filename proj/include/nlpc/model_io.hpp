#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "nlpc/dsp.hpp"
#include "nlpc/rbf.hpp"

namespace nlpc {

using Model = std::variant<LpcModel, RbfNetwork>;

// Byte format: type tag (1 = LPC, 2 = RBF), dimensions as little-endian u16,
// then parameters as little-endian 64-bit reals, row-major. Round trips are
// bit-exact.
std::vector<std::uint8_t> model_serialize(const LpcModel& model);
std::vector<std::uint8_t> model_serialize(const RbfNetwork& net);
std::vector<std::uint8_t> model_serialize(const Model& model);

Model model_deserialize(std::span<const std::uint8_t> data);

namespace detail {
class ByteReader;
// Reads one model from a stream that may hold several.
Model read_model(ByteReader& reader);
void append_model(std::vector<std::uint8_t>& out, const Model& model);
}  // namespace detail

}  // namespace nlpc
