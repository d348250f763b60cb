#include "nlpc/model_io.hpp"

#include <limits>

#include "nlpc/detail/bytes.hpp"
#include "nlpc/errors.hpp"

namespace nlpc {

namespace {

constexpr std::uint8_t kTagLpc = 1;
constexpr std::uint8_t kTagRbf = 2;

void check_u16(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint16_t>::max())
    throw std::invalid_argument(std::string("model_serialize: ") + what + " exceeds u16");
}

}  // namespace

namespace detail {

void append_model(std::vector<std::uint8_t>& out, const Model& model) {
  if (const auto* lpc = std::get_if<LpcModel>(&model)) {
    check_u16(lpc->coefficients.size(), "coefficient count");
    put_u8(out, kTagLpc);
    put_u16(out, static_cast<std::uint16_t>(lpc->coefficients.size()));
    for (double c : lpc->coefficients) put_f64(out, c);
  } else {
    const auto& net = std::get<RbfNetwork>(model);
    check_u16(static_cast<std::size_t>(net.size()), "neuron count");
    check_u16(static_cast<std::size_t>(net.input_dim()), "input dimension");
    put_u8(out, kTagRbf);
    put_u16(out, static_cast<std::uint16_t>(net.size()));
    put_u16(out, static_cast<std::uint16_t>(net.input_dim()));
    for (int i = 0; i < net.size(); ++i)
      for (int j = 0; j < net.input_dim(); ++j) put_f64(out, net.centers(i, j));
    for (int i = 0; i < net.size(); ++i) put_f64(out, net.biases(i));
    for (int i = 0; i < net.size(); ++i) put_f64(out, net.out_weights(i));
    put_f64(out, net.out_bias);
  }
}

Model read_model(ByteReader& r) {
  const std::uint8_t tag = r.u8();
  if (tag == kTagLpc) {
    LpcModel lpc;
    const std::uint16_t count = r.u16();
    lpc.coefficients.resize(count);
    for (double& c : lpc.coefficients) c = r.f64();
    lpc.order = count;
    return lpc;
  }
  if (tag == kTagRbf) {
    RbfNetwork net;
    const std::uint16_t s = r.u16();
    const std::uint16_t d = r.u16();
    net.centers.resize(s, d);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < d; ++j) net.centers(i, j) = r.f64();
    net.biases.resize(s);
    for (int i = 0; i < s; ++i) net.biases(i) = r.f64();
    net.out_weights.resize(s);
    for (int i = 0; i < s; ++i) net.out_weights(i) = r.f64();
    net.out_bias = r.f64();
    return net;
  }
  throw FormatError("unknown model type tag " + std::to_string(tag));
}

}  // namespace detail

std::vector<std::uint8_t> model_serialize(const Model& model) {
  std::vector<std::uint8_t> out;
  detail::append_model(out, model);
  return out;
}

std::vector<std::uint8_t> model_serialize(const LpcModel& model) {
  return model_serialize(Model(model));
}

std::vector<std::uint8_t> model_serialize(const RbfNetwork& net) {
  return model_serialize(Model(net));
}

Model model_deserialize(std::span<const std::uint8_t> data) {
  detail::ByteReader r(data);
  Model m = detail::read_model(r);
  if (r.remaining() != 0) throw FormatError("trailing bytes after model payload");
  return m;
}

}  // namespace nlpc
