#include "simpleds/qnetwork.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include "simpleds/errors.hpp"

namespace simpleds {

namespace {

void check_dims(const std::vector<std::size_t>& dims) {
  if (dims.size() < 2) throw ContractError("network needs at least an input and an output layer");
  for (std::size_t d : dims) {
    if (d == 0) throw ContractError("layer widths must be positive");
  }
}

}  // namespace

Gradient& Gradient::operator+=(const Gradient& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (std::size_t i = 0; i < weights[l].size(); ++i) weights[l][i] += other.weights[l][i];
    for (std::size_t i = 0; i < biases[l].size(); ++i) biases[l][i] += other.biases[l][i];
  }
  return *this;
}

Gradient& Gradient::operator*=(double factor) {
  for (auto& w : weights) std::ranges::for_each(w, [&](double& x) { x *= factor; });
  for (auto& b : biases) std::ranges::for_each(b, [&](double& x) { x *= factor; });
  return *this;
}

bool Gradient::all_finite() const {
  auto finite = [](const std::vector<double>& v) {
    return std::ranges::all_of(v, [](double x) { return std::isfinite(x); });
  };
  return std::ranges::all_of(weights, finite) && std::ranges::all_of(biases, finite);
}

bool Gradient::is_zero() const {
  auto zero = [](const std::vector<double>& v) {
    return std::ranges::all_of(v, [](double x) { return x == 0.0; });
  };
  return std::ranges::all_of(weights, zero) && std::ranges::all_of(biases, zero);
}

QNetwork::QNetwork(std::vector<std::size_t> layer_dims) : dims_(std::move(layer_dims)) {
  check_dims(dims_);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    Layer layer;
    layer.inputs = dims_[l];
    layer.outputs = dims_[l + 1];
    layer.weights.assign(layer.inputs * layer.outputs, 0.0);
    layer.biases.assign(layer.outputs, 0.0);
    layers_.push_back(std::move(layer));
  }
}

QNetwork QNetwork::random(std::vector<std::size_t> layer_dims, Rng& rng) {
  QNetwork net(std::move(layer_dims));
  for (Layer& layer : net.layers_) {
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.inputs));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : layer.weights) w = dist(rng);
  }
  return net;
}

std::size_t QNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& layer : layers_) n += layer.weights.size() + layer.biases.size();
  return n;
}

std::vector<double> QNetwork::forward(std::span<const double> state) const {
  if (state.size() != input_width()) {
    throw DimensionError("forward: state vector", input_width(), state.size());
  }
  std::vector<double> activation(state.begin(), state.end());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    std::vector<double> next(layer.biases);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* row = &layer.weights[o * layer.inputs];
      double sum = next[o];
      for (std::size_t i = 0; i < layer.inputs; ++i) sum += row[i] * activation[i];
      next[o] = sum;
    }
    if (l + 1 < layers_.size()) {
      for (double& x : next) x = std::max(0.0, x);
    }
    activation = std::move(next);
  }
  return activation;
}

Gradient QNetwork::zero_gradient() const {
  Gradient g;
  for (const Layer& layer : layers_) {
    g.weights.emplace_back(layer.weights.size(), 0.0);
    g.biases.emplace_back(layer.biases.size(), 0.0);
  }
  return g;
}

Gradient QNetwork::backward(std::span<const double> state, std::size_t action,
                            double td_target) const {
  if (state.size() != input_width()) {
    throw DimensionError("backward: state vector", input_width(), state.size());
  }
  if (action >= output_width()) {
    throw ContractError("backward: action index " + std::to_string(action) +
                        " out of range [0," + std::to_string(output_width()) + ")");
  }
  if (!std::isfinite(td_target)) throw ContractError("backward: td_target is not finite");
  if (!std::isfinite(td_target)) throw ContractError("backward: non-finite TD target");

  // Forward pass keeping every layer's input and pre-activation.
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> pre;
  std::vector<double> activation(state.begin(), state.end());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    std::vector<double> z(layer.biases);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* row = &layer.weights[o * layer.inputs];
      for (std::size_t i = 0; i < layer.inputs; ++i) z[o] += row[i] * activation[i];
    }
    inputs.push_back(activation);
    pre.push_back(z);
    if (l + 1 < layers_.size()) {
      for (double& x : z) x = std::max(0.0, x);
    }
    activation = std::move(z);
  }

  Gradient g = zero_gradient();
  // d/dQ (target - Q)^2 = 2 (Q - target)
  std::vector<double> delta(output_width(), 0.0);
  delta[action] = 2.0 * (activation[action] - td_target);

  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Layer& layer = layers_[l];
    const std::vector<double>& in = inputs[l];
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      if (delta[o] == 0.0) continue;
      g.biases[l][o] = delta[o];
      double* grow = &g.weights[l][o * layer.inputs];
      for (std::size_t i = 0; i < layer.inputs; ++i) grow[i] = delta[o] * in[i];
    }
    if (l == 0) break;
    std::vector<double> prev(layer.inputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      if (delta[o] == 0.0) continue;
      const double* row = &layer.weights[o * layer.inputs];
      for (std::size_t i = 0; i < layer.inputs; ++i) prev[i] += row[i] * delta[o];
    }
    const std::vector<double>& z = pre[l - 1];
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (z[i] <= 0.0) prev[i] = 0.0;
    }
    delta = std::move(prev);
  }
  return g;
}

void QNetwork::apply_sgd(const Gradient& gradient, double learning_rate) {
  if (!(learning_rate >= 0.0)) throw ContractError("apply_sgd: learning rate must be >= 0");
  if (gradient.weights.size() != layers_.size()) {
    throw DimensionError("apply_sgd: gradient layers", layers_.size(), gradient.weights.size());
  }
  if (!gradient.all_finite()) throw TrainingFault("apply_sgd: non-finite gradient");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Layer& layer = layers_[l];
    for (std::size_t i = 0; i < layer.weights.size(); ++i) {
      layer.weights[i] -= learning_rate * gradient.weights[l][i];
    }
    for (std::size_t i = 0; i < layer.biases.size(); ++i) {
      layer.biases[i] -= learning_rate * gradient.biases[l][i];
    }
  }
}

bool QNetwork::all_finite() const {
  for (const Layer& layer : layers_) {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!std::ranges::all_of(layer.weights, finite) || !std::ranges::all_of(layer.biases, finite)) {
      return false;
    }
  }
  return true;
}

std::vector<std::size_t> default_layer_dims(std::size_t input_width, std::size_t num_actions) {
  if (input_width == 0 || input_width > kMaxInputWidth) {
    throw ContractError("input width " + std::to_string(input_width) + " outside [1," +
                        std::to_string(kMaxInputWidth) + "]");
  }
  return {input_width, kHiddenWidth, kHiddenWidth, num_actions};
}

// Policy file layout (little-endian):
//   magic "SIMPLEDS-POLICY/1\n"
//   u32 layer count, u32 width per layer
//   per layer: f64 weights (row-major), f64 biases
//   u32 vocabulary size, per word: u32 byte length + bytes
namespace {

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  void bytes(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64(const char* what) {
    need(8, what);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  std::string bytes(std::size_t n, const char* what) {
    need(n, what);
    std::string s(in_.begin() + pos_, in_.begin() + pos_ + n);
    pos_ += n;
    return s;
  }
  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n, const char* what) {
    if (in_.size() - pos_ < n) throw ParseError(std::string("truncated policy: ") + what, pos_);
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

constexpr std::uint32_t kMaxLayers = 64;
constexpr std::uint32_t kMaxWidth = 1 << 16;
constexpr std::uint32_t kMaxWordBytes = 1 << 10;

}  // namespace

std::vector<std::uint8_t> serialize(const QNetwork& net, const std::vector<std::string>& vocabulary) {
  Writer w;
  w.bytes(kPolicyMagic);
  w.bytes("\n");
  w.u32(static_cast<std::uint32_t>(net.layer_dims().size()));
  for (std::size_t d : net.layer_dims()) w.u32(static_cast<std::uint32_t>(d));
  for (const Layer& layer : net.layers()) {
    for (double x : layer.weights) w.f64(x);
    for (double x : layer.biases) w.f64(x);
  }
  w.u32(static_cast<std::uint32_t>(vocabulary.size()));
  for (const std::string& word : vocabulary) {
    w.u32(static_cast<std::uint32_t>(word.size()));
    w.bytes(word);
  }
  return w.take();
}

Policy deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const std::string magic = r.bytes(kPolicyMagic.size() + 1, "magic");
  if (magic != std::string(kPolicyMagic) + "\n") throw ParseError("bad policy magic", 0);

  const std::size_t dims_at = r.offset();
  const std::uint32_t n_dims = r.u32("layer count");
  if (n_dims < 2 || n_dims > kMaxLayers) throw ParseError("implausible layer count", dims_at);
  std::vector<std::size_t> dims;
  for (std::uint32_t i = 0; i < n_dims; ++i) {
    const std::size_t at = r.offset();
    const std::uint32_t d = r.u32("layer width");
    if (d == 0 || d > kMaxWidth) throw ParseError("implausible layer width", at);
    dims.push_back(d);
  }
  QNetwork net(dims);
  for (Layer& layer : net.layers()) {
    for (double& x : layer.weights) x = r.f64("weights");
    for (double& x : layer.biases) x = r.f64("biases");
  }
  Policy policy{std::move(net), {}};
  const std::uint32_t n_words = r.u32("vocabulary size");
  for (std::uint32_t i = 0; i < n_words; ++i) {
    const std::size_t at = r.offset();
    const std::uint32_t len = r.u32("word length");
    if (len > kMaxWordBytes) throw ParseError("implausible word length", at);
    policy.vocabulary.push_back(r.bytes(len, "word"));
  }
  if (!r.done()) throw ParseError("trailing bytes after policy", r.offset());
  return policy;
}

void save_policy(const std::string& path, const Policy& policy) {
  const auto bytes = serialize(policy.net, policy.vocabulary);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path);
}

Policy load_policy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open policy " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace simpleds
