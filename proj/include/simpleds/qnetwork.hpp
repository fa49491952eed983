#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "simpleds/random.hpp"

namespace simpleds {

inline constexpr std::size_t kMaxInputWidth = 100;
inline constexpr std::size_t kHiddenWidth = 40;

// Dense layer; weights are row-major with one row per output unit.
struct Layer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // outputs x inputs
  std::vector<double> biases;   // outputs

  double& weight(std::size_t out, std::size_t in) { return weights[out * inputs + in]; }
  double weight(std::size_t out, std::size_t in) const { return weights[out * inputs + in]; }

  bool operator==(const Layer&) const = default;
};

// Parameter-shaped container for gradients of a QNetwork.
struct Gradient {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  Gradient& operator+=(const Gradient& other);
  Gradient& operator*=(double factor);
  bool all_finite() const;
  bool is_zero() const;
};

// Fully connected net, ReLU on hidden layers and identity on the output.
// Any depth is accepted; the Q-function uses input/40/40/35.
class QNetwork {
 public:
  QNetwork() = default;
  // All weights and biases zero.
  explicit QNetwork(std::vector<std::size_t> layer_dims);

  // He-uniform weights in [-sqrt(6/fan_in), sqrt(6/fan_in)], biases zero.
  static QNetwork random(std::vector<std::size_t> layer_dims, Rng& rng);

  const std::vector<std::size_t>& layer_dims() const { return dims_; }
  std::size_t input_width() const { return dims_.empty() ? 0 : dims_.front(); }
  std::size_t output_width() const { return dims_.empty() ? 0 : dims_.back(); }
  std::size_t parameter_count() const;

  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

  std::vector<double> forward(std::span<const double> state) const;

  // Gradient of (td_target - Q(state, action))^2 with respect to every
  // parameter. Only the selected output unit contributes.
  Gradient backward(std::span<const double> state, std::size_t action, double td_target) const;

  Gradient zero_gradient() const;

  // theta <- theta - learning_rate * gradient. Throws TrainingFault on a
  // non-finite gradient, leaving the net untouched.
  void apply_sgd(const Gradient& gradient, double learning_rate);

  bool all_finite() const;

  bool operator==(const QNetwork&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<Layer> layers_;
};

std::vector<std::size_t> default_layer_dims(std::size_t input_width, std::size_t num_actions);

// Self-describing policy: network plus the vocabulary that defines its inputs.
struct Policy {
  QNetwork net;
  std::vector<std::string> vocabulary;

  bool operator==(const Policy&) const = default;
};

inline constexpr std::string_view kPolicyMagic = "SIMPLEDS-POLICY/1";

std::vector<std::uint8_t> serialize(const QNetwork& net,
                                    const std::vector<std::string>& vocabulary = {});
// Throws ParseError (with byte offset) on malformed input.
Policy deserialize(std::span<const std::uint8_t> bytes);

void save_policy(const std::string& path, const Policy& policy);
Policy load_policy(const std::string& path);

}  // namespace simpleds
