#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "simpleds/qnetwork.hpp"

namespace simpleds::fixtures {

inline double squared_td_error(const QNetwork& net, const std::vector<double>& s, std::size_t a, double target) {
  const double d = target - net.forward(s)[a];
  return d * d;
}

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t components = 0;
};

// Compares backward() with central differences (step h) on every parameter.
// Components where both values are below `floor` in magnitude are compared
// with `floor` as the denominator.
inline GradientCheck check_gradient(QNetwork net, const std::vector<double>& s, std::size_t a, double target,
                                    double h = 1e-5, double floor = 1e-6) {
  const Gradient g = net.backward(s, a, target);
  GradientCheck out;
  auto compare = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + h;
    const double up = squared_td_error(net, s, a, target);
    param = saved - h;
    const double down = squared_td_error(net, s, a, target);
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
    out.max_relative_error = std::max(out.max_relative_error, std::abs(analytic - numeric) / scale);
    ++out.components;
  };
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    Layer& layer = net.layers()[l];
    for (std::size_t i = 0; i < layer.weights.size(); ++i) compare(layer.weights[i], g.weights[l][i]);
    for (std::size_t i = 0; i < layer.biases.size(); ++i) compare(layer.biases[i], g.biases[l][i]);
  }
  return out;
}

}  // namespace simpleds::fixtures
