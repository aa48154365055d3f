#pragma once

#include <cstddef>
#include <vector>

#include "pattn/linalg.hpp"
#include "pattn/rng.hpp"

namespace pattn {

/// Blended activation: (1-alpha) * leaky-ReLU(0.01) + alpha * t*sigmoid(t),
/// alpha in [0, 1].  alpha=0 is piecewise linear, alpha=1 is smooth.
double activation(double alpha, double t);
/// Derivative in t.  At the leaky-ReLU kink (t=0) the right derivative is used.
double activation_grad(double alpha, double t);

/// Numerically stable softmax (max-shifted).  Throws std::domain_error on
/// non-finite input.
Vec softmax(ConstSpan w);
/// Given s = softmax(w) and upstream dL/ds, returns dL/dw.
Vec softmax_backward(ConstSpan s, ConstSpan upstream);

struct Layer {
  Matrix weight;
  Vec bias;
  double alpha = 0.0;  // ignored on the final (affine) layer
};

/// Fully connected network; hidden layers apply the blended activation, the
/// final layer is affine.
struct DenseNet {
  std::vector<Layer> layers;

  std::size_t input_dim() const { return layers.front().weight.cols; }
  std::size_t output_dim() const { return layers.back().weight.rows; }
  std::size_t parameter_count() const;

  /// Glorot-uniform weights (+/- sqrt(6/(fan_in+fan_out))), zero biases.
  /// `widths` lists every layer output size including the final one.
  static DenseNet random(std::size_t input, const std::vector<std::size_t>& widths,
                         double alpha, Rng& rng);

  /// Throws std::invalid_argument on dimension mismatch or alpha outside [0,1].
  void validate() const;
};

/// Intermediate values recorded by forward() for use in backward().
struct ForwardTape {
  Vec input;
  std::vector<Vec> pre;   // pre-activation per layer
  std::vector<Vec> post;  // post-activation per layer; back() is the output
};

/// Evaluates the network; tape (optional) receives intermediates.
Vec forward(const DenseNet& net, ConstSpan x, ForwardTape* tape = nullptr);

struct GradientBundle {
  std::vector<Matrix> weight;
  std::vector<Vec> bias;

  static GradientBundle zeros_like(const DenseNet& net);
  void add(const GradientBundle& other);
  void scale(double a);
  void set_zero();
  double max_abs() const;
};

/// Accumulates dL/dparams into grads and returns dL/dinput; tape must come
/// from forward() on the same net.
Vec backward(const DenseNet& net, const ForwardTape& tape, ConstSpan upstream,
             GradientBundle& grads);
/// Convenience: fresh gradient bundle for a single (x, upstream) pair.
GradientBundle backward(const DenseNet& net, const ForwardTape& tape, ConstSpan upstream);

}  // namespace pattn
