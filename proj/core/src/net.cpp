#include "pattn/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pattn {

namespace {
double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }
}  // namespace

double activation(double alpha, double t) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::domain_error("activation: alpha outside [0,1]");
  const double leaky = t >= 0.0 ? t : 0.01 * t;
  const double swish = t * sigmoid(t);
  return (1.0 - alpha) * leaky + alpha * swish;
}

double activation_grad(double alpha, double t) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::domain_error("activation_grad: alpha outside [0,1]");
  const double dleaky = t >= 0.0 ? 1.0 : 0.01;
  const double s = sigmoid(t);
  const double dswish = s * (1.0 + t * (1.0 - s));
  return (1.0 - alpha) * dleaky + alpha * dswish;
}

Vec softmax(ConstSpan w) {
  if (w.empty()) throw std::domain_error("softmax: empty input");
  double m = w[0];
  for (double x : w) {
    if (!std::isfinite(x)) throw std::domain_error("softmax: non-finite input");
    m = std::max(m, x);
  }
  Vec s(w.size());
  double z = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    s[i] = std::exp(w[i] - m);
    z += s[i];
  }
  for (double& x : s) x /= z;
  return s;
}

Vec softmax_backward(ConstSpan s, ConstSpan upstream) {
  const double inner = dot(s, upstream);
  Vec g(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) g[i] = s[i] * (upstream[i] - inner);
  return g;
}

std::size_t DenseNet::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers) n += l.weight.data.size() + l.bias.size();
  return n;
}

DenseNet DenseNet::random(std::size_t input, const std::vector<std::size_t>& widths,
                          double alpha, Rng& rng) {
  if (widths.empty()) throw std::invalid_argument("DenseNet::random: no layers");
  DenseNet net;
  std::size_t fan_in = input;
  for (std::size_t w : widths) {
    Layer l;
    l.weight = Matrix(w, fan_in);
    l.bias.assign(w, 0.0);
    l.alpha = alpha;
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + w));
    for (double& x : l.weight.data) x = rng.uniform(-bound, bound);
    net.layers.push_back(std::move(l));
    fan_in = w;
  }
  net.validate();
  return net;
}

void DenseNet::validate() const {
  if (layers.empty()) throw std::invalid_argument("DenseNet: no layers");
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const Layer& l = layers[j];
    if (l.weight.rows == 0 || l.weight.cols == 0)
      throw std::invalid_argument("DenseNet: empty layer");
    if (l.bias.size() != l.weight.rows)
      throw std::invalid_argument("DenseNet: bias/weight shape mismatch");
    if (j > 0 && l.weight.cols != layers[j - 1].weight.rows)
      throw std::invalid_argument("DenseNet: layer dimension chain broken");
    if (!(l.alpha >= 0.0 && l.alpha <= 1.0))
      throw std::invalid_argument("DenseNet: alpha outside [0,1]");
  }
}

Vec forward(const DenseNet& net, ConstSpan x, ForwardTape* tape) {
  if (x.size() != net.input_dim())
    throw std::invalid_argument("forward: input dimension mismatch");
  if (tape) {
    tape->input.assign(x.begin(), x.end());
    tape->pre.resize(net.layers.size());
    tape->post.resize(net.layers.size());
  }
  Vec cur(x.begin(), x.end());
  Vec z;
  for (std::size_t j = 0; j < net.layers.size(); ++j) {
    const Layer& l = net.layers[j];
    matvec(l.weight, cur, z);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += l.bias[i];
    if (tape) tape->pre[j] = z;
    const bool last = (j + 1 == net.layers.size());
    if (!last)
      for (double& t : z) t = activation(l.alpha, t);
    if (tape) tape->post[j] = z;
    cur.swap(z);
  }
  return cur;
}

GradientBundle GradientBundle::zeros_like(const DenseNet& net) {
  GradientBundle g;
  g.weight.reserve(net.layers.size());
  g.bias.reserve(net.layers.size());
  for (const Layer& l : net.layers) {
    g.weight.emplace_back(l.weight.rows, l.weight.cols);
    g.bias.emplace_back(l.bias.size(), 0.0);
  }
  return g;
}

void GradientBundle::add(const GradientBundle& other) {
  for (std::size_t j = 0; j < weight.size(); ++j) {
    for (std::size_t i = 0; i < weight[j].data.size(); ++i)
      weight[j].data[i] += other.weight[j].data[i];
    for (std::size_t i = 0; i < bias[j].size(); ++i) bias[j][i] += other.bias[j][i];
  }
}

void GradientBundle::scale(double a) {
  for (auto& m : weight)
    for (double& x : m.data) x *= a;
  for (auto& b : bias)
    for (double& x : b) x *= a;
}

void GradientBundle::set_zero() {
  for (auto& m : weight) std::fill(m.data.begin(), m.data.end(), 0.0);
  for (auto& b : bias) std::fill(b.begin(), b.end(), 0.0);
}

double GradientBundle::max_abs() const {
  double m = 0.0;
  for (const auto& w : weight)
    for (double x : w.data) m = std::max(m, std::abs(x));
  for (const auto& b : bias)
    for (double x : b) m = std::max(m, std::abs(x));
  return m;
}

Vec backward(const DenseNet& net, const ForwardTape& tape, ConstSpan upstream,
             GradientBundle& grads) {
  const std::size_t J = net.layers.size();
  if (upstream.size() != net.output_dim())
    throw std::invalid_argument("backward: upstream dimension mismatch");
  if (tape.pre.size() != J || tape.post.size() != J ||
      tape.input.size() != net.input_dim())
    throw std::invalid_argument("backward: tape does not match the network");
  for (std::size_t j = 0; j < J; ++j)
    if (tape.pre[j].size() != net.layers[j].weight.rows ||
        tape.post[j].size() != net.layers[j].weight.rows)
      throw std::invalid_argument("backward: tape does not match the network");
  Vec delta(upstream.begin(), upstream.end());  // dL/dz at the current layer
  Vec next;
  for (std::size_t jj = J; jj-- > 0;) {
    const Layer& l = net.layers[jj];
    if (jj + 1 < J)  // hidden layer: pass delta through the activation derivative
      for (std::size_t i = 0; i < delta.size(); ++i)
        delta[i] *= activation_grad(l.alpha, tape.pre[jj][i]);
    ConstSpan below = jj == 0 ? ConstSpan(tape.input) : ConstSpan(tape.post[jj - 1]);
    add_outer(grads.weight[jj], delta, below);
    axpy(1.0, delta, grads.bias[jj]);
    matvec_transpose(l.weight, delta, next);
    delta.swap(next);
  }
  return delta;  // dL/dinput
}

GradientBundle backward(const DenseNet& net, const ForwardTape& tape, ConstSpan upstream) {
  GradientBundle g = GradientBundle::zeros_like(net);
  backward(net, tape, upstream, g);
  return g;
}

}  // namespace pattn
