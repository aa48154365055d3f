#include "pattn/optim.hpp"

#include <cmath>
#include <stdexcept>

#include "pattn/errors.hpp"

namespace pattn {

void OptimizerConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("optimizer: lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw ConfigError("optimizer: betas must lie in [0,1)");
  if (!(eps > 0.0)) throw ConfigError("optimizer: eps must be positive");
}

OptimizerState OptimizerState::zeros_like(const DenseNet& net) {
  OptimizerState s;
  for (const Layer& l : net.layers) {
    s.m_w.emplace_back(l.weight.rows, l.weight.cols);
    s.v_w.emplace_back(l.weight.rows, l.weight.cols);
    s.m_b.emplace_back(l.bias.size(), 0.0);
    s.v_b.emplace_back(l.bias.size(), 0.0);
  }
  return s;
}

namespace {

void check_shapes(const DenseNet& net, const GradientBundle& g) {
  if (g.weight.size() != net.layers.size() || g.bias.size() != net.layers.size())
    throw std::invalid_argument("optimizer_step: gradient layer count mismatch");
  for (std::size_t j = 0; j < net.layers.size(); ++j) {
    if (g.weight[j].rows != net.layers[j].weight.rows ||
        g.weight[j].cols != net.layers[j].weight.cols ||
        g.bias[j].size() != net.layers[j].bias.size())
      throw std::invalid_argument("optimizer_step: gradient shape mismatch");
  }
}

void adam_update(double* p, const double* g, double* m, double* v, std::size_t n,
                 const OptimizerConfig& c, double bc1, double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
  }
}

}  // namespace

void optimizer_step(DenseNet& net, const GradientBundle& grads, OptimizerState& state,
                    const OptimizerConfig& cfg) {
  cfg.validate();
  check_shapes(net, grads);
  if (cfg.kind == OptimizerKind::adam && state.m_w.empty()) {
    auto keep = state.step_count;
    state = OptimizerState::zeros_like(net);
    state.step_count = keep;
  }
  state.step_count += 1;
  if (cfg.kind == OptimizerKind::sgd) {
    for (std::size_t j = 0; j < net.layers.size(); ++j) {
      Layer& l = net.layers[j];
      for (std::size_t i = 0; i < l.weight.data.size(); ++i)
        l.weight.data[i] -= cfg.lr * grads.weight[j].data[i];
      for (std::size_t i = 0; i < l.bias.size(); ++i)
        l.bias[i] -= cfg.lr * grads.bias[j][i];
    }
    return;
  }
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step_count));
  for (std::size_t j = 0; j < net.layers.size(); ++j) {
    Layer& l = net.layers[j];
    adam_update(l.weight.data.data(), grads.weight[j].data.data(),
                state.m_w[j].data.data(), state.v_w[j].data.data(),
                l.weight.data.size(), cfg, bc1, bc2);
    adam_update(l.bias.data(), grads.bias[j].data(), state.m_b[j].data(),
                state.v_b[j].data(), l.bias.size(), cfg, bc1, bc2);
  }
}

}  // namespace pattn
