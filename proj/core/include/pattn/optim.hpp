#pragma once

#include <cstdint>
#include <vector>

#include "pattn/net.hpp"

namespace pattn {

enum class OptimizerKind { sgd, adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;
};

/// First/second moment accumulators (used by Adam; empty cost for SGD).
struct OptimizerState {
  std::int64_t step_count = 0;
  std::vector<Matrix> m_w, v_w;
  std::vector<Vec> m_b, v_b;

  static OptimizerState zeros_like(const DenseNet& net);
};

/// Applies one update in place.  Throws std::invalid_argument if gradient
/// shapes do not mirror the network.
void optimizer_step(DenseNet& net, const GradientBundle& grads, OptimizerState& state,
                    const OptimizerConfig& cfg);

}  // namespace pattn
