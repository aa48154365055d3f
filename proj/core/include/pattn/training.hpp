#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pattn/model.hpp"
#include "pattn/optim.hpp"

namespace pattn {

enum class HiddenWeightMode { trained, frozen_random };
enum class LossKind { nearest_label_mse, wasserstein };

struct TrainConfig {
  std::size_t pool_size = 512;   // candidate points drawn from the constraint set
  std::size_t slots = 64;        // attention slots (anchors)
  std::size_t per_slot = 1;      // particles per slot
  std::size_t epochs = 300;      // zero epochs is legal: nets stay at init
  std::size_t batch_size = 32;
  OptimizerConfig optimizer{};
  HiddenWeightMode hidden_mode = HiddenWeightMode::trained;
  LossKind loss = LossKind::nearest_label_mse;
  bool label_cross_entropy = false;  // swap the squared label loss for cross-entropy
  std::uint64_t seed = 0;

  // Architecture.  Hidden widths exclude the output layer.
  std::vector<std::size_t> encoder_hidden{64};
  std::size_t latent_dim = 2;
  std::vector<std::size_t> head_hidden{64};
  std::vector<std::size_t> mlp_hidden{64, 64, 64};
  double alpha = 1.0;      // attention nets: smooth blend
  double mlp_alpha = 0.0;  // baseline: piecewise-linear blend

  void validate() const;  // ConfigError on violation (e.g. slots*per_slot > pool)
};

/// Row t marks every slot whose anchor is (tied-)nearest to output t.
struct LabelMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint8_t> data;

  bool at(std::size_t t, std::size_t n) const { return data[t * cols + n] != 0; }
  void validate() const;  // every row has at least one set bit
};

struct LossTrace {
  std::vector<double> per_epoch;  // mean per-sample loss
};

/// k-means++ seeding, 20 Lloyd iterations, then each center snaps to its
/// nearest pool member (ties toward the lower index), so anchors are always
/// points of the pool.
std::vector<Vec> kmeans_anchors(const std::vector<Vec>& pool, std::size_t k, Rng& rng);

/// Per anchor, its per_slot nearest pool points (ties toward the lower pool
/// index).  Pool points may appear under several anchors.
ParticleArray gather_nearest(const std::vector<Vec>& pool, const std::vector<Vec>& anchors,
                             std::size_t per_slot);

struct ParticleSelection {
  std::vector<Vec> anchors;
  ParticleArray particles;
};

/// Anchors via kmeans_anchors, particles via gather_nearest.  Throws
/// ConfigError when slots*per_slot exceeds the pool size.
ParticleSelection select_particles(const std::vector<Vec>& pool, std::size_t slots,
                                   std::size_t per_slot, Rng& rng);

/// The particle construction the trainers use: pool sampled from the set and
/// particles selected, all from streams derived from cfg.seed.
ParticleSelection build_particles(const ConstraintSet& set, const TrainConfig& cfg);

/// Nearest-anchor indicators with an absolute tie tolerance of 1e-12.
LabelMatrix make_labels(const std::vector<Vec>& outputs, const std::vector<Vec>& anchors);

/// Minimizes mean_t |labels_t - softmax(f(x_t))|^2 over the stacked nets
/// (applied in order).  frozen_random trains only the final layer of the last
/// net, via cached features.  Throws DivergenceError on non-finite loss.
LossTrace fit_classifier(std::vector<DenseNet*> stack, const std::vector<Vec>& inputs,
                         const LabelMatrix& labels, const TrainConfig& cfg, Rng& rng);
/// Single-net convenience overload.
LossTrace fit_classifier(DenseNet& net, const std::vector<Vec>& inputs,
                         const LabelMatrix& labels, const TrainConfig& cfg, Rng& rng);

/// Reference path for the frozen mode: full backprop with non-final gradients
/// masked to zero.  Bit-identical to fit_classifier's cached-feature path.
LossTrace fit_classifier_masked_reference(std::vector<DenseNet*> stack,
                                          const std::vector<Vec>& inputs,
                                          const LabelMatrix& labels, const TrainConfig& cfg,
                                          Rng& rng);

struct WassersteinGrad {
  double loss = 0.0;  // mean over the batch of W1(prediction, point mass at y)
  GradientBundle encoder;
  GradientBundle head;
};

/// Closed-form 1-Wasserstein training objective and its exact gradient.
WassersteinGrad wasserstein_loss_and_grad(const ProbabilisticTransformer& model,
                                          const std::vector<Vec>& batch_x,
                                          const std::vector<Vec>& batch_y);

/// Full training pipeline: sample pool from the set, pick anchors and
/// particles, build labels, fit encoder+head under cfg.loss.
ProbabilisticTransformer train_probabilistic_transformer(
    const std::vector<Vec>& X, const std::vector<Vec>& Y,
    std::shared_ptr<const ConstraintSet> set, const TrainConfig& cfg,
    LossTrace* trace = nullptr);

/// Same scaffold, but fits by mean-squared error of the classical attention
/// readout (convex combination of slot means).
ProbabilisticTransformer train_classical_transformer(
    const std::vector<Vec>& X, const std::vector<Vec>& Y,
    std::shared_ptr<const ConstraintSet> set, const TrainConfig& cfg,
    LossTrace* trace = nullptr);

/// Unconstrained regression baseline under mean squared error.
MlpRegressor train_baseline_mlp(const std::vector<Vec>& X, const std::vector<Vec>& Y,
                                const TrainConfig& cfg, LossTrace* trace = nullptr);

}  // namespace pattn
