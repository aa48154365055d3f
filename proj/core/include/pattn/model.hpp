#pragma once

#include <memory>
#include <string>

#include "pattn/measures.hpp"
#include "pattn/net.hpp"

namespace pattn {

/// Attention model whose predictions are measures supported on a fixed
/// particle block: encoder maps the input to a latent code, the decoder head
/// maps the code to one logit per particle slot.
struct ProbabilisticTransformer {
  DenseNet encoder;
  DenseNet head;
  ParticleArray particles;
  std::shared_ptr<const ConstraintSet> constraint_set;

  /// Checks dimension chaining (head output == particle slots, particle dim
  /// == ambient dim) and that every particle lies in the constraint set.
  void validate() const;
  Vec logits(ConstSpan x) const;
};

/// Predicted measure at input x (probabilistic attention over the particles).
DiscreteMeasure predict_measure(const ProbabilisticTransformer& model, ConstSpan x);

/// Expectation readout; coincides with classical attention output.
Vec predict_mean(const ProbabilisticTransformer& model, ConstSpan x);

/// Geodesic barycenter readout; requires geodesic ops on the constraint set
/// (CapabilityError otherwise) and propagates GeodesicBallError.
Vec predict_frechet(const ProbabilisticTransformer& model, ConstSpan x);

/// Like predict_frechet, but restricted to the atoms carrying the dominant
/// `mass` share of weight; falls back to the mode when even those are too
/// spread for geodesic averaging.  Always returns a point of the set.
Vec predict_frechet_trimmed(const ProbabilisticTransformer& model, ConstSpan x,
                            double mass = 0.999);

/// Highest-weight particle readout.
Vec predict_mode(const ProbabilisticTransformer& model, ConstSpan x);

/// softmax(logits)^T (slot means); equals predict_mean by construction and is
/// exposed separately as the classical-attention reference path.
Vec classical_attention_predict(const ProbabilisticTransformer& model, ConstSpan x);

/// Plain regression baseline.
struct MlpRegressor {
  DenseNet net;
};

Vec predict(const MlpRegressor& model, ConstSpan x);

std::string model_to_json_string(const ProbabilisticTransformer& model);
ProbabilisticTransformer model_from_json_string(const std::string& text);
std::string model_to_json_string(const MlpRegressor& model);
MlpRegressor mlp_from_json_string(const std::string& text);

}  // namespace pattn
