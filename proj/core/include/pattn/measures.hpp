#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pattn/constraints.hpp"
#include "pattn/linalg.hpp"

namespace pattn {

/// Finitely supported probability measure: weights are nonnegative and sum
/// to one within 1e-12, atoms share one ambient dimension.
struct DiscreteMeasure {
  std::vector<Vec> atoms;
  Vec weights;

  std::size_t size() const { return atoms.size(); }
  std::size_t dim() const { return atoms.empty() ? 0 : atoms.front().size(); }
  /// Throws std::invalid_argument when the invariants above fail.
  void validate() const;
};

/// N x Q x m particle block: Q candidate points per attention slot.
struct ParticleArray {
  std::size_t count = 0;       // N
  std::size_t per_slot = 0;    // Q
  std::size_t dim = 0;         // m
  std::vector<double> data;    // slot-major, then candidate, then coordinate

  ParticleArray() = default;
  ParticleArray(std::size_t n, std::size_t q, std::size_t m)
      : count(n), per_slot(q), dim(m), data(n * q * m, 0.0) {
    if (n == 0 || q == 0 || m == 0)
      throw std::invalid_argument("ParticleArray: all dimensions must be positive");
  }

  ConstSpan at(std::size_t n, std::size_t q) const {
    return {data.data() + (n * per_slot + q) * dim, dim};
  }
  std::span<double> at(std::size_t n, std::size_t q) {
    return {data.data() + (n * per_slot + q) * dim, dim};
  }
  /// Mean of the Q candidates in slot n.
  Vec slot_mean(std::size_t n) const;
};

/// Probabilistic attention: softmax the N logits, spread each slot's weight
/// uniformly over its Q particles.  Atom order is slot-major.
DiscreteMeasure p_attention(ConstSpan logits, const ParticleArray& particles);

/// Mean of the measure (barycenter under the Euclidean metric).
Vec expectation(const DiscreteMeasure& mu);

/// 1-Wasserstein distance from mu to the point mass at y; closed form
/// sum_i w_i |atom_i - y|.
double w1_to_pointmass(const DiscreteMeasure& mu, ConstSpan y);

/// Highest-weight atom; ties resolved toward the lowest index.
Vec mode(const DiscreteMeasure& mu);

struct FrechetOptions {
  int max_iter = 200;
  double step = 1.0;
  double tol = 1e-10;  // on the Riemannian gradient norm
};

/// Weighted geodesic barycenter by fixed-step Riemannian gradient descent.
/// Requires all pairwise atom distances (over positive-weight atoms) to stay
/// below ops.spread_limit, else GeodesicBallError.  Non-convergence raises
/// ConvergenceError carrying the last gradient norm.
Vec frechet_mean(const DiscreteMeasure& mu, const GeodesicOps& ops,
                 const FrechetOptions& opts = {});

/// Smallest highest-weight sub-measure holding at least `mass` of the total,
/// renormalized.  Ties broken toward lower atom index.
DiscreteMeasure top_mass(const DiscreteMeasure& mu, double mass);

std::string measure_to_json_string(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json_string(const std::string& text);

}  // namespace pattn
