#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pattn/linalg.hpp"
#include "pattn/rng.hpp"

namespace pattn {

/// Clamp every coordinate to [-1, 1]; nearest point of the unit box.
Vec box_project(ConstSpan y);
/// y / max(1, |y|); nearest point of the unit disk/ball.
Vec disk_project(ConstSpan y);

/// Geodesic distance on the unit sphere: arccos of the clamped inner product.
/// Inputs must be unit vectors within 1e-9 or std::domain_error is thrown.
double sphere_dist(ConstSpan u, ConstSpan v);
/// Tangent vector at base pointing to y with length sphere_dist(base, y).
/// Rejects near-antipodal pairs (distance > pi - 1e-6) with std::domain_error.
Vec sphere_log(ConstSpan base, ConstSpan y);
/// Follows the geodesic from base along tangent vector v; result is unit norm.
/// v must be tangent at base within 1e-9 or std::domain_error is thrown.
Vec sphere_exp(ConstSpan base, ConstSpan v);

/// Interface consumed by geodesic averaging; bundles the operations one
/// manifold backend needs.  spread_limit bounds the admissible pairwise
/// distance between atoms (infinity when averaging is globally well posed).
struct GeodesicOps {
  std::function<double(ConstSpan, ConstSpan)> dist;
  std::function<Vec(ConstSpan, ConstSpan)> log;   // log(base, y)
  std::function<Vec(ConstSpan, ConstSpan)> exp;   // exp(base, v)
  std::function<Vec(ConstSpan)> project;          // ambient point -> manifold
  double spread_limit = 0.0;
};

GeodesicOps sphere_geodesic_ops();
GeodesicOps euclidean_geodesic_ops();

/// Parametric plane curves on t in [-10, 10].
struct CurveSpec {
  enum class Family { rose, variety };
  Family family = Family::rose;
  /// Invertible 2x2 mixing matrices for the variety family; each layer maps
  /// p -> tanh(W p).  Empty for the rose.
  std::vector<Matrix> homeo;
};

/// Draws the variety's three mixing layers: entries iid standard normal,
/// redrawn until |det| >= 0.1.
CurveSpec random_variety_spec(Rng& rng);

/// Point on the curve at parameter t; throws std::domain_error outside [-10, 10].
Vec curve_eval(const CurveSpec& spec, double t);
/// Applies the mixing layers only (identity for the rose).
Vec homeo_forward(const CurveSpec& spec, ConstSpan p);
/// Inverse of homeo_forward; defined for points in its range.
Vec homeo_inverse(const CurveSpec& spec, ConstSpan p);

/// A constraint set is a capability bundle: every set can measure distance
/// and sample points; projection and geodesic ops exist only where the
/// geometry provides them, and asking for a missing capability throws
/// CapabilityError.
class ConstraintSet {
 public:
  enum class Kind { box, disk, sphere, curve, data_backed };

  static std::shared_ptr<const ConstraintSet> box2();
  static std::shared_ptr<const ConstraintSet> disk2();
  static std::shared_ptr<const ConstraintSet> sphere3();
  /// reference_samples controls the dense parameter grid used for distance
  /// queries (lower bound enforced: 100000).
  static std::shared_ptr<const ConstraintSet> curve(CurveSpec spec,
                                                    std::size_t reference_samples = 100000);
  /// Same geometry as `base`, but sampling draws (without replacement) from
  /// the given pool of points instead of the analytic sampler.
  static std::shared_ptr<const ConstraintSet> data_backed(
      std::shared_ptr<const ConstraintSet> base, std::vector<Vec> pool);

  Kind kind() const { return kind_; }
  std::size_t ambient_dim() const { return dim_; }

  /// Euclidean distance from y to the set (0 for members, up to rounding).
  double distance(ConstSpan y) const;
  /// distance(y) <= tol; tol defaults to membership_tolerance().
  bool member(ConstSpan y) const { return distance(y) <= tolerance_; }
  bool member(ConstSpan y, double tol) const { return distance(y) <= tol; }
  /// 1e-9 for analytic sets; twice the max adjacent reference-point spacing
  /// for curves.
  double membership_tolerance() const { return tolerance_; }

  bool has_projector() const;
  Vec project(ConstSpan y) const;

  bool has_geodesic_ops() const;
  const GeodesicOps& geodesic_ops() const;

  /// Draws `count` points of the set.
  std::vector<Vec> sample(Rng& rng, std::size_t count) const;

  const CurveSpec& curve_spec() const;  // CapabilityError unless kind()==curve
  const std::vector<Vec>& pool() const;  // CapabilityError unless data_backed

  std::string to_json_string() const;
  static std::shared_ptr<const ConstraintSet> from_json_string(const std::string& text);

 private:
  ConstraintSet() = default;

  Kind kind_ = Kind::box;
  std::size_t dim_ = 2;
  double tolerance_ = 1e-9;
  std::shared_ptr<GeodesicOps> geo_;             // sphere only
  std::shared_ptr<const CurveSpec> spec_;        // curve only
  std::vector<double> reference_xy_;             // curve only: dense samples, interleaved
  std::size_t reference_count_ = 0;              // curve only
  std::shared_ptr<const ConstraintSet> base_;    // data_backed only
  std::vector<Vec> pool_;                        // data_backed only
};

}  // namespace pattn
