#include "pattn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "pattn/errors.hpp"
#include "pattn/net.hpp"

namespace pattn {

void DiscreteMeasure::validate() const {
  if (atoms.empty()) throw std::invalid_argument("measure: no atoms");
  if (weights.size() != atoms.size())
    throw std::invalid_argument("measure: atom/weight count mismatch");
  const std::size_t m = atoms.front().size();
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].size() != m) throw std::invalid_argument("measure: ragged atoms");
    if (!all_finite(atoms[i])) throw std::invalid_argument("measure: non-finite atom");
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("measure: negative weight");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("measure: weights do not sum to 1");
}

Vec ParticleArray::slot_mean(std::size_t n) const {
  Vec m(dim, 0.0);
  for (std::size_t q = 0; q < per_slot; ++q) axpy(1.0 / per_slot, at(n, q), m);
  return m;
}

DiscreteMeasure p_attention(ConstSpan logits, const ParticleArray& particles) {
  if (logits.size() != particles.count)
    throw std::invalid_argument("p_attention: logit count != particle slots");
  const Vec s = softmax(logits);
  DiscreteMeasure mu;
  mu.atoms.reserve(particles.count * particles.per_slot);
  mu.weights.reserve(particles.count * particles.per_slot);
  const double invq = 1.0 / static_cast<double>(particles.per_slot);
  for (std::size_t n = 0; n < particles.count; ++n)
    for (std::size_t q = 0; q < particles.per_slot; ++q) {
      ConstSpan a = particles.at(n, q);
      mu.atoms.emplace_back(a.begin(), a.end());
      mu.weights.push_back(s[n] * invq);
    }
  return mu;
}

Vec expectation(const DiscreteMeasure& mu) {
  mu.validate();
  Vec m(mu.dim(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) axpy(mu.weights[i], mu.atoms[i], m);
  return m;
}

double w1_to_pointmass(const DiscreteMeasure& mu, ConstSpan y) {
  mu.validate();
  if (y.size() != mu.dim()) throw std::invalid_argument("w1_to_pointmass: dim mismatch");
  double w1 = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) w1 += mu.weights[i] * distance(mu.atoms[i], y);
  return w1;
}

Vec mode(const DiscreteMeasure& mu) {
  mu.validate();
  std::size_t best = 0;
  for (std::size_t i = 1; i < mu.size(); ++i)
    if (mu.weights[i] > mu.weights[best]) best = i;
  return mu.atoms[best];
}

Vec frechet_mean(const DiscreteMeasure& mu, const GeodesicOps& ops,
                 const FrechetOptions& opts) {
  mu.validate();
  // Spread precondition: geodesic averaging is only well posed when the
  // (effective) support sits inside a small enough ball.
  if (std::isfinite(ops.spread_limit)) {
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu.weights[i] == 0.0) continue;
      for (std::size_t j = i + 1; j < mu.size(); ++j) {
        if (mu.weights[j] == 0.0) continue;
        if (ops.dist(mu.atoms[i], mu.atoms[j]) > ops.spread_limit)
          throw GeodesicBallError("frechet_mean: atom spread exceeds the geodesic ball bound");
      }
    }
  }

  Vec x;
  try {
    Vec extrinsic(mu.dim(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) axpy(mu.weights[i], mu.atoms[i], extrinsic);
    x = ops.project(extrinsic);
  } catch (const std::domain_error&) {
    x = mu.atoms.front();  // degenerate extrinsic mean; start from an atom
  }

  double grad_norm = 0.0;
  Vec v(mu.dim());
  for (int it = 0; it < opts.max_iter; ++it) {
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu.weights[i] == 0.0) continue;
      axpy(mu.weights[i], ops.log(x, mu.atoms[i]), v);
    }
    grad_norm = 2.0 * norm(v);  // gradient of sum_i w_i dist^2(x, atom_i)
    if (grad_norm <= opts.tol) return x;
    x = ops.exp(x, opts.step * ConstSpan(v));
  }
  throw ConvergenceError("frechet_mean: no convergence within iteration budget", grad_norm);
}

DiscreteMeasure top_mass(const DiscreteMeasure& mu, double mass) {
  mu.validate();
  if (!(mass > 0.0 && mass <= 1.0))
    throw std::invalid_argument("top_mass: mass must lie in (0, 1]");
  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mu.weights[a] > mu.weights[b]; });
  DiscreteMeasure out;
  double kept = 0.0;
  for (std::size_t i : order) {
    out.atoms.push_back(mu.atoms[i]);
    out.weights.push_back(mu.weights[i]);
    kept += mu.weights[i];
    if (kept >= mass) break;
  }
  for (double& w : out.weights) w /= kept;
  return out;
}

std::string measure_to_json_string(const DiscreteMeasure& mu) {
  mu.validate();
  nlohmann::json j;
  j["atoms"] = mu.atoms;
  j["weights"] = mu.weights;
  return j.dump();
}

DiscreteMeasure measure_from_json_string(const std::string& text) {
  DiscreteMeasure mu;
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    mu.atoms = j.at("atoms").get<std::vector<Vec>>();
    mu.weights = j.at("weights").get<Vec>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("measure: bad JSON: ") + e.what());
  }
  mu.validate();
  return mu;
}

}  // namespace pattn
