#include "pattn/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "pattn/errors.hpp"

namespace pattn {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kCurveLo = -10.0;
constexpr double kCurveHi = 10.0;

void require_unit(ConstSpan u, const char* who) {
  if (std::abs(norm(u) - 1.0) > 1e-9)
    throw std::domain_error(std::string(who) + ": input is not unit norm");
}
}  // namespace

Vec box_project(ConstSpan y) {
  Vec r(y.begin(), y.end());
  for (double& x : r) x = std::clamp(x, -1.0, 1.0);
  return r;
}

Vec disk_project(ConstSpan y) {
  const double n = norm(y);
  if (n <= 1.0) return Vec(y.begin(), y.end());
  Vec r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] / n;
  return r;
}

double sphere_dist(ConstSpan u, ConstSpan v) {
  require_unit(u, "sphere_dist");
  require_unit(v, "sphere_dist");
  return std::acos(std::clamp(dot(u, v), -1.0, 1.0));
}

Vec sphere_log(ConstSpan base, ConstSpan y) {
  const double theta = sphere_dist(base, y);
  if (theta > kPi - 1e-6)
    throw std::domain_error("sphere_log: points are (nearly) antipodal");
  Vec v(base.size());
  if (theta < 1e-12) return v;  // zero tangent vector
  const double c = std::cos(theta);
  const double scale = theta / std::sin(theta);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * (y[i] - c * base[i]);
  return v;
}

Vec sphere_exp(ConstSpan base, ConstSpan v) {
  require_unit(base, "sphere_exp");
  const double vn = norm(v);
  if (std::abs(dot(base, v)) > 1e-9 * (1.0 + vn))
    throw std::domain_error("sphere_exp: v is not tangent at base");
  const double c = std::cos(vn);
  const double s = vn < 1e-8 ? 1.0 - vn * vn / 6.0 : std::sin(vn) / vn;
  Vec r(base.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = c * base[i] + s * v[i];
  const double rn = norm(r);
  for (double& x : r) x /= rn;
  return r;
}

GeodesicOps sphere_geodesic_ops() {
  GeodesicOps ops;
  ops.dist = [](ConstSpan u, ConstSpan v) { return sphere_dist(u, v); };
  ops.log = [](ConstSpan b, ConstSpan y) { return sphere_log(b, y); };
  ops.exp = [](ConstSpan b, ConstSpan v) { return sphere_exp(b, v); };
  ops.project = [](ConstSpan y) {
    const double n = norm(y);
    if (n < 1e-12) throw std::domain_error("sphere projection undefined at origin");
    Vec r(y.begin(), y.end());
    for (double& x : r) x /= n;
    return r;
  };
  ops.spread_limit = kPi / 2.0;
  return ops;
}

GeodesicOps euclidean_geodesic_ops() {
  GeodesicOps ops;
  ops.dist = [](ConstSpan u, ConstSpan v) { return distance(u, v); };
  ops.log = [](ConstSpan b, ConstSpan y) { return y - b; };
  ops.exp = [](ConstSpan b, ConstSpan v) { return b + v; };
  ops.project = [](ConstSpan y) { return Vec(y.begin(), y.end()); };
  ops.spread_limit = std::numeric_limits<double>::infinity();
  return ops;
}

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

Vec curve_base_point(const CurveSpec& spec, double t) {
  if (spec.family == CurveSpec::Family::rose) {
    const double c = std::cos(t);
    const double r = 2.0 * c * c + 1.0;
    return {r * std::cos(t / 3.0), r * std::sin(t / 3.0)};
  }
  const double s = sinc(t + 1.0);
  return {s * std::cos(t / 2.0), s * std::sin(t / 2.0)};
}

}  // namespace

CurveSpec random_variety_spec(Rng& rng) {
  CurveSpec spec;
  spec.family = CurveSpec::Family::variety;
  for (int l = 0; l < 3; ++l) {
    Matrix w(2, 2);
    do {
      for (double& x : w.data) x = rng.normal();
    } while (std::abs(w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0)) < 0.1);
    spec.homeo.push_back(std::move(w));
  }
  return spec;
}

Vec homeo_forward(const CurveSpec& spec, ConstSpan p) {
  Vec cur(p.begin(), p.end());
  Vec tmp;
  for (const Matrix& w : spec.homeo) {
    matvec(w, cur, tmp);
    for (double& x : tmp) x = std::tanh(x);
    cur.swap(tmp);
  }
  return cur;
}

Vec homeo_inverse(const CurveSpec& spec, ConstSpan p) {
  Vec cur(p.begin(), p.end());
  for (auto it = spec.homeo.rbegin(); it != spec.homeo.rend(); ++it) {
    for (double& x : cur) {
      if (std::abs(x) >= 1.0)
        throw std::domain_error("homeo_inverse: point outside the image of tanh");
      x = std::atanh(x);
    }
    cur = solve2x2(*it, cur);
  }
  return cur;
}

Vec curve_eval(const CurveSpec& spec, double t) {
  if (!(t >= kCurveLo && t <= kCurveHi))
    throw std::domain_error("curve_eval: parameter outside [-10, 10]");
  Vec p = curve_base_point(spec, t);
  if (spec.family == CurveSpec::Family::variety) p = homeo_forward(spec, p);
  return p;
}

// ---------------------------------------------------------------------------
// ConstraintSet

std::shared_ptr<const ConstraintSet> ConstraintSet::box2() {
  auto s = std::shared_ptr<ConstraintSet>(new ConstraintSet());
  s->kind_ = Kind::box;
  s->dim_ = 2;
  s->tolerance_ = 1e-9;
  return s;
}

std::shared_ptr<const ConstraintSet> ConstraintSet::disk2() {
  auto s = std::shared_ptr<ConstraintSet>(new ConstraintSet());
  s->kind_ = Kind::disk;
  s->dim_ = 2;
  s->tolerance_ = 1e-9;
  return s;
}

std::shared_ptr<const ConstraintSet> ConstraintSet::sphere3() {
  auto s = std::shared_ptr<ConstraintSet>(new ConstraintSet());
  s->kind_ = Kind::sphere;
  s->dim_ = 3;
  s->tolerance_ = 1e-9;
  s->geo_ = std::make_shared<GeodesicOps>(sphere_geodesic_ops());
  return s;
}

std::shared_ptr<const ConstraintSet> ConstraintSet::curve(CurveSpec spec,
                                                          std::size_t reference_samples) {
  const std::size_t m = std::max<std::size_t>(reference_samples, 100000);
  auto s = std::shared_ptr<ConstraintSet>(new ConstraintSet());
  s->kind_ = Kind::curve;
  s->dim_ = 2;
  s->spec_ = std::make_shared<const CurveSpec>(std::move(spec));
  s->reference_count_ = m;
  s->reference_xy_.resize(2 * m);
  double max_gap = 0.0;
  Vec prev;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = kCurveLo + (kCurveHi - kCurveLo) * static_cast<double>(i) /
                                    static_cast<double>(m - 1);
    Vec p = curve_eval(*s->spec_, t);
    s->reference_xy_[2 * i] = p[0];
    s->reference_xy_[2 * i + 1] = p[1];
    if (i > 0) max_gap = std::max(max_gap, pattn::distance(p, prev));
    prev = std::move(p);
  }
  s->tolerance_ = 2.0 * max_gap;
  return s;
}

std::shared_ptr<const ConstraintSet> ConstraintSet::data_backed(
    std::shared_ptr<const ConstraintSet> base, std::vector<Vec> pool) {
  if (!base) throw std::invalid_argument("data_backed: null base set");
  if (pool.empty()) throw std::invalid_argument("data_backed: empty pool");
  for (const Vec& p : pool)
    if (p.size() != base->ambient_dim())
      throw std::invalid_argument("data_backed: pool point dimension mismatch");
  auto s = std::shared_ptr<ConstraintSet>(new ConstraintSet());
  s->kind_ = Kind::data_backed;
  s->dim_ = base->ambient_dim();
  s->tolerance_ = base->membership_tolerance();
  s->base_ = std::move(base);
  s->pool_ = std::move(pool);
  return s;
}

namespace {
// Golden-section minimization of f on [a, b]; f need not be unimodal, the
// caller guards by taking the min with a grid value.
template <typename F>
double golden_min(F f, double a, double b, int iters = 60) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}
}  // namespace

double ConstraintSet::distance(ConstSpan y) const {
  if (y.size() != dim_) throw std::invalid_argument("distance: dimension mismatch");
  if (!all_finite(y)) throw std::domain_error("distance: non-finite point");
  switch (kind_) {
    case Kind::box:
      return pattn::distance(y, box_project(y));
    case Kind::disk:
      return std::max(0.0, norm(y) - 1.0);
    case Kind::sphere:
      return std::abs(norm(y) - 1.0);
    case Kind::data_backed:
      return base_->distance(y);
    case Kind::curve: {
      const double* xy = reference_xy_.data();
      const std::size_t m = reference_count_;
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_i = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const double dx = y[0] - xy[2 * i];
        const double dy = y[1] - xy[2 * i + 1];
        const double d2 = dx * dx + dy * dy;
        if (d2 < best) {
          best = d2;
          best_i = i;
        }
      }
      const double step = (kCurveHi - kCurveLo) / static_cast<double>(m - 1);
      const double ta = std::max(kCurveLo, kCurveLo + step * (static_cast<double>(best_i) - 1.0));
      const double tb = std::min(kCurveHi, kCurveLo + step * (static_cast<double>(best_i) + 1.0));
      const CurveSpec& spec = *spec_;
      const double refined = golden_min(
          [&](double t) { return squared_distance(y, curve_eval(spec, t)); }, ta, tb);
      return std::sqrt(std::min(best, refined));
    }
  }
  throw std::logic_error("distance: unknown kind");
}

bool ConstraintSet::has_projector() const {
  switch (kind_) {
    case Kind::box:
    case Kind::disk:
    case Kind::sphere:
      return true;
    case Kind::data_backed:
      return base_->has_projector();
    case Kind::curve:
      return false;
  }
  return false;
}

Vec ConstraintSet::project(ConstSpan y) const {
  if (y.size() != dim_) throw std::invalid_argument("project: dimension mismatch");
  switch (kind_) {
    case Kind::box:
      return box_project(y);
    case Kind::disk:
      return disk_project(y);
    case Kind::sphere:
      return geo_->project(y);
    case Kind::data_backed:
      return base_->project(y);
    case Kind::curve:
      throw CapabilityError("project: curve sets expose no projector");
  }
  throw std::logic_error("project: unknown kind");
}

bool ConstraintSet::has_geodesic_ops() const {
  if (kind_ == Kind::sphere) return true;
  if (kind_ == Kind::data_backed) return base_->has_geodesic_ops();
  return false;
}

const GeodesicOps& ConstraintSet::geodesic_ops() const {
  if (kind_ == Kind::sphere) return *geo_;
  if (kind_ == Kind::data_backed) return base_->geodesic_ops();
  throw CapabilityError("geodesic_ops: this set has no geodesic structure");
}

std::vector<Vec> ConstraintSet::sample(Rng& rng, std::size_t count) const {
  std::vector<Vec> out;
  out.reserve(count);
  switch (kind_) {
    case Kind::box:
      for (std::size_t i = 0; i < count; ++i)
        out.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
      break;
    case Kind::disk:
      // Uniform on the bounding box pushed through the projector; mass that
      // leaves the box lands on the boundary circle.
      for (std::size_t i = 0; i < count; ++i)
        out.push_back(disk_project(Vec{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}));
      break;
    case Kind::sphere:
      for (std::size_t i = 0; i < count; ++i) {
        Vec v{rng.normal(), rng.normal(), rng.normal()};
        double n = norm(v);
        while (n < 1e-12) {
          v = {rng.normal(), rng.normal(), rng.normal()};
          n = norm(v);
        }
        for (double& x : v) x /= n;
        out.push_back(std::move(v));
      }
      break;
    case Kind::curve:
      for (std::size_t i = 0; i < count; ++i)
        out.push_back(curve_eval(*spec_, rng.uniform(kCurveLo, kCurveHi)));
      break;
    case Kind::data_backed: {
      if (count > pool_.size())
        throw std::invalid_argument("sample: data-backed pool smaller than request");
      // Fisher-Yates prefix: a uniform subsample without replacement.
      std::vector<std::size_t> idx(pool_.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.index(idx.size() - i);
        std::swap(idx[i], idx[j]);
        out.push_back(pool_[idx[i]]);
      }
      break;
    }
  }
  return out;
}

const CurveSpec& ConstraintSet::curve_spec() const {
  if (kind_ != Kind::curve) throw CapabilityError("curve_spec: not a curve set");
  return *spec_;
}

const std::vector<Vec>& ConstraintSet::pool() const {
  if (kind_ != Kind::data_backed) throw CapabilityError("pool: not a data-backed set");
  return pool_;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {
using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols)
    throw ConfigError("matrix: data length does not match shape");
  return m;
}
}  // namespace

std::string ConstraintSet::to_json_string() const {
  json j;
  switch (kind_) {
    case Kind::box:
      j["kind"] = "box";
      break;
    case Kind::disk:
      j["kind"] = "disk";
      break;
    case Kind::sphere:
      j["kind"] = "sphere";
      break;
    case Kind::curve: {
      j["kind"] = "curve";
      j["family"] = spec_->family == CurveSpec::Family::rose ? "rose" : "variety";
      json layers = json::array();
      for (const Matrix& w : spec_->homeo) layers.push_back(matrix_to_json(w));
      j["homeo"] = layers;
      j["reference_samples"] = reference_count_;
      break;
    }
    case Kind::data_backed: {
      j["kind"] = "data_backed";
      j["base"] = json::parse(base_->to_json_string());
      json pool = json::array();
      for (const Vec& p : pool_) pool.push_back(p);
      j["pool"] = pool;
      break;
    }
  }
  return j.dump();
}

std::shared_ptr<const ConstraintSet> ConstraintSet::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("constraint set: bad JSON: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "box") return box2();
    if (kind == "disk") return disk2();
    if (kind == "sphere") return sphere3();
    if (kind == "curve") {
      CurveSpec spec;
      spec.family = j.at("family").get<std::string>() == "rose" ? CurveSpec::Family::rose
                                                                : CurveSpec::Family::variety;
      for (const json& l : j.value("homeo", json::array()))
        spec.homeo.push_back(matrix_from_json(l));
      return curve(std::move(spec), j.value("reference_samples", std::size_t{100000}));
    }
    if (kind == "data_backed") {
      auto base = from_json_string(j.at("base").dump());
      std::vector<Vec> pool;
      for (const json& p : j.at("pool")) pool.push_back(p.get<Vec>());
      return data_backed(std::move(base), std::move(pool));
    }
    throw ConfigError("constraint set: unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("constraint set: ") + e.what());
  }
}

}  // namespace pattn
