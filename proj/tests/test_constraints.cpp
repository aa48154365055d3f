#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pattn/constraints.hpp"
#include "pattn/errors.hpp"
#include "pattn/rng.hpp"

using namespace pattn;
constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// analytic projections

TEST_CASE("box projection clamps componentwise") {
  CHECK(box_project(Vec{2.0, -3.0}) == Vec{1.0, -1.0});
  CHECK(box_project(Vec{0.5, 0.5}) == Vec{0.5, 0.5});
  CHECK(box_project(Vec{-1.0, 1.0}) == Vec{-1.0, 1.0});
  CHECK(box_project(Vec{1.35, 1.35}) == Vec{1.0, 1.0});
}

TEST_CASE("disk projection rescales by max(1, |y|)") {
  CHECK(disk_project(Vec{3.0, 4.0}) == Vec{0.6, 0.8});
  CHECK(disk_project(Vec{0.0, 0.0}) == Vec{0.0, 0.0});
  CHECK(disk_project(Vec{0.0, 2.0}) == Vec{0.0, 1.0});
  CHECK(disk_project(Vec{1.5, 0.0}) == Vec{1.0, 0.0});
}

TEST_CASE("convex projections are idempotent and optimal") {
  Rng rng(17);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec y{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
    const Vec pb = box_project(y), pb2 = box_project(pb);
    const Vec pd = disk_project(y), pd2 = disk_project(pd);
    CHECK(distance(pb, pb2) < 1e-12);
    CHECK(distance(pd, pd2) < 1e-12);

    // no member of the set is closer than the projection
    const Vec zb = box_project(Vec{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    const Vec zd = disk_project(Vec{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    CHECK(distance(y, pb) <= distance(y, zb) + 1e-9);
    CHECK(distance(y, pd) <= distance(y, zd) + 1e-9);
  }
}

// ---------------------------------------------------------------------------
// sphere geometry

TEST_CASE("sphere distance, log and exp closed forms") {
  const Vec ex{1.0, 0.0, 0.0}, ey{0.0, 1.0, 0.0};
  CHECK(sphere_dist(ex, ey) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(sphere_dist(ex, ex) == 0.0);
  CHECK_THROWS_AS(sphere_dist(Vec{2.0, 0.0, 0.0}, ey), std::domain_error);

  const Vec reached = sphere_exp(ex, Vec{0.0, kPi / 2, 0.0});
  CHECK(distance(reached, ey) < 1e-12);
  CHECK(sphere_exp(ex, Vec{0.0, 0.0, 0.0}) == ex);
  CHECK_THROWS_AS(sphere_exp(ex, Vec{1.0, 0.0, 0.0}), std::domain_error);  // not tangent

  const Vec lg = sphere_log(ex, ey);
  CHECK(norm(lg) == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(std::abs(dot(lg, ex)) < 1e-12);
  CHECK_THROWS_AS(sphere_log(ex, Vec{-1.0, 0.0, 0.0}), std::domain_error);  // antipodal
}

TEST_CASE("sphere exp/log round trip on random non-antipodal pairs") {
  Rng rng(31);
  const auto draw = [&] {
    Vec v{rng.normal(), rng.normal(), rng.normal()};
    const double n = norm(v);
    for (double& x : v) x /= n;
    return v;
  };
  int done = 0;
  double worst = 0.0;
  while (done < 1000) {
    const Vec u = draw(), v = draw();
    if (sphere_dist(u, v) > kPi - 1e-3) continue;
    const Vec back = sphere_exp(u, sphere_log(u, v));
    worst = std::max(worst, distance(back, v));
    ++done;
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("geodesic ops bundles") {
  const GeodesicOps sph = sphere_geodesic_ops();
  CHECK(sph.spread_limit == doctest::Approx(kPi / 2));
  const Vec p = sph.project(Vec{0.0, 0.0, 2.0});
  CHECK(distance(p, Vec{0.0, 0.0, 1.0}) < 1e-15);

  const GeodesicOps euc = euclidean_geodesic_ops();
  CHECK(std::isinf(euc.spread_limit));
  CHECK(euc.dist(Vec{0.0, 0.0}, Vec{3.0, 4.0}) == doctest::Approx(5.0));
  CHECK(euc.log(Vec{1.0, 1.0}, Vec{2.0, 3.0}) == Vec{1.0, 2.0});
  CHECK(euc.exp(Vec{1.0, 1.0}, Vec{1.0, 2.0}) == Vec{2.0, 3.0});
}

// ---------------------------------------------------------------------------
// curves

TEST_CASE("curve evaluation closed forms") {
  const CurveSpec rose{CurveSpec::Family::rose, {}};
  CHECK(distance(curve_eval(rose, 0.0), Vec{3.0, 0.0}) < 1e-15);
  const Vec at32 = curve_eval(rose, 3.0 * kPi / 2.0);
  CHECK(distance(at32, Vec{0.0, 1.0}) < 1e-12);
  CHECK_THROWS_AS(curve_eval(rose, 10.5), std::domain_error);
  CHECK_THROWS_AS(curve_eval(rose, -11.0), std::domain_error);

  const CurveSpec variety{CurveSpec::Family::variety, {}};  // identity homeomorphism
  const Vec v = curve_eval(variety, -1.0);                  // sinc(0) = 1
  CHECK(v[0] == doctest::Approx(std::cos(0.5)).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(-std::sin(0.5)).epsilon(1e-15));
}

TEST_CASE("variety spec generation and homeomorphism inversion") {
  Rng rng(101);
  const CurveSpec spec = random_variety_spec(rng);
  REQUIRE(spec.homeo.size() == 3);
  for (const Matrix& W : spec.homeo) {
    const double det = W(0, 0) * W(1, 1) - W(0, 1) * W(1, 0);
    CHECK(std::abs(det) >= 0.1);
  }
  for (int rep = 0; rep < 200; ++rep) {
    const Vec p{rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)};
    const Vec fwd = homeo_forward(spec, p);
    const Vec back = homeo_inverse(spec, fwd);
    CHECK(distance(back, p) < 1e-8);
  }
}

// ---------------------------------------------------------------------------
// ConstraintSet surface

TEST_CASE("analytic distances") {
  auto box = ConstraintSet::box2();
  auto disk = ConstraintSet::disk2();
  auto sphere = ConstraintSet::sphere3();

  CHECK(disk->distance(Vec{0.0, 2.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sphere->distance(Vec{0.0, 0.0, 0.5}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(box->distance(Vec{2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(box->distance(Vec{0.3, -0.7}) == 0.0);
  CHECK(box->member(Vec{0.3, -0.7}));
  CHECK_FALSE(box->member(Vec{1.1, 0.0}));
  CHECK(box->membership_tolerance() == doctest::Approx(1e-9));
  CHECK_THROWS_AS(box->distance(Vec{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("curve distances match an independent dense-search oracle") {
  auto rose = ConstraintSet::curve(CurveSpec{CurveSpec::Family::rose, {}});
  // Reference values from an external scan over two million parameters with
  // bounded local refinement.
  CHECK(rose->distance(Vec{1.0, 0.5}) ==
        doctest::Approx(0.022583575553162982).epsilon(1e-6));
  CHECK(rose->distance(Vec{-2.0, 1.0}) ==
        doctest::Approx(0.48578073873700789).epsilon(1e-6));
  // membership of on-curve points
  CHECK(rose->distance(curve_eval(rose->curve_spec(), 1.3)) <= 1e-4);
  CHECK(rose->distance(curve_eval(rose->curve_spec(), 1.3)) <=
        rose->membership_tolerance());
  CHECK(rose->member(curve_eval(rose->curve_spec(), -7.77)));
}

TEST_CASE("capability gates") {
  auto box = ConstraintSet::box2();
  auto sphere = ConstraintSet::sphere3();
  auto rose = ConstraintSet::curve(CurveSpec{CurveSpec::Family::rose, {}});

  CHECK(box->has_projector());
  CHECK_FALSE(box->has_geodesic_ops());
  CHECK_THROWS_AS(box->geodesic_ops(), CapabilityError);
  CHECK_THROWS_AS(box->curve_spec(), CapabilityError);
  CHECK_THROWS_AS(box->pool(), CapabilityError);

  CHECK(sphere->has_geodesic_ops());
  CHECK(sphere->geodesic_ops().spread_limit == doctest::Approx(kPi / 2));
  CHECK(distance(sphere->project(Vec{0.0, 3.0, 0.0}), Vec{0.0, 1.0, 0.0}) < 1e-15);

  CHECK_FALSE(rose->has_projector());
  CHECK_THROWS_AS(rose->project(Vec{0.0, 0.0}), CapabilityError);
}

TEST_CASE("samplers emit members, deterministically") {
  Rng rng(77);
  auto box = ConstraintSet::box2();
  auto disk = ConstraintSet::disk2();
  auto sphere = ConstraintSet::sphere3();
  auto rose = ConstraintSet::curve(CurveSpec{CurveSpec::Family::rose, {}});

  for (const auto& set : {box, disk, sphere}) {
    const auto pts = set->sample(rng, 10000);
    REQUIRE(pts.size() == 10000);
    for (const Vec& y : pts) CHECK(set->distance(y) <= set->membership_tolerance());
  }
  // sphere samples are unit to machine precision
  Rng srng(5);
  for (const Vec& y : sphere->sample(srng, 100)) CHECK(std::abs(norm(y) - 1.0) < 1e-12);

  // curve scan is costlier; spot-check fewer draws
  Rng crng(6);
  for (const Vec& y : rose->sample(crng, 200))
    CHECK(rose->distance(y) <= rose->membership_tolerance());

  Rng r1(9), r2(9);
  CHECK(box->sample(r1, 5) == box->sample(r2, 5));
}

TEST_CASE("data-backed sets subsample their pool without replacement") {
  auto sphere = ConstraintSet::sphere3();
  Rng rng(13);
  std::vector<Vec> pool = sphere->sample(rng, 50);
  auto backed = ConstraintSet::data_backed(sphere, pool);

  CHECK(backed->distance(Vec{0.0, 0.0, 0.5}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(backed->has_geodesic_ops());

  Rng draw(21);
  const auto picks = backed->sample(draw, 50);
  REQUIRE(picks.size() == 50);
  // without replacement: the 50 picks are a permutation of the pool
  std::vector<bool> seen(pool.size(), false);
  for (const Vec& y : picks) {
    bool found = false;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (!seen[i] && pool[i] == y) {
        seen[i] = true;
        found = true;
        break;
      }
    CHECK(found);
  }
  Rng over(22);
  CHECK_THROWS_AS(backed->sample(over, 51), std::invalid_argument);
}

TEST_CASE("constraint sets round-trip through JSON") {
  Rng rng(55);
  const std::vector<std::shared_ptr<const ConstraintSet>> sets{
      ConstraintSet::box2(), ConstraintSet::disk2(), ConstraintSet::sphere3(),
      ConstraintSet::curve(CurveSpec{CurveSpec::Family::rose, {}}),
      ConstraintSet::curve(random_variety_spec(rng))};
  Rng probe_rng(56);
  for (const auto& set : sets) {
    const auto copy = ConstraintSet::from_json_string(set->to_json_string());
    CHECK(copy->kind() == set->kind());
    CHECK(copy->ambient_dim() == set->ambient_dim());
    for (int rep = 0; rep < 20; ++rep) {
      Vec y(set->ambient_dim());
      for (double& v : y) v = probe_rng.uniform(-2.0, 2.0);
      CHECK(copy->distance(y) == doctest::Approx(set->distance(y)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(ConstraintSet::from_json_string("not json"), ConfigError);
  CHECK_THROWS_AS(ConstraintSet::from_json_string(R"({"kind":"dodecahedron"})"), ConfigError);
}
