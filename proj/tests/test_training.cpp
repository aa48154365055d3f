#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pattn/errors.hpp"
#include "pattn/training.hpp"

using namespace pattn;

namespace {

bool nets_equal(const DenseNet& a, const DenseNet& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t j = 0; j < a.layers.size(); ++j) {
    if (a.layers[j].weight.data != b.layers[j].weight.data) return false;
    if (a.layers[j].bias != b.layers[j].bias) return false;
    if (a.layers[j].alpha != b.layers[j].alpha) return false;
  }
  return true;
}

bool contains(const std::vector<Vec>& pool, const Vec& p) {
  return std::find(pool.begin(), pool.end(), p) != pool.end();
}

// two separable input clusters, one label column each
struct Toy {
  std::vector<Vec> inputs;
  LabelMatrix labels;
};

Toy separable_toy(Rng& rng, std::size_t per_cluster) {
  Toy toy;
  toy.labels.rows = 2 * per_cluster;
  toy.labels.cols = 2;
  toy.labels.data.assign(toy.labels.rows * 2, 0);
  for (std::size_t i = 0; i < 2 * per_cluster; ++i) {
    const bool right = i % 2 == 1;
    toy.inputs.push_back({(right ? 1.0 : -1.0) + 0.1 * rng.normal()});
    toy.labels.data[i * 2 + (right ? 1 : 0)] = 1;
  }
  return toy;
}

}  // namespace

// ---------------------------------------------------------------------------
// particle selection

TEST_CASE("kmeans anchors are pool members and deterministic") {
  Rng data_rng(3);
  std::vector<Vec> pool;
  for (int i = 0; i < 60; ++i)
    pool.push_back({data_rng.uniform(-1.0, 1.0), data_rng.uniform(-1.0, 1.0)});

  Rng r1(7), r2(7);
  const auto a1 = kmeans_anchors(pool, 8, r1);
  const auto a2 = kmeans_anchors(pool, 8, r2);
  REQUIRE(a1.size() == 8);
  CHECK(a1 == a2);
  for (const Vec& a : a1) CHECK(contains(pool, a));
}

TEST_CASE("anchors spread across well-separated clusters") {
  // four tight clusters; with k=4 every cluster should own one anchor
  std::vector<Vec> pool;
  Rng rng(11);
  const double cx[4] = {-5.0, 5.0, -5.0, 5.0}, cy[4] = {-5.0, -5.0, 5.0, 5.0};
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 10; ++i)
      pool.push_back({cx[c] + 0.1 * rng.normal(), cy[c] + 0.1 * rng.normal()});
  Rng arng(13);
  const auto anchors = kmeans_anchors(pool, 4, arng);
  std::vector<bool> owned(4, false);
  for (const Vec& a : anchors)
    for (int c = 0; c < 4; ++c)
      if (distance(a, Vec{cx[c], cy[c]}) < 1.0) owned[c] = true;
  for (int c = 0; c < 4; ++c) CHECK(owned[c]);
}

TEST_CASE("nearest gathering orders by distance with index tiebreaks") {
  const std::vector<Vec> pool{{0.0}, {1.0}, {10.0}};
  const ParticleArray p = gather_nearest(pool, {Vec{0.0}}, 2);
  CHECK(ConstSpan(p.at(0, 0))[0] == 0.0);
  CHECK(ConstSpan(p.at(0, 1))[0] == 1.0);

  const std::vector<Vec> tied{{-1.0}, {1.0}, {5.0}};
  const ParticleArray t = gather_nearest(tied, {Vec{0.0}}, 2);
  CHECK(ConstSpan(t.at(0, 0))[0] == -1.0);  // tie resolved toward pool index 0
  CHECK(ConstSpan(t.at(0, 1))[0] == 1.0);

  CHECK_THROWS_AS(gather_nearest(pool, {Vec{0.0}}, 4), std::invalid_argument);
  CHECK_THROWS_AS(gather_nearest({}, {Vec{0.0}}, 1), std::invalid_argument);
}

TEST_CASE("particle selection rejects oversubscribed pools") {
  Rng rng(17);
  std::vector<Vec> pool;
  for (int i = 0; i < 10; ++i) pool.push_back({rng.normal(), rng.normal()});
  Rng sel(19);
  CHECK_THROWS_AS(select_particles(pool, 4, 3, sel), ConfigError);
  Rng sel2(19);
  const ParticleSelection sc = select_particles(pool, 4, 2, sel2);
  CHECK(sc.anchors.size() == 4);
  CHECK(sc.particles.count == 4);
  CHECK(sc.particles.per_slot == 2);
  for (std::size_t n = 0; n < 4; ++n)
    for (std::size_t q = 0; q < 2; ++q) {
      const Vec part(sc.particles.at(n, q).begin(), sc.particles.at(n, q).end());
      CHECK(contains(pool, part));
    }
}

TEST_CASE("labels mark every tied-nearest anchor") {
  const std::vector<Vec> anchors{{0.0}, {2.0}};
  const LabelMatrix L = make_labels({Vec{0.1}, Vec{1.9}, Vec{1.0}}, anchors);
  REQUIRE(L.rows == 3);
  REQUIRE(L.cols == 2);
  CHECK(L.at(0, 0));
  CHECK_FALSE(L.at(0, 1));
  CHECK_FALSE(L.at(1, 0));
  CHECK(L.at(1, 1));
  CHECK(L.at(2, 0));  // exact tie: both anchors marked
  CHECK(L.at(2, 1));
  CHECK_NOTHROW(L.validate());
  CHECK_THROWS_AS(make_labels({Vec{0.0}}, {}), ConfigError);
  CHECK_THROWS_AS(make_labels({}, anchors), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// classifier fitting

TEST_CASE("classifier fitting separates an easy two-cluster problem") {
  Rng data_rng(23);
  const Toy toy = separable_toy(data_rng, 40);
  Rng init(29);
  DenseNet net = DenseNet::random(1, {8, 2}, 1.0, init);
  TrainConfig cfg;
  cfg.epochs = 800;
  cfg.batch_size = 16;
  Rng fit(31);
  const LossTrace trace = fit_classifier(net, toy.inputs, toy.labels, cfg, fit);
  REQUIRE(trace.per_epoch.size() == 800);
  CHECK(trace.per_epoch.back() < 0.05);
  CHECK(trace.per_epoch.back() <= 0.5 * trace.per_epoch.front());
}

TEST_CASE("zero epochs leave the network untouched") {
  Rng data_rng(37);
  const Toy toy = separable_toy(data_rng, 10);
  Rng init(41);
  DenseNet net = DenseNet::random(1, {4, 2}, 1.0, init);
  const DenseNet before = net;
  TrainConfig cfg;
  cfg.epochs = 0;
  Rng fit(43);
  const LossTrace trace = fit_classifier(net, toy.inputs, toy.labels, cfg, fit);
  CHECK(trace.per_epoch.empty());
  CHECK(nets_equal(net, before));
}

TEST_CASE("frozen-hidden fitting is bit-identical to the masked reference") {
  Rng data_rng(47);
  const Toy toy = separable_toy(data_rng, 20);
  Rng init(53);
  const DenseNet enc0 = DenseNet::random(1, {6, 3}, 1.0, init);
  const DenseNet head0 = DenseNet::random(3, {5, 2}, 1.0, init);

  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.batch_size = 8;
  cfg.hidden_mode = HiddenWeightMode::frozen_random;

  DenseNet enc_fast = enc0, head_fast = head0;
  DenseNet enc_ref = enc0, head_ref = head0;
  Rng r_fast(59), r_ref(59);
  const LossTrace fast =
      fit_classifier({&enc_fast, &head_fast}, toy.inputs, toy.labels, cfg, r_fast);
  const LossTrace ref = fit_classifier_masked_reference({&enc_ref, &head_ref}, toy.inputs,
                                                        toy.labels, cfg, r_ref);
  CHECK(fast.per_epoch == ref.per_epoch);
  CHECK(nets_equal(enc_fast, enc_ref));
  CHECK(nets_equal(head_fast, head_ref));
  // hidden layers really were frozen
  CHECK(nets_equal(enc_fast, enc0));
  for (std::size_t j = 0; j + 1 < head_fast.layers.size(); ++j) {
    CHECK(head_fast.layers[j].weight.data == head0.layers[j].weight.data);
    CHECK(head_fast.layers[j].bias == head0.layers[j].bias);
  }
  CHECK_FALSE(nets_equal(head_fast, head0));  // the final layer did move
}

// ---------------------------------------------------------------------------
// transport objective

TEST_CASE("transport loss equals the mean closed-form distance to targets") {
  Rng rng(61);
  const auto set = ConstraintSet::disk2();
  TrainConfig cfg;
  cfg.pool_size = 32;
  cfg.slots = 6;
  cfg.per_slot = 2;
  cfg.seed = 5;
  const ParticleSelection sc = build_particles(*set, cfg);
  ProbabilisticTransformer model;
  Rng init(67);
  model.encoder = DenseNet::random(2, {8, 3}, 1.0, init);
  model.head = DenseNet::random(3, {6}, 1.0, init);
  model.particles = sc.particles;
  model.constraint_set = set;
  model.validate();

  std::vector<Vec> bx, by;
  for (int i = 0; i < 9; ++i) {
    bx.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    by.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
  }
  const WassersteinGrad wg = wasserstein_loss_and_grad(model, bx, by);
  double mean = 0.0;
  for (int i = 0; i < 9; ++i)
    mean += w1_to_pointmass(predict_measure(model, bx[i]), by[i]) / 9.0;
  CHECK(std::abs(wg.loss - mean) < 1e-12);
}

TEST_CASE("transport loss hand value for uniform logits") {
  ProbabilisticTransformer model;
  Rng init(71);
  model.encoder = DenseNet::random(1, {1}, 1.0, init);
  model.head = DenseNet::random(1, {2}, 1.0, init);
  for (Layer& l : model.head.layers)
    for (double& w : l.weight.data) w = 0.0;
  model.head.layers.back().bias = {0.0, 0.0};  // uniform attention
  model.particles = ParticleArray(2, 1, 2);
  model.particles.at(0, 0)[0] = 1.0;   // (1, 0)
  model.particles.at(1, 0)[1] = -1.0;  // (0, -1)
  model.constraint_set = ConstraintSet::disk2();
  model.validate();

  // target (0, 3): particle distances are sqrt(10) and 4, averaged half-half
  const WassersteinGrad wg =
      wasserstein_loss_and_grad(model, {Vec{0.5}}, {Vec{0.0, 3.0}});
  CHECK(wg.loss ==
        doctest::Approx(0.5 * (std::sqrt(10.0) + 4.0)).epsilon(1e-14));
}

TEST_CASE("transport gradients match finite differences") {
  Rng rng(73);
  const auto set = ConstraintSet::disk2();
  for (int rep = 0; rep < 10; ++rep) {
    ProbabilisticTransformer model;
    model.encoder = DenseNet::random(2, {5, 3}, 1.0, rng);
    model.head = DenseNet::random(3, {4}, 1.0, rng);
    model.particles = ParticleArray(4, 2, 2);
    const auto pts = set->sample(rng, 8);
    for (std::size_t n = 0; n < 4; ++n)
      for (std::size_t q = 0; q < 2; ++q)
        std::copy(pts[n * 2 + q].begin(), pts[n * 2 + q].end(),
                  model.particles.at(n, q).begin());
    model.constraint_set = set;

    std::vector<Vec> bx, by;
    for (int i = 0; i < 3; ++i) {
      bx.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
      by.push_back({rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)});
    }

    const WassersteinGrad wg = wasserstein_loss_and_grad(model, bx, by);
    const Vec analytic = [&] {
      Vec all = oracle::flatten(wg.encoder);
      const Vec h = oracle::flatten(wg.head);
      all.insert(all.end(), h.begin(), h.end());
      return all;
    }();

    Vec theta = oracle::flatten_params(model.encoder);
    const std::size_t enc_len = theta.size();
    const Vec head_theta = oracle::flatten_params(model.head);
    theta.insert(theta.end(), head_theta.begin(), head_theta.end());

    ProbabilisticTransformer probe = model;
    const auto loss_at = [&](ConstSpan flat) {
      oracle::set_params(probe.encoder, flat.subspan(0, enc_len));
      oracle::set_params(probe.head, flat.subspan(enc_len));
      return wasserstein_loss_and_grad(probe, bx, by).loss;
    };
    const Vec fd = oracle::fd_gradient(loss_at, theta);
    CHECK(oracle::max_rel_error(analytic, fd, 1e-4) < 1e-5);
  }
}

// ---------------------------------------------------------------------------
// end-to-end trainers

TEST_CASE("trainers are deterministic given the config seed") {
  Rng data_rng(79);
  const auto set = ConstraintSet::disk2();
  std::vector<Vec> X, Y;
  for (int i = 0; i < 40; ++i) {
    X.push_back({data_rng.uniform(-1.0, 1.0), data_rng.uniform(-1.0, 1.0)});
    Y.push_back(disk_project(Vec{1.5 * X.back()[0], 1.5 * X.back()[1]}));
  }
  TrainConfig cfg;
  cfg.pool_size = 64;
  cfg.slots = 8;
  cfg.epochs = 5;
  cfg.encoder_hidden = {8};
  cfg.head_hidden = {8};
  cfg.mlp_hidden = {8, 8};
  cfg.seed = 99;

  const auto m1 = train_probabilistic_transformer(X, Y, set, cfg);
  const auto m2 = train_probabilistic_transformer(X, Y, set, cfg);
  CHECK(model_to_json_string(m1) == model_to_json_string(m2));

  const auto c1 = train_classical_transformer(X, Y, set, cfg);
  const auto c2 = train_classical_transformer(X, Y, set, cfg);
  CHECK(model_to_json_string(c1) == model_to_json_string(c2));

  const auto b1 = train_baseline_mlp(X, Y, cfg);
  const auto b2 = train_baseline_mlp(X, Y, cfg);
  CHECK(model_to_json_string(b1) == model_to_json_string(b2));

  cfg.seed = 100;
  const auto m3 = train_probabilistic_transformer(X, Y, set, cfg);
  CHECK(model_to_json_string(m3) != model_to_json_string(m1));
}

TEST_CASE("a one-point one-particle model collapses to the target atom") {
  const auto sphere = ConstraintSet::sphere3();
  const Vec y1{0.0, 0.6, 0.8};
  const auto pool_set = ConstraintSet::data_backed(sphere, {y1});
  TrainConfig cfg;
  cfg.pool_size = 1;
  cfg.slots = 1;
  cfg.per_slot = 1;
  cfg.epochs = 3;
  cfg.encoder_hidden = {4};
  cfg.head_hidden = {4};
  const auto model =
      train_probabilistic_transformer({Vec{0.25}}, {y1}, pool_set, cfg);
  const DiscreteMeasure mu = predict_measure(model, Vec{0.25});
  REQUIRE(mu.size() == 1);
  CHECK(mu.weights[0] == 1.0);
  CHECK(mu.atoms[0] == y1);
  CHECK(predict_frechet(model, Vec{0.25}) == y1);
}

TEST_CASE("transport training reduces its loss on a simple task") {
  Rng data_rng(83);
  const auto set = ConstraintSet::disk2();
  std::vector<Vec> X, Y;
  for (int i = 0; i < 60; ++i) {
    const double a = data_rng.uniform(0.0, 2.0 * 3.141592653589793);
    X.push_back({std::cos(a), std::sin(a)});
    Y.push_back({0.9 * std::cos(a), 0.9 * std::sin(a)});
  }
  TrainConfig cfg;
  cfg.pool_size = 128;
  cfg.slots = 16;
  cfg.epochs = 30;
  cfg.batch_size = 16;
  cfg.loss = LossKind::wasserstein;
  cfg.encoder_hidden = {16};
  cfg.head_hidden = {16};
  cfg.seed = 7;
  LossTrace trace;
  const auto model = train_probabilistic_transformer(X, Y, set, cfg, &trace);
  REQUIRE(trace.per_epoch.size() == 30);
  CHECK(trace.per_epoch.back() < trace.per_epoch.front());
  // predictions stay inside the disk by construction of the mean readout
  for (int i = 0; i < 10; ++i)
    CHECK(set->distance(predict_mean(model, X[i])) <= set->membership_tolerance());
}

TEST_CASE("classical attention training keeps outputs in convex sets") {
  Rng data_rng(89);
  const auto set = ConstraintSet::disk2();
  std::vector<Vec> X, Y;
  for (int i = 0; i < 50; ++i) {
    X.push_back({data_rng.uniform(-1.0, 1.0), data_rng.uniform(-1.0, 1.0)});
    Y.push_back(disk_project(Vec{2.0 * X.back()[0], 2.0 * X.back()[1]}));
  }
  TrainConfig cfg;
  cfg.pool_size = 64;
  cfg.slots = 8;
  cfg.epochs = 20;
  cfg.encoder_hidden = {8};
  cfg.head_hidden = {8};
  LossTrace trace;
  const auto model = train_classical_transformer(X, Y, set, cfg, &trace);
  REQUIRE(trace.per_epoch.size() == 20);
  CHECK(trace.per_epoch.back() < trace.per_epoch.front());
  Rng probe(97);
  for (int i = 0; i < 200; ++i) {
    const Vec x{probe.uniform(-2.0, 2.0), probe.uniform(-2.0, 2.0)};
    CHECK(set->distance(classical_attention_predict(model, x)) <=
          set->membership_tolerance());
  }
}

TEST_CASE("training configs validate their invariants") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  TrainConfig bad = cfg;
  bad.slots = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.pool_size = 63;
  bad.slots = 64;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.alpha = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.latent_dim = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
