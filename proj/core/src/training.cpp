#include "pattn/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pattn/errors.hpp"

namespace pattn {

void TrainConfig::validate() const {
  if (pool_size == 0) throw ConfigError("train: pool_size must be positive");
  if (slots == 0 || per_slot == 0) throw ConfigError("train: slots/per_slot must be positive");
  if (slots * per_slot > pool_size)
    throw ConfigError("train: slots*per_slot exceeds pool_size");
  if (batch_size == 0) throw ConfigError("train: batch_size must be positive");
  if (latent_dim == 0) throw ConfigError("train: latent_dim must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(mlp_alpha >= 0.0 && mlp_alpha <= 1.0))
    throw ConfigError("train: activation blend outside [0,1]");
  optimizer.validate();
}

void LabelMatrix::validate() const {
  if (rows == 0 || cols == 0 || data.size() != rows * cols)
    throw std::invalid_argument("labels: bad shape");
  for (std::size_t t = 0; t < rows; ++t) {
    bool any = false;
    for (std::size_t n = 0; n < cols && !any; ++n) any = at(t, n);
    if (!any) throw std::invalid_argument("labels: empty row");
  }
}

// ---------------------------------------------------------------------------
// Anchor / particle / label construction

std::vector<Vec> kmeans_anchors(const std::vector<Vec>& pool, std::size_t k, Rng& rng) {
  if (pool.empty()) throw std::invalid_argument("kmeans_anchors: empty pool");
  if (k == 0 || k > pool.size())
    throw std::invalid_argument("kmeans_anchors: k must lie in [1, pool size]");
  const std::size_t S = pool.size();

  // k-means++ seeding.
  std::vector<Vec> centers;
  centers.reserve(k);
  std::vector<double> d2(S, std::numeric_limits<double>::infinity());
  centers.push_back(pool[rng.index(S)]);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < S; ++i) {
      d2[i] = std::min(d2[i], squared_distance(pool[i], centers.back()));
      total += d2[i];
    }
    std::size_t pick;
    if (total <= 0.0) {
      pick = rng.index(S);
    } else {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      pick = S - 1;
      for (std::size_t i = 0; i < S; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(pool[pick]);
  }

  // Lloyd iterations; an empty cluster keeps its previous center.
  std::vector<std::size_t> assign(S);
  for (int it = 0; it < 20; ++it) {
    for (std::size_t i = 0; i < S; ++i) {
      std::size_t best = 0;
      double bd = squared_distance(pool[i], centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(pool[i], centers[c]);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      assign[i] = best;
    }
    std::vector<Vec> sums(k, Vec(pool.front().size(), 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < S; ++i) {
      axpy(1.0, pool[i], sums[assign[i]]);
      counts[assign[i]] += 1;
    }
    for (std::size_t c = 0; c < k; ++c)
      if (counts[c] > 0) {
        for (double& x : sums[c]) x /= static_cast<double>(counts[c]);
        centers[c] = std::move(sums[c]);
      }
  }

  // Snap each center to its nearest pool member so anchors live on the set.
  std::vector<Vec> anchors;
  anchors.reserve(k);
  for (const Vec& c : centers) {
    std::size_t best = 0;
    double bd = squared_distance(c, pool[0]);
    for (std::size_t i = 1; i < S; ++i) {
      const double d = squared_distance(c, pool[i]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    anchors.push_back(pool[best]);
  }
  return anchors;
}

ParticleArray gather_nearest(const std::vector<Vec>& pool, const std::vector<Vec>& anchors,
                             std::size_t per_slot) {
  if (pool.empty() || anchors.empty())
    throw std::invalid_argument("gather_nearest: empty pool or anchors");
  if (per_slot == 0 || per_slot > pool.size())
    throw std::invalid_argument("gather_nearest: per_slot must lie in [1, pool size]");
  const std::size_t m = pool.front().size();
  ParticleArray particles(anchors.size(), per_slot, m);
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t n = 0; n < anchors.size(); ++n) {
    if (anchors[n].size() != m)
      throw std::invalid_argument("gather_nearest: anchor dimension mismatch");
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + per_slot, idx.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double da = squared_distance(anchors[n], pool[a]);
                        const double db = squared_distance(anchors[n], pool[b]);
                        if (da != db) return da < db;
                        return a < b;
                      });
    for (std::size_t q = 0; q < per_slot; ++q) {
      ConstSpan p = pool[idx[q]];
      std::copy(p.begin(), p.end(), particles.at(n, q).begin());
    }
  }
  return particles;
}

ParticleSelection select_particles(const std::vector<Vec>& pool, std::size_t slots,
                                   std::size_t per_slot, Rng& rng) {
  if (slots == 0 || per_slot == 0)
    throw ConfigError("select_particles: slots/per_slot must be positive");
  if (slots * per_slot > pool.size())
    throw ConfigError("select_particles: slots*per_slot exceeds the pool size");
  ParticleSelection sel;
  sel.anchors = kmeans_anchors(pool, slots, rng);
  sel.particles = gather_nearest(pool, sel.anchors, per_slot);
  return sel;
}

LabelMatrix make_labels(const std::vector<Vec>& outputs, const std::vector<Vec>& anchors) {
  if (anchors.empty()) throw ConfigError("make_labels: empty anchors");
  if (outputs.empty()) throw std::invalid_argument("make_labels: empty outputs");
  LabelMatrix L;
  L.rows = outputs.size();
  L.cols = anchors.size();
  L.data.assign(L.rows * L.cols, 0);
  Vec d(anchors.size());
  for (std::size_t t = 0; t < outputs.size(); ++t) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < anchors.size(); ++n) {
      d[n] = distance(outputs[t], anchors[n]);
      dmin = std::min(dmin, d[n]);
    }
    for (std::size_t n = 0; n < anchors.size(); ++n)
      if (d[n] <= dmin + 1e-12) L.data[t * L.cols + n] = 1;
  }
  L.validate();
  return L;
}

// ---------------------------------------------------------------------------
// Shared training plumbing

namespace {

struct StackTape {
  std::vector<ForwardTape> tapes;
};

Vec stack_forward(const std::vector<DenseNet*>& stack, ConstSpan x, StackTape* tape) {
  if (tape) tape->tapes.resize(stack.size());
  Vec cur(x.begin(), x.end());
  for (std::size_t i = 0; i < stack.size(); ++i)
    cur = forward(*stack[i], cur, tape ? &tape->tapes[i] : nullptr);
  return cur;
}

void stack_backward(const std::vector<DenseNet*>& stack, const StackTape& tape,
                    ConstSpan upstream, std::vector<GradientBundle>& grads) {
  Vec up(upstream.begin(), upstream.end());
  for (std::size_t i = stack.size(); i-- > 0;)
    up = backward(*stack[i], tape.tapes[i], up, grads[i]);
}

void check_stack(const std::vector<DenseNet*>& stack) {
  if (stack.empty()) throw std::invalid_argument("training: empty net stack");
  for (DenseNet* n : stack) {
    if (!n) throw std::invalid_argument("training: null net in stack");
    n->validate();
  }
  for (std::size_t i = 1; i < stack.size(); ++i)
    if (stack[i]->input_dim() != stack[i - 1]->output_dim())
      throw std::invalid_argument("training: stack dimension chain broken");
}

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = 0; i + 1 < idx.size(); ++i)
    std::swap(idx[i], idx[i + rng.index(idx.size() - i)]);
}

// Per-sample objective on the stack output; fills dL/d(output) into `grad`
// and returns the loss value.
//
// Two families are used below: a softmax-composed loss (classification and
// the 1-Wasserstein objective both differentiate through softmax) and plain
// mean squared error for regression.

template <typename PerSample>
LossTrace run_training(const std::vector<DenseNet*>& stack, std::size_t sample_count,
                       const TrainConfig& cfg, Rng& rng, PerSample per_sample) {
  check_stack(stack);
  const bool frozen = cfg.hidden_mode == HiddenWeightMode::frozen_random;
  LossTrace trace;
  trace.per_epoch.reserve(cfg.epochs);
  std::vector<std::size_t> order(sample_count);
  std::iota(order.begin(), order.end(), 0);

  if (!frozen) {
    std::vector<GradientBundle> grads;
    std::vector<OptimizerState> states;
    for (DenseNet* n : stack) {
      grads.push_back(GradientBundle::zeros_like(*n));
      states.push_back(OptimizerState::zeros_like(*n));
    }
    StackTape tape;
    Vec dout;
    for (std::size_t e = 0; e < cfg.epochs; ++e) {
      shuffle_indices(order, rng);
      double epoch_loss = 0.0;
      for (std::size_t start = 0; start < sample_count; start += cfg.batch_size) {
        const std::size_t stop = std::min(sample_count, start + cfg.batch_size);
        const double inv_b = 1.0 / static_cast<double>(stop - start);
        for (auto& g : grads) g.set_zero();
        for (std::size_t s = start; s < stop; ++s) {
          const std::size_t t = order[s];
          const Vec out = stack_forward(stack, per_sample.input(t), &tape);
          epoch_loss += per_sample.loss_and_grad(t, out, dout);
          for (double& g : dout) g *= inv_b;
          stack_backward(stack, tape, dout, grads);
        }
        for (std::size_t i = 0; i < stack.size(); ++i)
          optimizer_step(*stack[i], grads[i], states[i], cfg.optimizer);
      }
      epoch_loss /= static_cast<double>(sample_count);
      if (!std::isfinite(epoch_loss))
        throw DivergenceError("training: non-finite loss at epoch " + std::to_string(e));
      trace.per_epoch.push_back(epoch_loss);
    }
    return trace;
  }

  // Frozen-hidden fast path: cache features below the final layer of the
  // last net, then train that single affine layer on the cached features.
  DenseNet& last = *stack.back();
  std::vector<Vec> features(sample_count);
  Vec fz;
  for (std::size_t t = 0; t < sample_count; ++t) {
    ConstSpan x = per_sample.input(t);
    Vec cur(x.begin(), x.end());
    for (std::size_t i = 0; i + 1 < stack.size(); ++i) cur = forward(*stack[i], cur);
    // every layer below the trained one is a hidden layer of the real
    // network, so each gets its activation (forward() would leave the last
    // of them linear)
    for (std::size_t j = 0; j + 1 < last.layers.size(); ++j) {
      const Layer& l = last.layers[j];
      matvec(l.weight, cur, fz);
      for (std::size_t i = 0; i < fz.size(); ++i) fz[i] += l.bias[i];
      for (double& v : fz) v = activation(l.alpha, v);
      cur.swap(fz);
    }
    features[t] = std::move(cur);
  }

  DenseNet readout;
  readout.layers.push_back(last.layers.back());
  GradientBundle grad = GradientBundle::zeros_like(readout);
  OptimizerState state = OptimizerState::zeros_like(readout);
  ForwardTape tape;
  Vec dout;
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    shuffle_indices(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < sample_count; start += cfg.batch_size) {
      const std::size_t stop = std::min(sample_count, start + cfg.batch_size);
      const double inv_b = 1.0 / static_cast<double>(stop - start);
      grad.set_zero();
      for (std::size_t s = start; s < stop; ++s) {
        const std::size_t t = order[s];
        const Vec out = forward(readout, features[t], &tape);
        epoch_loss += per_sample.loss_and_grad(t, out, dout);
        for (double& g : dout) g *= inv_b;
        backward(readout, tape, dout, grad);
      }
      optimizer_step(readout, grad, state, cfg.optimizer);
    }
    epoch_loss /= static_cast<double>(sample_count);
    if (!std::isfinite(epoch_loss))
      throw DivergenceError("training: non-finite loss at epoch " + std::to_string(e));
    trace.per_epoch.push_back(epoch_loss);
  }
  last.layers.back() = readout.layers.front();
  return trace;
}

struct LabelObjective {
  const std::vector<Vec>* X;
  const LabelMatrix* L;
  bool cross_entropy = false;

  ConstSpan input(std::size_t t) const { return (*X)[t]; }
  double loss_and_grad(std::size_t t, ConstSpan out, Vec& dout) const {
    const Vec s = softmax(out);
    if (!cross_entropy) {
      double loss = 0.0;
      Vec ds(s.size());
      for (std::size_t n = 0; n < s.size(); ++n) {
        const double r = s[n] - (L->at(t, n) ? 1.0 : 0.0);
        loss += r * r;
        ds[n] = 2.0 * r;
      }
      dout = softmax_backward(s, ds);
      return loss;
    }
    // Cross-entropy against labels normalized to a distribution; combined
    // with softmax the logit gradient is s - target.
    double row_sum = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) row_sum += L->at(t, n) ? 1.0 : 0.0;
    double loss = 0.0;
    dout.resize(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) {
      const double target = (L->at(t, n) ? 1.0 : 0.0) / row_sum;
      if (target > 0.0) loss -= target * std::log(std::max(s[n], 1e-300));
      dout[n] = s[n] - target;
    }
    return loss;
  }
};

// Rows of mean particle distances: row(t)[n] = (1/Q) sum_q |Y_nq - y_t|.
struct W1Objective {
  const std::vector<Vec>* X;
  const Matrix* rows;

  ConstSpan input(std::size_t t) const { return (*X)[t]; }
  double loss_and_grad(std::size_t t, ConstSpan out, Vec& dout) const {
    const Vec s = softmax(out);
    ConstSpan d = rows->row(t);
    dout = softmax_backward(s, d);
    return dot(s, d);
  }
};

struct RegressionObjective {
  const std::vector<Vec>* X;
  const std::vector<Vec>* Y;

  ConstSpan input(std::size_t t) const { return (*X)[t]; }
  double loss_and_grad(std::size_t t, ConstSpan out, Vec& dout) const {
    ConstSpan y = (*Y)[t];
    double loss = 0.0;
    dout.resize(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double r = out[i] - y[i];
      loss += r * r;
      dout[i] = 2.0 * r;
    }
    return loss;
  }
};

// Classical attention readout trained by MSE: out are the N logits, the
// prediction is sum_n softmax(out)_n * slot_mean(n).
struct ClassicalObjective {
  const std::vector<Vec>* X;
  const std::vector<Vec>* Y;
  const std::vector<Vec>* slot_means;  // N vectors of dim m

  ConstSpan input(std::size_t t) const { return (*X)[t]; }
  double loss_and_grad(std::size_t t, ConstSpan out, Vec& dout) const {
    const Vec s = softmax(out);
    const std::size_t m = (*Y)[t].size();
    Vec pred(m, 0.0);
    for (std::size_t n = 0; n < s.size(); ++n) axpy(s[n], (*slot_means)[n], pred);
    ConstSpan y = (*Y)[t];
    double loss = 0.0;
    Vec dpred(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = pred[i] - y[i];
      loss += r * r;
      dpred[i] = 2.0 * r;
    }
    Vec ds(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) ds[n] = dot(dpred, (*slot_means)[n]);
    dout = softmax_backward(s, ds);
    return loss;
  }
};

Matrix mean_particle_distances(const ParticleArray& particles, const std::vector<Vec>& Y) {
  Matrix rows(Y.size(), particles.count);
  const double invq = 1.0 / static_cast<double>(particles.per_slot);
  for (std::size_t t = 0; t < Y.size(); ++t)
    for (std::size_t n = 0; n < particles.count; ++n) {
      double d = 0.0;
      for (std::size_t q = 0; q < particles.per_slot; ++q)
        d += distance(particles.at(n, q), Y[t]);
      rows(t, n) = d * invq;
    }
  return rows;
}

void check_dataset(const std::vector<Vec>& X, const std::vector<Vec>& Y) {
  if (X.empty() || X.size() != Y.size())
    throw std::invalid_argument("training: inputs/outputs must be non-empty and aligned");
  for (std::size_t t = 1; t < X.size(); ++t)
    if (X[t].size() != X[0].size() || Y[t].size() != Y[0].size())
      throw std::invalid_argument("training: ragged dataset");
}

}  // namespace

LossTrace fit_classifier(std::vector<DenseNet*> stack, const std::vector<Vec>& inputs,
                         const LabelMatrix& labels, const TrainConfig& cfg, Rng& rng) {
  cfg.validate();
  labels.validate();
  check_stack(stack);
  if (labels.rows != inputs.size())
    throw std::invalid_argument("fit_classifier: label row count != inputs");
  if (labels.cols != stack.back()->output_dim())
    throw std::invalid_argument("fit_classifier: label column count != net output");
  return run_training(stack, inputs.size(), cfg, rng,
                      LabelObjective{&inputs, &labels, cfg.label_cross_entropy});
}

LossTrace fit_classifier(DenseNet& net, const std::vector<Vec>& inputs,
                         const LabelMatrix& labels, const TrainConfig& cfg, Rng& rng) {
  return fit_classifier(std::vector<DenseNet*>{&net}, inputs, labels, cfg, rng);
}

LossTrace fit_classifier_masked_reference(std::vector<DenseNet*> stack,
                                          const std::vector<Vec>& inputs,
                                          const LabelMatrix& labels, const TrainConfig& cfg,
                                          Rng& rng) {
  cfg.validate();
  labels.validate();
  check_stack(stack);
  if (labels.rows != inputs.size() || labels.cols != stack.back()->output_dim())
    throw std::invalid_argument("fit_classifier_masked_reference: shape mismatch");

  LabelObjective obj{&inputs, &labels, cfg.label_cross_entropy};
  LossTrace trace;
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<GradientBundle> grads;
  std::vector<OptimizerState> states;
  for (DenseNet* n : stack) {
    grads.push_back(GradientBundle::zeros_like(*n));
    states.push_back(OptimizerState::zeros_like(*n));
  }
  StackTape tape;
  Vec dout;
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    shuffle_indices(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < inputs.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(inputs.size(), start + cfg.batch_size);
      const double inv_b = 1.0 / static_cast<double>(stop - start);
      for (auto& g : grads) g.set_zero();
      for (std::size_t s = start; s < stop; ++s) {
        const std::size_t t = order[s];
        const Vec out = stack_forward(stack, obj.input(t), &tape);
        epoch_loss += obj.loss_and_grad(t, out, dout);
        for (double& g : dout) g *= inv_b;
        stack_backward(stack, tape, dout, grads);
      }
      // Mask: zero everything except the final layer of the last net.
      for (std::size_t i = 0; i + 1 < stack.size(); ++i) grads[i].set_zero();
      GradientBundle& g_last = grads.back();
      for (std::size_t j = 0; j + 1 < g_last.weight.size(); ++j) {
        std::fill(g_last.weight[j].data.begin(), g_last.weight[j].data.end(), 0.0);
        std::fill(g_last.bias[j].begin(), g_last.bias[j].end(), 0.0);
      }
      for (std::size_t i = 0; i < stack.size(); ++i)
        optimizer_step(*stack[i], grads[i], states[i], cfg.optimizer);
    }
    epoch_loss /= static_cast<double>(inputs.size());
    if (!std::isfinite(epoch_loss))
      throw DivergenceError("training: non-finite loss at epoch " + std::to_string(e));
    trace.per_epoch.push_back(epoch_loss);
  }
  return trace;
}

WassersteinGrad wasserstein_loss_and_grad(const ProbabilisticTransformer& model,
                                          const std::vector<Vec>& batch_x,
                                          const std::vector<Vec>& batch_y) {
  model.validate();
  check_dataset(batch_x, batch_y);
  WassersteinGrad out;
  out.encoder = GradientBundle::zeros_like(model.encoder);
  out.head = GradientBundle::zeros_like(model.head);
  const double inv_b = 1.0 / static_cast<double>(batch_x.size());
  ForwardTape enc_tape, head_tape;
  const ParticleArray& P = model.particles;
  const double invq = 1.0 / static_cast<double>(P.per_slot);
  Vec d(P.count);
  for (std::size_t t = 0; t < batch_x.size(); ++t) {
    const Vec code = forward(model.encoder, batch_x[t], &enc_tape);
    const Vec logits = forward(model.head, code, &head_tape);
    const Vec s = softmax(logits);
    for (std::size_t n = 0; n < P.count; ++n) {
      double acc = 0.0;
      for (std::size_t q = 0; q < P.per_slot; ++q) acc += distance(P.at(n, q), batch_y[t]);
      d[n] = acc * invq;
    }
    out.loss += dot(s, d) * inv_b;
    Vec dlogits = softmax_backward(s, d);
    for (double& g : dlogits) g *= inv_b;
    const Vec dcode = backward(model.head, head_tape, dlogits, out.head);
    backward(model.encoder, enc_tape, dcode, out.encoder);
  }
  return out;
}

// ---------------------------------------------------------------------------
// End-to-end trainers

ParticleSelection build_particles(const ConstraintSet& set, const TrainConfig& cfg) {
  Rng base(cfg.seed);
  Rng pool_rng = base.derive("pool");
  Rng anchor_rng = base.derive("anchors");
  const std::vector<Vec> pool = set.sample(pool_rng, cfg.pool_size);
  return select_particles(pool, cfg.slots, cfg.per_slot, anchor_rng);
}

namespace {

ProbabilisticTransformer train_attention_model(const std::vector<Vec>& X,
                                               const std::vector<Vec>& Y,
                                               std::shared_ptr<const ConstraintSet> set,
                                               const TrainConfig& cfg, LossTrace* trace,
                                               bool classical_objective) {
  cfg.validate();
  check_dataset(X, Y);
  if (!set) throw std::invalid_argument("training: null constraint set");
  if (Y[0].size() != set->ambient_dim())
    throw std::invalid_argument("training: output dim != constraint set dim");

  Rng base(cfg.seed);
  ParticleSelection sc = build_particles(*set, cfg);

  Rng init_rng = base.derive("init");
  std::vector<std::size_t> enc_widths = cfg.encoder_hidden;
  enc_widths.push_back(cfg.latent_dim);
  std::vector<std::size_t> head_widths = cfg.head_hidden;
  head_widths.push_back(cfg.slots);
  DenseNet encoder = DenseNet::random(X[0].size(), enc_widths, cfg.alpha, init_rng);
  DenseNet head = DenseNet::random(cfg.latent_dim, head_widths, cfg.alpha, init_rng);

  Rng fit_rng = base.derive("fit");
  LossTrace local;
  std::vector<DenseNet*> stack{&encoder, &head};
  if (classical_objective) {
    std::vector<Vec> slot_means(sc.particles.count);
    for (std::size_t n = 0; n < sc.particles.count; ++n)
      slot_means[n] = sc.particles.slot_mean(n);
    local = run_training(stack, X.size(), cfg, fit_rng,
                         ClassicalObjective{&X, &Y, &slot_means});
  } else if (cfg.loss == LossKind::wasserstein) {
    const Matrix rows = mean_particle_distances(sc.particles, Y);
    local = run_training(stack, X.size(), cfg, fit_rng, W1Objective{&X, &rows});
  } else {
    const LabelMatrix labels = make_labels(Y, sc.anchors);
    local = fit_classifier(stack, X, labels, cfg, fit_rng);
  }
  if (trace) *trace = std::move(local);

  ProbabilisticTransformer model;
  model.encoder = std::move(encoder);
  model.head = std::move(head);
  model.particles = std::move(sc.particles);
  model.constraint_set = std::move(set);
  model.validate();
  return model;
}

}  // namespace

ProbabilisticTransformer train_probabilistic_transformer(
    const std::vector<Vec>& X, const std::vector<Vec>& Y,
    std::shared_ptr<const ConstraintSet> set, const TrainConfig& cfg, LossTrace* trace) {
  return train_attention_model(X, Y, std::move(set), cfg, trace, false);
}

ProbabilisticTransformer train_classical_transformer(
    const std::vector<Vec>& X, const std::vector<Vec>& Y,
    std::shared_ptr<const ConstraintSet> set, const TrainConfig& cfg, LossTrace* trace) {
  return train_attention_model(X, Y, std::move(set), cfg, trace, true);
}

MlpRegressor train_baseline_mlp(const std::vector<Vec>& X, const std::vector<Vec>& Y,
                                const TrainConfig& cfg, LossTrace* trace) {
  cfg.validate();
  check_dataset(X, Y);
  Rng base(cfg.seed);
  Rng init_rng = base.derive("init");
  std::vector<std::size_t> widths = cfg.mlp_hidden;
  widths.push_back(Y[0].size());
  DenseNet net = DenseNet::random(X[0].size(), widths, cfg.mlp_alpha, init_rng);
  Rng fit_rng = base.derive("fit");
  std::vector<DenseNet*> stack{&net};
  LossTrace local = run_training(stack, X.size(), cfg, fit_rng, RegressionObjective{&X, &Y});
  if (trace) *trace = std::move(local);
  return MlpRegressor{std::move(net)};
}

}  // namespace pattn
