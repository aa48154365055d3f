#include "pattn/model.hpp"

#include <stdexcept>

#include "json.hpp"
#include "pattn/errors.hpp"

namespace pattn {

void ProbabilisticTransformer::validate() const {
  encoder.validate();
  head.validate();
  if (head.input_dim() != encoder.output_dim())
    throw std::invalid_argument("model: encoder/head dimension mismatch");
  if (head.output_dim() != particles.count)
    throw std::invalid_argument("model: head output != particle slot count");
  if (!constraint_set) throw std::invalid_argument("model: null constraint set");
  if (particles.dim != constraint_set->ambient_dim())
    throw std::invalid_argument("model: particle dim != ambient dim");
  for (std::size_t n = 0; n < particles.count; ++n)
    for (std::size_t q = 0; q < particles.per_slot; ++q)
      if (!constraint_set->member(particles.at(n, q)))
        throw std::invalid_argument("model: particle outside the constraint set");
}

Vec ProbabilisticTransformer::logits(ConstSpan x) const {
  return forward(head, forward(encoder, x));
}

DiscreteMeasure predict_measure(const ProbabilisticTransformer& model, ConstSpan x) {
  return p_attention(model.logits(x), model.particles);
}

Vec predict_mean(const ProbabilisticTransformer& model, ConstSpan x) {
  return expectation(predict_measure(model, x));
}

Vec predict_frechet(const ProbabilisticTransformer& model, ConstSpan x) {
  if (!model.constraint_set->has_geodesic_ops())
    throw CapabilityError("predict_frechet: constraint set has no geodesic ops");
  return frechet_mean(predict_measure(model, x), model.constraint_set->geodesic_ops());
}

Vec predict_frechet_trimmed(const ProbabilisticTransformer& model, ConstSpan x,
                            double mass) {
  if (!model.constraint_set->has_geodesic_ops())
    throw CapabilityError("predict_frechet_trimmed: constraint set has no geodesic ops");
  const DiscreteMeasure mu = top_mass(predict_measure(model, x), mass);
  try {
    return frechet_mean(mu, model.constraint_set->geodesic_ops());
  } catch (const GeodesicBallError&) {
    return mode(mu);
  }
}

Vec predict_mode(const ProbabilisticTransformer& model, ConstSpan x) {
  return mode(predict_measure(model, x));
}

Vec classical_attention_predict(const ProbabilisticTransformer& model, ConstSpan x) {
  const Vec s = softmax(model.logits(x));
  Vec out(model.particles.dim, 0.0);
  for (std::size_t n = 0; n < model.particles.count; ++n)
    axpy(s[n], model.particles.slot_mean(n), out);
  return out;
}

Vec predict(const MlpRegressor& model, ConstSpan x) { return forward(model.net, x); }

// ---------------------------------------------------------------------------
// Serialization.  Weights are emitted as JSON numbers; the serializer writes
// shortest-round-trip decimals, so doubles survive save/load bit for bit.

namespace {
using nlohmann::json;

json net_to_json(const DenseNet& net) {
  json layers = json::array();
  for (const Layer& l : net.layers) {
    layers.push_back({{"rows", l.weight.rows},
                      {"cols", l.weight.cols},
                      {"weight", l.weight.data},
                      {"bias", l.bias},
                      {"alpha", l.alpha}});
  }
  return json{{"layers", layers}};
}

DenseNet net_from_json(const json& j) {
  DenseNet net;
  for (const json& lj : j.at("layers")) {
    Layer l;
    l.weight = Matrix(lj.at("rows").get<std::size_t>(), lj.at("cols").get<std::size_t>());
    l.weight.data = lj.at("weight").get<std::vector<double>>();
    if (l.weight.data.size() != l.weight.rows * l.weight.cols)
      throw ConfigError("model: weight length does not match shape");
    l.bias = lj.at("bias").get<Vec>();
    l.alpha = lj.at("alpha").get<double>();
    net.layers.push_back(std::move(l));
  }
  net.validate();
  return net;
}
}  // namespace

std::string model_to_json_string(const ProbabilisticTransformer& model) {
  model.validate();
  json j;
  j["encoder"] = net_to_json(model.encoder);
  j["head"] = net_to_json(model.head);
  j["particles"] = {{"count", model.particles.count},
                    {"per_slot", model.particles.per_slot},
                    {"dim", model.particles.dim},
                    {"data", model.particles.data}};
  j["constraint_set"] = json::parse(model.constraint_set->to_json_string());
  return j.dump();
}

ProbabilisticTransformer model_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: bad JSON: ") + e.what());
  }
  try {
    ProbabilisticTransformer model;
    model.encoder = net_from_json(j.at("encoder"));
    model.head = net_from_json(j.at("head"));
    const json& p = j.at("particles");
    model.particles = ParticleArray(p.at("count").get<std::size_t>(),
                                    p.at("per_slot").get<std::size_t>(),
                                    p.at("dim").get<std::size_t>());
    model.particles.data = p.at("data").get<std::vector<double>>();
    if (model.particles.data.size() !=
        model.particles.count * model.particles.per_slot * model.particles.dim)
      throw ConfigError("model: particle data length does not match shape");
    model.constraint_set = ConstraintSet::from_json_string(j.at("constraint_set").dump());
    model.validate();
    return model;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

std::string model_to_json_string(const MlpRegressor& model) {
  model.net.validate();
  json j;
  j["net"] = net_to_json(model.net);
  return j.dump();
}

MlpRegressor mlp_from_json_string(const std::string& text) {
  try {
    json j = json::parse(text);
    return MlpRegressor{net_from_json(j.at("net"))};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: bad JSON: ") + e.what());
  }
}

}  // namespace pattn
