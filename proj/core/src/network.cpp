#include "cadweno/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace cadweno {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "cadweno-weights";

void check_finite(const double* values, int n, const char* layer) {
  for (int k = 0; k < n; ++k) {
    if (!std::isfinite(values[k])) {
      throw NetworkEvaluationError(std::string("non-finite activation in ") + layer);
    }
  }
}

struct LayerShape {
  const char* name;
  int offset_w;
  int offset_b;
  int rows;
  int cols;
};

constexpr std::array<LayerShape, 3> kLayers = {{
    {"hidden1", kW1Offset, kB1Offset, kHiddenWidth, kInputFeatures},
    {"hidden2", kW2Offset, kB2Offset, kHiddenWidth, kHiddenWidth},
    {"output", kW3Offset, kB3Offset, kOutputWidth, kHiddenWidth},
}};

}  // namespace

bool NetworkParams::all_finite() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double gelu(double x) noexcept { return 0.5 * x * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0)); }

double gelu_derivative(double x) noexcept {
  const double pdf = std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
  return 0.5 * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0)) + x * pdf;
}

ForwardTrace forward_trace(const NetworkParams& p, const Stencil3& s) {
  ForwardTrace t;
  t.delta = modified_delta_layer(s);

  for (int o = 0; o < kHiddenWidth; ++o) {
    double acc = p.b1(o);
    for (int i = 0; i < kInputFeatures; ++i) acc += p.w1(o, i) * t.delta.d[i];
    t.pre1[o] = acc;
    t.act1[o] = gelu(acc);
  }
  check_finite(t.act1.data(), kHiddenWidth, "hidden layer 1");

  for (int o = 0; o < kHiddenWidth; ++o) {
    double acc = p.b2(o);
    for (int i = 0; i < kHiddenWidth; ++i) acc += p.w2(o, i) * t.act1[i];
    t.pre2[o] = acc;
    t.act2[o] = gelu(acc);
  }
  check_finite(t.act2.data(), kHiddenWidth, "hidden layer 2");

  for (int o = 0; o < kOutputWidth; ++o) {
    double acc = p.b3(o);
    for (int i = 0; i < kHiddenWidth; ++i) acc += p.w3(o, i) * t.act2[i];
    t.logits[o] = acc;
  }
  check_finite(t.logits.data(), kOutputWidth, "output layer");

  // log-softmax with max subtraction
  const double m = std::max(t.logits[0], t.logits[1]);
  const double lse = m + std::log(std::exp(t.logits[0] - m) + std::exp(t.logits[1] - m));
  t.log_weights = {t.logits[0] - lse, t.logits[1] - lse};
  t.output = {std::exp(t.log_weights[0]), std::exp(t.log_weights[1])};
  return t;
}

WeightPair forward(const NetworkParams& p, const Stencil3& s) {
  const DeltaFeatures delta = modified_delta_layer(s);

  std::array<double, kHiddenWidth> a1{};
  for (int o = 0; o < kHiddenWidth; ++o) {
    double acc = p.b1(o);
    for (int i = 0; i < kInputFeatures; ++i) acc += p.w1(o, i) * delta.d[i];
    a1[o] = gelu(acc);
  }
  check_finite(a1.data(), kHiddenWidth, "hidden layer 1");

  std::array<double, kHiddenWidth> a2{};
  for (int o = 0; o < kHiddenWidth; ++o) {
    double acc = p.b2(o);
    for (int i = 0; i < kHiddenWidth; ++i) acc += p.w2(o, i) * a1[i];
    a2[o] = gelu(acc);
  }
  check_finite(a2.data(), kHiddenWidth, "hidden layer 2");

  std::array<double, kOutputWidth> z{};
  for (int o = 0; o < kOutputWidth; ++o) {
    double acc = p.b3(o);
    for (int i = 0; i < kHiddenWidth; ++i) acc += p.w3(o, i) * a2[i];
    z[o] = acc;
  }
  check_finite(z.data(), kOutputWidth, "output layer");

  const double m = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - m);
  const double e1 = std::exp(z[1] - m);
  const double sum = e0 + e1;
  return {e0 / sum, e1 / sum};
}

std::string params_to_json(const NetworkParams& p) {
  json layers = json::array();
  for (const LayerShape& shape : kLayers) {
    json weight = json::array();
    for (int r = 0; r < shape.rows; ++r) {
      json row = json::array();
      for (int c = 0; c < shape.cols; ++c) row.push_back(p.values[shape.offset_w + r * shape.cols + c]);
      weight.push_back(std::move(row));
    }
    json bias = json::array();
    for (int r = 0; r < shape.rows; ++r) bias.push_back(p.values[shape.offset_b + r]);
    layers.push_back({{"name", shape.name}, {"weight", std::move(weight)}, {"bias", std::move(bias)}});
  }

  json doc;
  doc["format"] = kFormatTag;
  doc["format_version"] = p.metadata.format_version;
  doc["architecture"] = {{"preprocessing", "modified-delta"},
                         {"inputs", kInputFeatures},
                         {"hidden", {kHiddenWidth, kHiddenWidth}},
                         {"activation", "gelu-erf"},
                         {"outputs", kOutputWidth}};
  doc["layers"] = std::move(layers);
  doc["metadata"] = {{"hyper_C", p.metadata.hyper_c},
                     {"hyper_D", p.metadata.hyper_d},
                     {"rng_seed", p.metadata.rng_seed},
                     {"training_loss", p.metadata.training_loss}};
  // nlohmann::json prints doubles in shortest round-trip form, so text -> double is exact.
  return doc.dump(1);
}

NetworkParams params_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedWeightFileError(std::string("weight file is not valid JSON: ") + e.what());
  }

  NetworkParams p;
  try {
    if (doc.at("format").get<std::string>() != kFormatTag) {
      throw MalformedWeightFileError("weight file has an unknown format tag");
    }
    const int version = doc.at("format_version").get<int>();
    if (version != kWeightFormatVersion) {
      throw WeightVersionError("weight file format_version " + std::to_string(version) +
                               " is not supported (expected " +
                               std::to_string(kWeightFormatVersion) + ")");
    }
    p.metadata.format_version = version;

    const json& layers = doc.at("layers");
    if (!layers.is_array() || layers.size() != kLayers.size()) {
      throw WeightDimensionError("weight file must contain exactly 3 layers");
    }
    for (std::size_t l = 0; l < kLayers.size(); ++l) {
      const LayerShape& shape = kLayers[l];
      const json& weight = layers[l].at("weight");
      const json& bias = layers[l].at("bias");
      if (!weight.is_array() || weight.size() != static_cast<std::size_t>(shape.rows) ||
          !bias.is_array() || bias.size() != static_cast<std::size_t>(shape.rows)) {
        std::ostringstream msg;
        msg << "layer " << shape.name << " must have " << shape.rows << " nodes, found "
            << (weight.is_array() ? weight.size() : 0);
        throw WeightDimensionError(msg.str());
      }
      for (int r = 0; r < shape.rows; ++r) {
        const json& row = weight[r];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(shape.cols)) {
          std::ostringstream msg;
          msg << "layer " << shape.name << " rows must have " << shape.cols << " inputs";
          throw WeightDimensionError(msg.str());
        }
        for (int c = 0; c < shape.cols; ++c) {
          p.values[shape.offset_w + r * shape.cols + c] = row[c].get<double>();
        }
        p.values[shape.offset_b + r] = bias[r].get<double>();
      }
    }

    const json& meta = doc.at("metadata");
    p.metadata.hyper_c = meta.at("hyper_C").get<double>();
    p.metadata.hyper_d = meta.at("hyper_D").get<double>();
    p.metadata.rng_seed = meta.at("rng_seed").get<std::uint64_t>();
    p.metadata.training_loss = meta.at("training_loss").get<double>();
  } catch (const json::exception& e) {
    throw MalformedWeightFileError(std::string("weight file is missing or mistyped a field: ") +
                                   e.what());
  }

  if (!p.all_finite()) {
    throw MalformedWeightFileError("weight file contains non-finite parameters");
  }
  return p;
}

void save_params(const NetworkParams& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw WeightFileError("cannot open weight file for writing: " + path.string());
  }
  out << params_to_json(p) << '\n';
  if (!out) {
    throw WeightFileError("failed writing weight file: " + path.string());
  }
}

NetworkParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw WeightFileError("cannot open weight file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return params_from_json(buffer.str());
}

}  // namespace cadweno
