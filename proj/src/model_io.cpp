#include "pixelstorm/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pixelstorm {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* name, int index) {
  if (!j.contains(name)) throw ModelError(index, std::string("missing field \"") + name + "\"");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw ModelError(index, std::string("field \"") + name + "\" has the wrong type");
  }
}

std::vector<double> dense_weights(const json& j, int units, int index) {
  const json& w = j.at("weights");
  if (!w.is_array()) throw ModelError(index, "dense weights must be an array");
  if (w.empty() || !w.front().is_array()) return field<std::vector<double>>(j, "weights", index);
  std::vector<double> flat;
  for (std::size_t r = 0; r < w.size(); ++r) {
    const auto row = w[r].get<std::vector<double>>();
    if (row.size() != static_cast<std::size_t>(units)) {
      throw ModelError(index, "dense weight row " + std::to_string(r) + " has " +
                                  std::to_string(row.size()) + " columns, expected " +
                                  std::to_string(units));
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}

Layer parse_layer(const json& j, int index) {
  if (!j.is_object()) throw ModelError(index, "layer must be an object");
  const auto kind = field<std::string>(j, "kind", index);
  if (kind == "conv2d") {
    Conv2D c;
    c.kernel = field<int>(j, "kernel", index);
    c.stride = field<int>(j, "stride", index);
    c.depth = field<int>(j, "depth", index);
    const auto pad = field<std::string>(j, "padding", index);
    if (pad == "same") c.padding = Padding::same;
    else if (pad == "valid") c.padding = Padding::valid;
    else throw ModelError(index, "unknown padding \"" + pad + "\"");
    c.weights = field<std::vector<double>>(j, "weights", index);
    c.bias = field<std::vector<double>>(j, "bias", index);
    return c;
  }
  if (kind == "maxpool") return MaxPool{field<int>(j, "kernel", index), field<int>(j, "stride", index)};
  if (kind == "avgpool") return AvgPool{field<int>(j, "kernel", index), field<int>(j, "stride", index)};
  if (kind == "dense") {
    Dense d;
    d.units = field<int>(j, "units", index);
    if (!j.contains("weights")) throw ModelError(index, "missing field \"weights\"");
    d.weights = dense_weights(j, d.units, index);
    d.bias = field<std::vector<double>>(j, "bias", index);
    return d;
  }
  if (kind == "relu") return ReLU{};
  if (kind == "flatten") return Flatten{};
  if (kind == "softmax") return Softmax{};
  throw ModelError(index, "unknown layer kind \"" + kind + "\"");
}

}  // namespace

LayeredModel parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(-1, std::string("model parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError(-1, "model document must be an object");

  LayeredModel m;
  const auto shape = field<std::vector<int>>(doc, "input_shape", -1);
  if (shape.size() != 3) throw ModelError(-1, "input_shape must have three entries [h,w,c]");
  m.input_shape = Shape{shape[0], shape[1], shape[2]};
  m.classes = field<std::vector<std::string>>(doc, "classes", -1);
  if (doc.contains("metadata")) m.metadata_json = doc["metadata"].dump();

  if (!doc.contains("layers") || !doc["layers"].is_array()) {
    throw ModelError(-1, "missing \"layers\" array");
  }
  int index = 0;
  for (const auto& l : doc["layers"]) m.layers.push_back(parse_layer(l, index++));
  m.validate();
  return m;
}

LayeredModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError(-1, "cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string model_to_json(const LayeredModel& model) {
  json layers = json::array();
  for (const Layer& layer : model.layers) {
    json j{{"kind", layer_kind(layer)}};
    std::visit(
        [&j](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, Conv2D>) {
            j["kernel"] = l.kernel;
            j["stride"] = l.stride;
            j["depth"] = l.depth;
            j["padding"] = l.padding == Padding::same ? "same" : "valid";
            j["weights"] = l.weights;
            j["bias"] = l.bias;
          } else if constexpr (std::is_same_v<T, MaxPool> || std::is_same_v<T, AvgPool>) {
            j["kernel"] = l.kernel;
            j["stride"] = l.stride;
          } else if constexpr (std::is_same_v<T, Dense>) {
            j["units"] = l.units;
            j["weights"] = l.weights;
            j["bias"] = l.bias;
          }
        },
        layer);
    layers.push_back(std::move(j));
  }
  json doc{{"input_shape", {model.input_shape.height, model.input_shape.width, model.input_shape.channels}},
           {"classes", model.classes},
           {"layers", std::move(layers)}};
  if (!model.metadata_json.empty()) doc["metadata"] = json::parse(model.metadata_json);
  return doc.dump();
}

void save_model(const LayeredModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file " + path.string());
  out << model_to_json(model) << '\n';
}

}  // namespace pixelstorm
