#ifndef PIXELSTORM_MODEL_IO_HPP
#define PIXELSTORM_MODEL_IO_HPP

#include <filesystem>
#include <string>

#include "pixelstorm/classifier.hpp"

namespace pixelstorm {

// JSON interchange:
//   {"input_shape":[h,w,c], "classes":[...], "metadata":{...}?,
//    "layers":[{"kind":"conv2d","kernel":3,"stride":1,"depth":N,"padding":"same"|"valid",
//               "weights":[(kh,kw,cin,cout) row-major], "bias":[...]},
//              {"kind":"maxpool"|"avgpool","kernel":k,"stride":s},
//              {"kind":"dense","units":N,"weights":[(in,out) flat or nested rows],"bias":[...]},
//              {"kind":"relu"|"flatten"|"softmax"}]}
// Every loaded model is shape-validated; errors are ModelError.

LayeredModel parse_model(const std::string& json_text);
LayeredModel load_model(const std::filesystem::path& path);

std::string model_to_json(const LayeredModel& model);
void save_model(const LayeredModel& model, const std::filesystem::path& path);

}  // namespace pixelstorm

#endif  // PIXELSTORM_MODEL_IO_HPP
