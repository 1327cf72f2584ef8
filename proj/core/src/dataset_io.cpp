#include "tracenorm/dataset_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/tensor_io.hpp"

namespace tracenorm {

namespace fs = std::filesystem;
using nlohmann::json;

void write_dataset(const fs::path& dir, const Dataset& data) {
  data.validate();
  fs::create_directories(dir);
  const Shape& shape = data.shape();
  const std::size_t m = data.size();
  const std::size_t n = element_count(shape);

  Shape stacked = shape;
  stacked.push_back(m);
  std::vector<double> values;
  values.reserve(n * m);
  for (const auto& x : data.covariates) values.insert(values.end(), x.data().begin(), x.data().end());
  save_tensor(dir / "covariates.tnsr", DenseTensor(stacked, std::move(values)));
  save_tensor(dir / "targets.tnsr", DenseTensor(Shape{m}, data.targets));

  json manifest;
  manifest["format"] = "tracenorm-dataset";
  manifest["version"] = 1;
  manifest["task"] = to_string(data.task);
  manifest["shape"] = shape;
  manifest["samples"] = m;
  manifest["covariates"] = "covariates.tnsr";
  manifest["targets"] = "targets.tnsr";
  manifest["provenance"] = data.provenance;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw FormatError("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

Dataset read_dataset(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw FormatError("missing manifest.json in " + dir.string());
  std::stringstream text;
  text << in.rdbuf();

  Dataset data;
  Shape shape;
  std::size_t m = 0;
  std::string covariates_file;
  std::string targets_file;
  try {
    const json manifest = json::parse(text.str());
    if (manifest.at("format").get<std::string>() != "tracenorm-dataset")
      throw FormatError("manifest format is not tracenorm-dataset");
    if (manifest.at("version").get<int>() != 1) throw FormatError("unsupported dataset version");
    data.task = task_from_string(manifest.at("task").get<std::string>());
    shape = manifest.at("shape").get<Shape>();
    m = manifest.at("samples").get<std::size_t>();
    covariates_file = manifest.at("covariates").get<std::string>();
    targets_file = manifest.at("targets").get<std::string>();
    if (manifest.contains("provenance")) data.provenance = manifest["provenance"].get<std::string>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
  try {
    validate_shape(shape);
  } catch (const ShapeError& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }

  const DenseTensor covariates = load_tensor(dir / covariates_file);
  const DenseTensor targets = load_tensor(dir / targets_file);
  Shape stacked = shape;
  stacked.push_back(m);
  if (covariates.shape() != stacked)
    throw FormatError("covariates shape " + shape_to_string(covariates.shape()) + " does not match manifest " +
                      shape_to_string(stacked));
  if (targets.shape() != Shape{m}) throw FormatError("targets shape does not match the manifest sample count");

  const std::size_t n = element_count(shape);
  const auto values = covariates.data();
  data.covariates.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    data.covariates.emplace_back(shape, std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(i * n),
                                                            values.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
  data.targets.assign(targets.data().begin(), targets.data().end());
  try {
    data.validate();
  } catch (const Error& e) {
    throw FormatError(std::string("inconsistent dataset: ") + e.what());
  }
  return data;
}

}  // namespace tracenorm
