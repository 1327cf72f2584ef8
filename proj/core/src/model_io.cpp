#include "tracenorm/model_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/tensor_io.hpp"

namespace tracenorm {

namespace {

using nlohmann::json;

constexpr char kModelMagic[4] = {'T', 'N', 'M', 'D'};
constexpr std::uint32_t kModelVersion = 1;
constexpr std::uint64_t kMaxHeaderBytes = 1u << 24;

template <typename T>
void swap_if_big(T& value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto* bytes = reinterpret_cast<unsigned char*>(&value);
    std::reverse(bytes, bytes + sizeof(T));
  }
}

template <typename T>
void put_le(std::ostream& out, T value) {
  swap_if_big(value);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw FormatError("truncated model header");
  swap_if_big(value);
  return value;
}

json norm_to_json(const NormKind& norm) {
  return json{{"family", to_string(norm.family)}, {"modes", norm.modes}, {"weights", norm.weights}};
}

NormKind norm_from_json(const json& j) {
  NormKind norm;
  norm.family = norm_family_from_string(j.at("family").get<std::string>());
  norm.modes = j.at("modes").get<std::vector<std::size_t>>();
  norm.weights = j.at("weights").get<std::vector<double>>();
  return norm;
}

}  // namespace

void write_model(std::ostream& out, const Model& model) {
  json header;
  header["format"] = "tracenorm-model";
  header["norm"] = norm_to_json(model.norm);
  header["norm_label"] = model.norm.label(model.weight.shape());
  header["lambda"] = model.lambda;
  header["bias"] = model.bias;
  header["task"] = to_string(model.task);
  header["shape"] = model.weight.shape();
  json tensors = json::array({"weight"});
  for (std::size_t j = 0; j < model.latent_parts.size(); ++j) tensors.push_back("latent_" + std::to_string(j));
  header["tensors"] = tensors;
  const std::string text = header.dump();

  out.write(kModelMagic, 4);
  put_le<std::uint32_t>(out, kModelVersion);
  put_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  write_tensor(out, model.weight);
  for (const auto& part : model.latent_parts) write_tensor(out, part);
  if (!out) throw FormatError("failed to write model");
}

Model read_model(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in) throw FormatError("truncated model header");
  if (!std::equal(magic, magic + 4, kModelMagic)) throw FormatError("bad model magic");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kModelVersion) throw FormatError("unsupported model version " + std::to_string(version));
  const auto length = get_le<std::uint64_t>(in);
  if (length > kMaxHeaderBytes) throw FormatError("model header too large");
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw FormatError("truncated model header");

  Model model;
  std::size_t tensor_count = 0;
  try {
    const json header = json::parse(text);
    model.norm = norm_from_json(header.at("norm"));
    model.lambda = header.at("lambda").get<double>();
    model.bias = header.at("bias").get<double>();
    model.task = task_from_string(header.at("task").get<std::string>());
    tensor_count = header.at("tensors").size();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad model header: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("bad model header: ") + e.what());
  }
  if (tensor_count == 0) throw FormatError("model has no weight tensor");
  model.weight = read_tensor(in);
  for (std::size_t j = 1; j < tensor_count; ++j) {
    model.latent_parts.push_back(read_tensor(in));
    if (model.latent_parts.back().shape() != model.weight.shape())
      throw FormatError("latent part shape differs from the weight shape");
  }
  try {
    model.norm.validate(model.weight.order());
  } catch (const Error& e) {
    throw FormatError(std::string("bad norm in model header: ") + e.what());
  }
  return model;
}

void save_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_model(out, model);
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_model(in);
}

std::string fit_report_json(const FitReport& report) {
  json j;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["final_gap"] = report.final_gap;
  j["primal"] = report.primal;
  j["dual"] = report.dual;
  j["seconds"] = report.seconds;
  j["message"] = report.message;
  j["final_spectral_norms"] = report.final_spectral_norms;
  json trace = json::array();
  for (const auto& r : report.trace)
    trace.push_back({{"primal", r.primal}, {"dual", r.dual}, {"relative_gap", r.relative_gap}});
  j["trace"] = std::move(trace);
  return j.dump(2);
}

}  // namespace tracenorm
