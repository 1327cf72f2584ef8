#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tracenorm/model.hpp"
#include "tracenorm/solvers.hpp"

namespace tracenorm {

// Container layout: "TNMD", u32 version (=1), u64 header length, a UTF-8 JSON
// header (norm, lambda, bias, task, tensor list), then the weight tensor and
// any latent parts as consecutive TNSR records in header order.
void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

/// JSON text of a FitReport (trace included).
std::string fit_report_json(const FitReport& report);

}  // namespace tracenorm
