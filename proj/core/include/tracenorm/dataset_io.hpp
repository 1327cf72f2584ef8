#pragma once

#include <filesystem>

#include "tracenorm/dataset.hpp"

namespace tracenorm {

/// Directory layout:
///   manifest.json     {"format": "tracenorm-dataset", "version": 1, "task": ...,
///                      "shape": [...], "samples": m,
///                      "covariates": "covariates.tnsr", "targets": "targets.tnsr",
///                      "provenance": "..."}
///   covariates.tnsr   one tensor of shape (n_1, ..., n_K, m); sample i is the
///                     contiguous slab with last index i
///   targets.tnsr      one tensor of shape (m)
void write_dataset(const std::filesystem::path& dir, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace tracenorm
