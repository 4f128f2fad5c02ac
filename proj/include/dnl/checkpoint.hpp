#pragma once

#include <filesystem>

#include "dnl/model.hpp"

namespace dnl {

/// Writes the model as one JSON document. Tensor data round-trips 64-bit
/// floats exactly (shortest round-trip decimal formatting).
void save_checkpoint(const DnlModel& model, const std::filesystem::path& path);

/// Validates schema version and every tensor shape before returning; a bad
/// file never yields a partial model.
DnlModel load_checkpoint(const std::filesystem::path& path);

}  // namespace dnl
