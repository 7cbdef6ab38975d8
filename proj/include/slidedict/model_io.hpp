#pragma once

#include "slidedict/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace slidedict {

/// Container format version written as the first byte of every model file.
inline constexpr std::uint8_t kModelFormatVersion = 1;

/// Binary little-endian model container; layout documented in docs/model_format.md.
void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);

std::string model_bytes(const Model& model);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

}  // namespace slidedict
