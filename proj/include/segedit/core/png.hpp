#pragma once

#include "segedit/core/image.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace segedit {

std::vector<uint8_t> encode_png(ImageBuffer const& image);

// Accepts any PNG color type; alpha is discarded (with a warning on stderr).
ImageBuffer decode_png(std::span<uint8_t const> bytes);

ImageBuffer read_png_file(std::filesystem::path const& path);
void write_png_file(std::filesystem::path const& path, ImageBuffer const& image);

} // namespace segedit
