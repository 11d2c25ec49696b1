#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace segedit {

std::string base64_encode(std::span<uint8_t const> bytes);
// Throws ImageFormatError on malformed input.
std::vector<uint8_t> base64_decode(std::string_view text);

} // namespace segedit
