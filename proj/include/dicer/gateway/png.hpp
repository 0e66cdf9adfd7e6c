#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dicer {

// 8-bit grayscale PNG.
std::vector<std::uint8_t> encode_png_gray(int width, int height, std::span<const std::uint8_t> pixels);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace dicer
