#pragma once

#include <filesystem>

#include "segface/image.hpp"

namespace segface {

// Binary PGM (P5), maxval 255 only.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

}  // namespace segface
