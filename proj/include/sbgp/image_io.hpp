#ifndef SBGP_IMAGE_IO_HPP
#define SBGP_IMAGE_IO_HPP

#include "sbgp/core.hpp"

#include <filesystem>

namespace sbgp {

// Loads an 8-bit grayscale PGM (P5) or PNG. Colour, palette, alpha and 16-bit
// inputs are rejected with InputError.
Image load_image(const std::filesystem::path& path);

// Writes a binary PGM, rounding and clamping every pixel to [0, 255].
void write_pgm(const std::filesystem::path& path, const Image& image);

// Rounds and clamps to the 8-bit range without changing the scalar type.
Image quantize_8bit(const Image& image);

}  // namespace sbgp

#endif  // SBGP_IMAGE_IO_HPP
