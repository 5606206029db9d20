#pragma once

#include <string>

#include "orchard/image.hpp"

namespace orchard {

// Binary PPM (P6), 8-bit per channel.
void write_ppm(const std::string& path, const RgbImage& image);
RgbImage read_ppm(const std::string& path);

// Binary PGM (P5). Masks are written as 0/255 and read back as 0/1.
void write_pgm(const std::string& path, const Mask& mask);
Mask read_pgm_mask(const std::string& path);

// Grayscale PFM ("Pf"), little-endian (scale -1.0), rows stored bottom-to-top.
void write_pfm(const std::string& path, const DepthImage& depth);
DepthImage read_pfm(const std::string& path);

// In-memory encoders; the file functions are thin wrappers around these.
std::string encode_ppm(const RgbImage& image);
RgbImage decode_ppm(const std::string& bytes);
std::string encode_pfm(const DepthImage& depth);
DepthImage decode_pfm(const std::string& bytes);

}  // namespace orchard
