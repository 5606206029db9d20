#include "orchard/image_io.hpp"

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace orchard {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

/// Header tokenizer for the Netpbm family: whitespace separated, '#' comments.
class HeaderReader {
public:
  explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw IoError("truncated image header");
    return bytes_.substr(start, pos_ - start);
  }

  int integer() {
    const std::string t = token();
    try {
      std::size_t used = 0;
      int v = std::stoi(t, &used);
      if (used != t.size()) throw IoError("bad header integer '" + t + "'");
      return v;
    } catch (const std::logic_error&) {
      throw IoError("bad header integer '" + t + "'");
    }
  }

  /// Consumes the single whitespace byte that separates header from raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
      throw IoError("missing header terminator");
    return pos_ + 1;
  }

private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

void check_dims(int w, int h) {
  if (w <= 0 || h <= 0 || static_cast<long long>(w) * h > (1LL << 28))
    throw IoError("unsupported image dimensions");
}

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
  return v;
}

}  // namespace

std::string encode_ppm(const RgbImage& image) {
  std::string out = "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) +
                    "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + image.size() * 3);
  for (std::size_t i = 0; i < image.size(); ++i) {
    const Rgb8 p = image.pixels()[i];
    out[header + 3 * i] = static_cast<char>(p.r);
    out[header + 3 * i + 1] = static_cast<char>(p.g);
    out[header + 3 * i + 2] = static_cast<char>(p.b);
  }
  return out;
}

RgbImage decode_ppm(const std::string& bytes) {
  HeaderReader h(bytes);
  if (h.token() != "P6") throw IoError("not a binary PPM (P6)");
  const int w = h.integer();
  const int ht = h.integer();
  const int maxval = h.integer();
  check_dims(w, ht);
  if (maxval != 255) throw IoError("only 8-bit PPM is supported");
  const std::size_t off = h.raster_offset();
  RgbImage img(w, ht);
  if (bytes.size() < off + img.size() * 3) throw IoError("truncated PPM raster");
  for (std::size_t i = 0; i < img.size(); ++i) {
    img.pixels()[i] = {static_cast<std::uint8_t>(bytes[off + 3 * i]),
                       static_cast<std::uint8_t>(bytes[off + 3 * i + 1]),
                       static_cast<std::uint8_t>(bytes[off + 3 * i + 2])};
  }
  return img;
}

std::string encode_pfm(const DepthImage& depth) {
  std::string out = "Pf\n" + std::to_string(depth.width()) + " " + std::to_string(depth.height()) +
                    "\n-1.0\n";
  const std::size_t header = out.size();
  out.resize(header + depth.size() * 4);
  std::size_t k = header;
  for (int row = depth.height() - 1; row >= 0; --row) {
    for (int col = 0; col < depth.width(); ++col) {
      const std::uint32_t bits = to_little_endian(std::bit_cast<std::uint32_t>(depth(row, col)));
      std::memcpy(out.data() + k, &bits, 4);
      k += 4;
    }
  }
  return out;
}

DepthImage decode_pfm(const std::string& bytes) {
  HeaderReader h(bytes);
  if (h.token() != "Pf") throw IoError("not a grayscale PFM (Pf)");
  const int w = h.integer();
  const int ht = h.integer();
  const std::string scale_tok = h.token();
  double scale = 0.0;
  try {
    scale = std::stod(scale_tok);
  } catch (const std::logic_error&) {
    throw IoError("bad PFM scale '" + scale_tok + "'");
  }
  check_dims(w, ht);
  const bool little = scale < 0.0;
  const std::size_t off = h.raster_offset();
  DepthImage img(w, ht);
  if (bytes.size() < off + img.size() * 4) throw IoError("truncated PFM raster");
  std::size_t k = off;
  for (int row = ht - 1; row >= 0; --row) {
    for (int col = 0; col < w; ++col) {
      std::uint32_t bits = 0;
      std::memcpy(&bits, bytes.data() + k, 4);
      k += 4;
      const bool swap = (little && std::endian::native == std::endian::big) ||
                        (!little && std::endian::native == std::endian::little);
      if (swap) bits = ((bits & 0xFFu) << 24) | ((bits & 0xFF00u) << 8) | ((bits >> 8) & 0xFF00u) | (bits >> 24);
      img(row, col) = std::bit_cast<float>(bits);
    }
  }
  return img;
}

void write_ppm(const std::string& path, const RgbImage& image) { write_file(path, encode_ppm(image)); }
RgbImage read_ppm(const std::string& path) { return decode_ppm(read_file(path)); }
void write_pfm(const std::string& path, const DepthImage& depth) { write_file(path, encode_pfm(depth)); }
DepthImage read_pfm(const std::string& path) { return decode_pfm(read_file(path)); }

void write_pgm(const std::string& path, const Mask& mask) {
  std::string out = "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) +
                    "\n255\n";
  for (auto v : mask.pixels()) out.push_back(static_cast<char>(v ? 255 : 0));
  write_file(path, out);
}

Mask read_pgm_mask(const std::string& path) {
  const std::string bytes = read_file(path);
  HeaderReader h(bytes);
  if (h.token() != "P5") throw IoError("not a binary PGM (P5)");
  const int w = h.integer();
  const int ht = h.integer();
  const int maxval = h.integer();
  check_dims(w, ht);
  if (maxval != 255) throw IoError("only 8-bit PGM is supported");
  const std::size_t off = h.raster_offset();
  Mask m(w, ht);
  if (bytes.size() < off + m.size()) throw IoError("truncated PGM raster");
  for (std::size_t i = 0; i < m.size(); ++i) m.pixels()[i] = bytes[off + i] != 0;
  return m;
}

}  // namespace orchard
