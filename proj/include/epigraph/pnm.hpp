#ifndef EPIGRAPH_PNM_HPP
#define EPIGRAPH_PNM_HPP

// Netpbm codecs: PGM (P2/P5), PPM (P3/P6), PBM (P1/P4), maxval fixed at 255.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "epigraph/errors.hpp"
#include "epigraph/grayscale.hpp"
#include "epigraph/raster.hpp"

namespace epigraph {

using LoadedRaster = std::variant<GrayRaster, RgbRaster, BinaryRaster>;

enum class PnmEncoding { Ascii, Binary };

namespace detail {

class PnmReader {
 public:
  explicit PnmReader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

  char magic_digit() {
    if (bytes_.size() < 2 || bytes_[0] != 'P')
      throw UnsupportedFormatError("not a PNM file (bad magic)");
    char d = bytes_[1];
    if (d < '1' || d > '6')
      throw UnsupportedFormatError(std::string("unsupported PNM magic P") + d);
    pos_ = 2;
    return d;
  }

  // Header integers are whitespace separated; '#' starts a comment to EOL.
  std::size_t header_uint(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !is_digit(bytes_[pos_]))
      throw CorruptImageError(std::string("missing ") + what + " in header");
    std::size_t v = 0;
    while (pos_ < bytes_.size() && is_digit(bytes_[pos_])) {
      v = v * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (v > 10'000'000) throw CorruptImageError("header value out of range");
      ++pos_;
    }
    return v;
  }

  // Raw payloads start after exactly one whitespace byte.
  const std::uint8_t* raw_payload(std::size_t need, const char* what) {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_]))
      throw CorruptImageError("missing separator before payload");
    ++pos_;
    if (bytes_.size() - pos_ < need)
      throw CorruptImageError(std::string("truncated ") + what + " payload");
    return reinterpret_cast<const std::uint8_t*>(bytes_.data() + pos_);
  }

  std::uint8_t ascii_sample(std::size_t maxval) {
    std::size_t v = header_uint("sample");
    if (v > maxval) throw CorruptImageError("sample exceeds maxval");
    return static_cast<std::uint8_t>(v);
  }

  std::uint8_t ascii_bit() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw CorruptImageError("truncated P1 payload");
    char c = bytes_[pos_++];
    if (c != '0' && c != '1')
      throw CorruptImageError("P1 payload contains a non-bit character");
    return static_cast<std::uint8_t>(c - '0');
  }

  void expect_only_trailing_space() {
    skip_space_and_comments();
    if (pos_ < bytes_.size())
      throw CorruptImageError("trailing data after image payload");
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

inline std::vector<char> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || ec)
    throw FileNotFoundError(path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on " + path.string());
  return bytes;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed on " + path.string());
}

inline void check_pnm_dims(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0)
    throw CorruptImageError("zero image dimension in header");
  if (width > kMaxRasterSide || height > kMaxRasterSide)
    throw UnsupportedFormatError("image dimensions exceed supported bound");
}

inline std::size_t checked_maxval(PnmReader& r) {
  std::size_t maxval = r.header_uint("maxval");
  if (maxval != 255)
    throw UnsupportedFormatError("only maxval 255 is supported, got " +
                                 std::to_string(maxval));
  return maxval;
}

// Chunked ascii sample emission keeps lines short.
inline void append_ascii_samples(std::string& out,
                                 const std::vector<std::uint8_t>& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    out += std::to_string(data[i]);
    out += (i % 16 == 15 || i + 1 == data.size()) ? '\n' : ' ';
  }
}

}  // namespace detail

/// Decodes a PNM file. PGM yields GrayRaster, PPM RgbRaster, PBM BinaryRaster
/// (PBM black maps to foreground 1). Pixel values are preserved bit-exactly.
inline LoadedRaster load_image(const std::filesystem::path& path) {
  detail::PnmReader r(detail::read_file(path));
  char magic = r.magic_digit();
  std::size_t width = r.header_uint("width");
  std::size_t height = r.header_uint("height");
  detail::check_pnm_dims(width, height);
  std::size_t pixels = width * height;

  switch (magic) {
    case '1': {
      std::vector<std::uint8_t> data(pixels);
      for (auto& v : data) v = r.ascii_bit();
      return BinaryRaster(width, height, std::move(data));
    }
    case '4': {
      std::size_t row_bytes = (width + 7) / 8;
      const std::uint8_t* p = r.raw_payload(row_bytes * height, "P4");
      std::vector<std::uint8_t> data(pixels);
      for (std::size_t row = 0; row < height; ++row)
        for (std::size_t col = 0; col < width; ++col)
          data[row * width + col] =
              (p[row * row_bytes + col / 8] >> (7 - col % 8)) & 1u;
      return BinaryRaster(width, height, std::move(data));
    }
    case '2': {
      std::size_t maxval = detail::checked_maxval(r);
      std::vector<std::uint8_t> data(pixels);
      for (auto& v : data) v = r.ascii_sample(maxval);
      r.expect_only_trailing_space();
      return GrayRaster(width, height, std::move(data));
    }
    case '5': {
      detail::checked_maxval(r);
      const std::uint8_t* p = r.raw_payload(pixels, "P5");
      return GrayRaster(width, height,
                        std::vector<std::uint8_t>(p, p + pixels));
    }
    case '3': {
      std::size_t maxval = detail::checked_maxval(r);
      std::vector<std::uint8_t> data(pixels * 3);
      for (auto& v : data) v = r.ascii_sample(maxval);
      r.expect_only_trailing_space();
      return RgbRaster(width, height, std::move(data));
    }
    case '6': {
      detail::checked_maxval(r);
      const std::uint8_t* p = r.raw_payload(pixels * 3, "P6");
      return RgbRaster(width, height,
                       std::vector<std::uint8_t>(p, p + pixels * 3));
    }
    default:
      throw UnsupportedFormatError("unreachable magic");
  }
}

inline void save_gray(const GrayRaster& img, const std::filesystem::path& path,
                      PnmEncoding enc = PnmEncoding::Binary) {
  std::string out;
  out += enc == PnmEncoding::Binary ? "P5\n" : "P2\n";
  out += std::to_string(img.width()) + " " + std::to_string(img.height()) +
         "\n255\n";
  if (enc == PnmEncoding::Binary)
    out.append(reinterpret_cast<const char*>(img.data().data()),
               img.data().size());
  else
    detail::append_ascii_samples(out, img.data());
  detail::write_file(path, out);
}

inline void save_rgb(const RgbRaster& img, const std::filesystem::path& path,
                     PnmEncoding enc = PnmEncoding::Binary) {
  std::string out;
  out += enc == PnmEncoding::Binary ? "P6\n" : "P3\n";
  out += std::to_string(img.width()) + " " + std::to_string(img.height()) +
         "\n255\n";
  if (enc == PnmEncoding::Binary)
    out.append(reinterpret_cast<const char*>(img.data().data()),
               img.data().size());
  else
    detail::append_ascii_samples(out, img.data());
  detail::write_file(path, out);
}

/// PGM rendering of a binary image: foreground 1 becomes 255.
inline void save_binary_pgm(const BinaryRaster& img,
                            const std::filesystem::path& path) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " +
                    std::to_string(img.height()) + "\n255\n";
  for (std::uint8_t v : img.data())
    out += static_cast<char>(v ? 255 : 0);
  detail::write_file(path, out);
}

/// PBM rendering: foreground 1 maps to a black bit.
inline void save_binary_pbm(const BinaryRaster& img,
                            const std::filesystem::path& path) {
  std::string out = "P4\n" + std::to_string(img.width()) + " " +
                    std::to_string(img.height()) + "\n";
  std::size_t row_bytes = (img.width() + 7) / 8;
  std::vector<std::uint8_t> packed(row_bytes * img.height(), 0);
  for (std::size_t row = 0; row < img.height(); ++row)
    for (std::size_t col = 0; col < img.width(); ++col)
      if (img.at(row, col))
        packed[row * row_bytes + col / 8] |=
            static_cast<std::uint8_t>(0x80u >> (col % 8));
  out.append(reinterpret_cast<const char*>(packed.data()), packed.size());
  detail::write_file(path, out);
}

/// Extension-dispatched save: ".pbm" packs bits, anything else writes PGM.
inline void save_binary(const BinaryRaster& img,
                        const std::filesystem::path& path) {
  if (path.extension() == ".pbm")
    save_binary_pbm(img, path);
  else
    save_binary_pgm(img, path);
}

/// Reinterprets a two-level PGM ({0,255}) as a binary raster.
inline BinaryRaster binary_from_pgm_levels(const GrayRaster& img) {
  std::vector<std::uint8_t> data(img.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint8_t v = img.data()[i];
    if (v != 0 && v != 255)
      throw CorruptImageError("PGM is not two-level (expected 0/255 only)");
    data[i] = v ? 1 : 0;
  }
  return BinaryRaster(img.width(), img.height(), std::move(data));
}

/// Collapses any loaded raster to grayscale. Binary foreground (ink) reads as
/// intensity 0, background as 255.
inline GrayRaster as_gray(const LoadedRaster& img) {
  if (const auto* g = std::get_if<GrayRaster>(&img)) return *g;
  if (const auto* rgb = std::get_if<RgbRaster>(&img)) return to_grayscale(*rgb);
  const auto& bin = std::get<BinaryRaster>(img);
  GrayRaster out(bin.width(), bin.height());
  for (std::size_t i = 0; i < bin.size(); ++i)
    out.data()[i] = bin.data()[i] ? 0 : 255;
  return out;
}

}  // namespace epigraph

#endif  // EPIGRAPH_PNM_HPP
