#pragma once

// Grayscale raster plus PGM (P2/P5, maxval 255) codec and binary-mask export.
// PNG decoding is compiled in when OTSUBIS_WITH_PNG is defined (link libpng).

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "otsubis/error.hpp"

#ifdef OTSUBIS_WITH_PNG
#include <png.h>

#include <csetjmp>
#endif

namespace otsubis {

inline constexpr int kLevels = 256;

/// 8-bit grayscale raster, row-major. Width and height are at least 1.
class GrayImage {
 public:
  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width_ == 0 || height_ == 0) throw std::invalid_argument("image dimensions must be positive");
    if (pixels_.size() != width_ * height_)
      throw std::invalid_argument("pixel count does not match width*height");
  }

  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
      : GrayImage(width, height, std::vector<std::uint8_t>(width * height, fill)) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels_.at(y * width_ + x); }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> pixels_;
};

/// A class boundary in [0, 255]. Pixels below it are background.
class Threshold {
 public:
  explicit Threshold(int t) : value_(t) {
    if (t < 0 || t >= kLevels) throw std::out_of_range("threshold must lie in [0, 255], got " + std::to_string(t));
  }
  int value() const noexcept { return value_; }

 private:
  int value_;
};

enum class ImageFormat { Auto, Pgm, Png };
enum class PgmEncoding { Binary, Ascii };

/// Which class is painted white in a mask. The default paints the
/// foreground class (p >= t) white.
enum class MaskPolarity { ForegroundWhite, ForegroundBlack };

namespace detail {

class PgmReader {
 public:
  explicit PgmReader(std::istream& in) : in_(in) {}

  GrayImage read() {
    char magic[2] = {0, 0};
    if (!in_.read(magic, 2) || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
      throw ImageFormatError(ImageFormatError::Kind::MalformedHeader, "malformed header: expected P2 or P5 magic");
    const bool binary = magic[1] == '5';

    const auto width = header_number("width");
    const auto height = header_number("height");
    const auto maxval = header_number("maxval");
    if (width == 0 || height == 0)
      throw ImageFormatError(ImageFormatError::Kind::MalformedHeader, "malformed header: zero image dimension");
    if (maxval != 255)
      throw ImageFormatError(ImageFormatError::Kind::UnsupportedMaxval,
                             "unsupported maxval " + std::to_string(maxval) + " (only 255 is supported)");
    if (width > (std::numeric_limits<std::uint32_t>::max() / height))
      throw ImageFormatError(ImageFormatError::Kind::MalformedHeader, "malformed header: image too large");

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> pixels(count);
    if (binary) {
      // Exactly one whitespace byte separates maxval from the raster.
      const int sep = in_.get();
      if (sep == std::char_traits<char>::eof() || !std::isspace(sep))
        throw ImageFormatError(ImageFormatError::Kind::MalformedHeader, "malformed header: missing raster separator");
      in_.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(count));
      if (static_cast<std::size_t>(in_.gcount()) != count)
        throw ImageFormatError(ImageFormatError::Kind::TruncatedData,
                               "truncated pixel data: expected " + std::to_string(count) + " bytes, got " +
                                   std::to_string(in_.gcount()));
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        skip_space_and_comments();
        if (in_.peek() == std::char_traits<char>::eof())
          throw ImageFormatError(ImageFormatError::Kind::TruncatedData,
                                 "truncated pixel data: expected " + std::to_string(count) + " values, got " +
                                     std::to_string(i));
        const auto v = number();
        if (!v) throw ImageFormatError(ImageFormatError::Kind::BadPixel, "non-numeric pixel value at index " + std::to_string(i));
        if (*v > 255)
          throw ImageFormatError(ImageFormatError::Kind::BadPixel,
                                 "pixel value " + std::to_string(*v) + " exceeds maxval 255");
        pixels[i] = static_cast<std::uint8_t>(*v);
      }
    }
    return GrayImage(width, height, std::move(pixels));
  }

 private:
  void skip_space_and_comments() {
    for (;;) {
      const int c = in_.peek();
      if (c == std::char_traits<char>::eof()) return;
      if (c == '#') {
        while (in_.peek() != std::char_traits<char>::eof() && in_.get() != '\n') {
        }
      } else if (std::isspace(c)) {
        in_.get();
      } else {
        return;
      }
    }
  }

  std::optional<std::uint64_t> number() {
    std::uint64_t v = 0;
    bool any = false;
    while (std::isdigit(in_.peek())) {
      v = v * 10 + static_cast<std::uint64_t>(in_.get() - '0');
      if (v > std::numeric_limits<std::uint32_t>::max()) return std::nullopt;
      any = true;
    }
    if (!any) return std::nullopt;
    const int next = in_.peek();
    if (next != std::char_traits<char>::eof() && !std::isspace(next) && next != '#') return std::nullopt;
    return v;
  }

  std::uint32_t header_number(const char* field) {
    skip_space_and_comments();
    const auto v = number();
    if (!v)
      throw ImageFormatError(ImageFormatError::Kind::MalformedHeader,
                             std::string("malformed header: bad or missing ") + field);
    return static_cast<std::uint32_t>(*v);
  }

  std::istream& in_;
};

inline std::uint8_t rec601_luma(unsigned r, unsigned g, unsigned b) {
  // Inputs are non-negative, so floor(x + 0.5) rounds half away from zero.
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  const auto rounded = static_cast<unsigned>(y + 0.5);
  return static_cast<std::uint8_t>(rounded > 255 ? 255 : rounded);
}

#ifdef OTSUBIS_WITH_PNG
// libpng reports errors by longjmp. These frames hold no objects with destructors.
inline bool png_read_header(png_structp png, png_infop info) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_info(png, info);
  return true;
}

inline bool png_apply_transforms(png_structp png, png_infop info) {
  if (setjmp(png_jmpbuf(png))) return false;
  const int bit_depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  return true;
}

inline bool png_read_rows(png_structp png, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_image(png, rows);
  return true;
}

inline GrayImage read_png(std::istream& in) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  struct Guard {
    png_structp* p;
    png_infop* i;
    ~Guard() {
      if (*p) png_destroy_read_struct(p, *i ? i : nullptr, nullptr);
    }
  } guard{&png, &info};
  if (!png || !info) throw ImageFormatError(ImageFormatError::Kind::Io, "png: cannot allocate decoder");

  png_set_read_fn(png, &in, [](png_structp p, png_bytep data, png_size_t length) {
    auto* stream = static_cast<std::istream*>(png_get_io_ptr(p));
    stream->read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(length));
    if (static_cast<png_size_t>(stream->gcount()) != length) png_error(p, "truncated");
  });
  png_set_error_fn(
      png, nullptr, [](png_structp p, png_const_charp) { png_longjmp(p, 1); }, [](png_structp, png_const_charp) {});

  if (!png_read_header(png, info))
    throw ImageFormatError(ImageFormatError::Kind::MalformedHeader, "malformed header: not a readable PNG");
  if (png_get_bit_depth(png, info) > 8)
    throw ImageFormatError(ImageFormatError::Kind::UnsupportedBitDepth, "unsupported bit depth: 16-bit PNG");
  if (!png_apply_transforms(png, info))
    throw ImageFormatError(ImageFormatError::Kind::MalformedHeader, "malformed header: unsupported PNG layout");

  const std::size_t width = png_get_image_width(png, info);
  const std::size_t height = png_get_image_height(png, info);
  const std::size_t channels = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  std::vector<std::uint8_t> raw(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (std::size_t y = 0; y < height; ++y) rows[y] = raw.data() + y * rowbytes;
  if (!png_read_rows(png, rows.data()))
    throw ImageFormatError(ImageFormatError::Kind::TruncatedData, "truncated pixel data in PNG stream");

  std::vector<std::uint8_t> pixels(width * height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::uint8_t* px = rows[y] + x * channels;
      pixels[y * width + x] = channels >= 3 ? rec601_luma(px[0], px[1], px[2]) : px[0];
    }
  }
  return GrayImage(width, height, std::move(pixels));
}
#endif

}  // namespace detail

inline constexpr bool png_supported() {
#ifdef OTSUBIS_WITH_PNG
  return true;
#else
  return false;
#endif
}

inline GrayImage load_image(std::istream& in, ImageFormat hint = ImageFormat::Auto) {
  if (hint == ImageFormat::Auto) {
    const int first = in.peek();
    hint = first == 0x89 ? ImageFormat::Png : ImageFormat::Pgm;
  }
  if (hint == ImageFormat::Png) {
#ifdef OTSUBIS_WITH_PNG
    return detail::read_png(in);
#else
    throw ImageFormatError(ImageFormatError::Kind::MalformedHeader, "PNG support is not compiled in");
#endif
  }
  return detail::PgmReader(in).read();
}

inline GrayImage load_image_file(const std::string& path, ImageFormat hint = ImageFormat::Auto) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageFormatError(ImageFormatError::Kind::Io, "cannot open " + path);
  return load_image(in, hint);
}

inline void write_pgm(const GrayImage& image, std::ostream& out, PgmEncoding encoding = PgmEncoding::Binary) {
  out << (encoding == PgmEncoding::Binary ? "P5" : "P2") << '\n'
      << image.width() << ' ' << image.height() << '\n'
      << "255\n";
  const auto px = image.pixels();
  if (encoding == PgmEncoding::Binary) {
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  } else {
    // Rows start on a fresh line; long rows wrap so no line exceeds 70 characters.
    for (std::size_t y = 0; y < image.height(); ++y) {
      std::size_t line = 0;
      for (std::size_t x = 0; x < image.width(); ++x) {
        const std::string v = std::to_string(px[y * image.width() + x]);
        if (line > 0 && line + 1 + v.size() > 70) {
          out << '\n';
          line = 0;
        }
        if (line > 0) {
          out << ' ';
          ++line;
        }
        out << v;
        line += v.size();
      }
      out << '\n';
    }
  }
  if (!out) throw ImageFormatError(ImageFormatError::Kind::Io, "write failure while emitting PGM");
}

inline void write_pgm_file(const GrayImage& image, const std::string& path, PgmEncoding encoding = PgmEncoding::Binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageFormatError(ImageFormatError::Kind::Io, "cannot open " + path + " for writing");
  write_pgm(image, out, encoding);
}

/// Two-level image: pixel p is foreground iff p >= t.
inline GrayImage binarize(const GrayImage& image, Threshold t, MaskPolarity polarity = MaskPolarity::ForegroundWhite) {
  const std::uint8_t fg = polarity == MaskPolarity::ForegroundWhite ? 255 : 0;
  const std::uint8_t bg = 255 - fg;
  std::vector<std::uint8_t> out;
  out.reserve(image.size());
  for (const auto p : image.pixels()) out.push_back(p >= t.value() ? fg : bg);
  return GrayImage(image.width(), image.height(), std::move(out));
}

inline void write_binary_mask(const GrayImage& image, Threshold t, std::ostream& sink,
                              MaskPolarity polarity = MaskPolarity::ForegroundWhite,
                              PgmEncoding encoding = PgmEncoding::Binary) {
  write_pgm(binarize(image, t, polarity), sink, encoding);
}

}  // namespace otsubis
