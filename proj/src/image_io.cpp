#include "sbgp/image_io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <vector>

namespace sbgp {
namespace {

std::string describe(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (in) {
    if (c == '#') {
      while (in && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      if (!token.empty()) break;
    } else {
      token.push_back(static_cast<char>(c));
    }
    c = in.get();
  }
  return token;
}

long parse_header_int(const std::string& token, const std::filesystem::path& path) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError("malformed PGM header in " + describe(path));
  }
  return std::stol(token);
}

Image load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + describe(path));

  const std::string magic = pgm_token(in);
  if (magic == "P6" || magic == "P3") {
    throw InputError("colour PPM is not supported: " + describe(path));
  }
  if (magic != "P5") throw InputError("unsupported PNM variant '" + magic + "' in " + describe(path));

  const long width = parse_header_int(pgm_token(in), path);
  const long height = parse_header_int(pgm_token(in), path);
  const long maxval = parse_header_int(pgm_token(in), path);
  if (width <= 0 || height <= 0) throw InputError("empty PGM " + describe(path));
  if (maxval <= 0 || maxval > 255) {
    throw InputError("only 8-bit PGM is supported (maxval " + std::to_string(maxval) + ") in " +
                     describe(path));
  }

  std::vector<unsigned char> bytes(static_cast<std::size_t>(width * height));
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw InputError("truncated PGM pixel data in " + describe(path));
  }
  Image image(height, width);
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    image.data()[i] = bytes[static_cast<std::size_t>(i)];
  }
  return image;
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

Image load_png(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file) throw InputError("cannot open " + describe(path));

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw InvariantError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw InvariantError("png_create_info_struct failed");
  }
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_read_struct(png, info, nullptr); }
  } guard{&png, &info};

  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int color_type = 0;
  int bit_depth = 0;
  // libpng reports decode failures through longjmp; everything with a
  // destructor is declared above this point.
  if (setjmp(png_jmpbuf(png))) {
    throw InputError("corrupt PNG " + describe(path));
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  color_type = png_get_color_type(png, info);
  bit_depth = png_get_bit_depth(png, info);

  if (color_type != PNG_COLOR_TYPE_GRAY) {
    throw InputError("only grayscale PNG is supported: " + describe(path));
  }
  if (bit_depth > 8) throw InputError("16-bit PNG is not supported: " + describe(path));
  if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  pixels.resize(static_cast<std::size_t>(width) * height);
  rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = pixels.data() + static_cast<std::size_t>(r) * width;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);

  Image image(static_cast<Eigen::Index>(height), static_cast<Eigen::Index>(width));
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    image.data()[i] = pixels[static_cast<std::size_t>(i)];
  }
  return image;
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw InputError("cannot open " + describe(path));
  std::array<unsigned char, 8> magic{};
  probe.read(reinterpret_cast<char*>(magic.data()), magic.size());
  const auto got = probe.gcount();
  probe.close();

  static constexpr std::array<unsigned char, 8> kPngMagic{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (got == 8 && magic == kPngMagic) return load_png(path);
  if (got >= 2 && magic[0] == 'P') return load_pgm(path);
  throw InputError("unsupported image format: " + describe(path));
}

Image quantize_8bit(const Image& image) {
  return image.array().round().max(0.0).min(255.0).matrix();
}

void write_pgm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + describe(path));
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  const Image q = quantize_8bit(image);
  std::vector<unsigned char> bytes(static_cast<std::size_t>(q.size()));
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    bytes[static_cast<std::size_t>(i)] = static_cast<unsigned char>(q.data()[i]);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing " + describe(path));
}

}  // namespace sbgp
