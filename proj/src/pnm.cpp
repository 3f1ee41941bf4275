#include <cctype>
#include <cmath>

#include "amf/io.hpp"

namespace amf {

namespace {

class HeaderReader {
public:
  explicit HeaderReader(const std::string& bytes) : s_(bytes) {}

  std::string magic() {
    if (s_.size() < 2) throw Error("unexpected end of file");
    pos_ = 2;
    return s_.substr(0, 2);
  }

  // Next whitespace-separated unsigned integer, skipping '#' comments.
  long number() {
    skip_space();
    if (pos_ >= s_.size()) throw Error("unexpected end of file");
    if (!std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw Error("malformed header: expected a number");
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > 1'000'000'000) throw Error("malformed header: number too large");
    }
    return v;
  }

  // Data begins after exactly one whitespace byte following maxval.
  std::size_t raster_start() {
    if (pos_ >= s_.size()) throw Error("unexpected end of file");
    if (!std::isspace(static_cast<unsigned char>(s_[pos_])))
      throw Error("malformed header: missing separator before raster");
    return pos_ + 1;
  }

  bool at_end() {
    skip_space();
    return pos_ >= s_.size();
  }

private:
  void skip_space() {
    while (pos_ < s_.size()) {
      if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::string header(const char* magic, Eigen::Index w, Eigen::Index h, int maxval) {
  std::string s = std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n";
  if (maxval > 0) s += std::to_string(maxval) + "\n";
  return s;
}

}  // namespace

Graymap parse_graymap(const std::string& bytes) {
  HeaderReader r(bytes);
  const std::string magic = r.magic();
  if (magic != "P2" && magic != "P5") throw Error("malformed header: not a P2/P5 graymap");
  const long w = r.number(), h = r.number(), maxval = r.number();
  if (w < 1 || h < 1) throw Error("malformed header: zero image dimension");
  if (maxval < 1 || maxval > 65535) throw Error("malformed header: maxval out of range");

  Graymap g{Grid<std::uint16_t>(h, w), static_cast<int>(maxval)};
  const auto count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) {
      if (r.at_end()) throw Error("unexpected end of file");
      const long v = r.number();
      if (v > maxval) throw Error("value exceeds maxval");
      g.pixels.data()[i] = static_cast<std::uint16_t>(v);
    }
    if (!r.at_end()) throw Error("dimension mismatch: extra samples after raster");
    return g;
  }

  const std::size_t start = r.raster_start();
  const std::size_t bps = maxval > 255 ? 2 : 1;
  if (bytes.size() < start + count * bps) throw Error("unexpected end of file");
  if (bytes.size() > start + count * bps) throw Error("dimension mismatch: trailing bytes");
  for (std::size_t i = 0; i < count; ++i) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + start + i * bps);
    const unsigned v = bps == 2 ? (unsigned(p[0]) << 8) | p[1] : p[0];
    if (v > static_cast<unsigned>(maxval)) throw Error("value exceeds maxval");
    g.pixels.data()[i] = static_cast<std::uint16_t>(v);
  }
  return g;
}

Graymap read_graymap(const std::filesystem::path& path) { return parse_graymap(read_file(path)); }

std::string encode_graymap(const Graymap& g, bool ascii) {
  if (g.maxval < 1 || g.maxval > 65535) throw Error("maxval out of range");
  if (g.pixels.size() > 0 && g.pixels.maxCoeff() > g.maxval) throw Error("value exceeds maxval");
  std::string s = header(ascii ? "P2" : "P5", g.pixels.cols(), g.pixels.rows(), g.maxval);
  if (ascii) {
    for (Eigen::Index y = 0; y < g.pixels.rows(); ++y) {
      for (Eigen::Index x = 0; x < g.pixels.cols(); ++x)
        s += (x ? " " : "") + std::to_string(g.pixels(y, x));
      s += "\n";
    }
    return s;
  }
  for (Eigen::Index i = 0; i < g.pixels.size(); ++i) {
    const std::uint16_t v = g.pixels.data()[i];
    if (g.maxval > 255) s += static_cast<char>(v >> 8);
    s += static_cast<char>(v & 0xff);
  }
  return s;
}

void write_graymap(const std::filesystem::path& path, const Graymap& g, bool ascii) {
  write_file_atomic(path, encode_graymap(g, ascii));
}

std::string encode_pixmap(const RgbImage& img, bool ascii) {
  std::string s = header(ascii ? "P3" : "P6", img.cols(), img.rows(), 255);
  for (Eigen::Index y = 0; y < img.rows(); ++y) {
    for (Eigen::Index x = 0; x < img.cols(); ++x) {
      const Rgb& c = img(y, x);
      if (ascii) {
        s += (x ? " " : "") + std::to_string(c[0]) + " " + std::to_string(c[1]) + " " +
             std::to_string(c[2]);
      } else {
        s.append(reinterpret_cast<const char*>(c.data()), 3);
      }
    }
    if (ascii) s += "\n";
  }
  return s;
}

void write_pixmap(const std::filesystem::path& path, const RgbImage& img, bool ascii) {
  write_file_atomic(path, encode_pixmap(img, ascii));
}

GrayImage read_gray(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P') return read_graymap(path).pixels.cast<double>();
  return parse_csv_matrix(bytes);
}

void write_gray(const std::filesystem::path& path, const GrayImage& g, int maxval) {
  if (maxval < 1 || maxval > 65535) throw Error("maxval out of range");
  Graymap out{Grid<std::uint16_t>(g.rows(), g.cols()), maxval};
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double v = std::round(g.data()[i]);
    if (!(v >= 0 && v <= maxval)) throw Error("value exceeds maxval");
    out.pixels.data()[i] = static_cast<std::uint16_t>(v);
  }
  write_graymap(path, out);
}

RoiMask read_mask(const std::filesystem::path& path) { return read_gray(path) != 0.0; }

Graymap render_fa(const AnisotropyMaps& maps, double fa_display_max) {
  if (!(fa_display_max > 0)) throw Error("FA display maximum must be positive");
  Graymap g{Grid<std::uint16_t>(maps.height(), maps.width()), 255};
  for (Eigen::Index i = 0; i < maps.fa.size(); ++i)
    g.pixels.data()[i] = static_cast<std::uint16_t>(
        std::lround(255 * std::min(maps.fa.data()[i] / fa_display_max, 1.0)));
  return g;
}

Rgb direction_color(double angle_degrees) {
  const double hue = std::fmod(2 * axial_degrees(angle_degrees), 360.0) / 60.0;  // [0, 6)
  const double rise = 1 - std::abs(std::fmod(hue, 2.0) - 1);
  std::array<double, 3> c{};
  switch (static_cast<int>(hue)) {
    case 0: c = {1, rise, 0}; break;
    case 1: c = {rise, 1, 0}; break;
    case 2: c = {0, 1, rise}; break;
    case 3: c = {0, rise, 1}; break;
    case 4: c = {rise, 0, 1}; break;
    default: c = {1, 0, rise}; break;
  }
  return {static_cast<std::uint8_t>(std::lround(255 * c[0])),
          static_cast<std::uint8_t>(std::lround(255 * c[1])),
          static_cast<std::uint8_t>(std::lround(255 * c[2]))};
}

RgbImage render_directions(const AnisotropyMaps& maps) {
  RgbImage img(maps.height(), maps.width());
  for (Eigen::Index y = 0; y < maps.height(); ++y)
    for (Eigen::Index x = 0; x < maps.width(); ++x)
      img(y, x) = maps.oriented(x, y) ? direction_color(maps.angle(y, x)) : Rgb{0, 0, 0};
  return img;
}

void write_fa_map(const AnisotropyMaps& maps, const std::filesystem::path& stem,
                  double fa_display_max) {
  const Graymap preview = render_fa(maps, fa_display_max);
  write_file_atomic(stem.string() + "_fa.csv", encode_csv_matrix(maps.fa));
  write_graymap(stem.string() + "_fa.pgm", preview);
}

void write_direction_map(const AnisotropyMaps& maps, const std::filesystem::path& stem) {
  write_pixmap(stem.string() + "_direction.ppm", render_directions(maps));
}

}  // namespace amf
