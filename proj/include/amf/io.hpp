#ifndef AMF_IO_HPP
#define AMF_IO_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "amf/anisotropy.hpp"
#include "amf/grid.hpp"
#include "amf/regression.hpp"
#include "amf/stats.hpp"

namespace amf {

// --- Portable anymap images -------------------------------------------------

/// Integer graymap exactly as stored in a P2/P5 file.
struct Graymap {
  Grid<std::uint16_t> pixels;
  int maxval = 255;
};

using Rgb = std::array<std::uint8_t, 3>;

struct RgbImage {
  RgbImage(Eigen::Index height, Eigen::Index width)
      : h(height), w(width), pixels(static_cast<std::size_t>(height * width)) {}
  Eigen::Index rows() const { return h; }
  Eigen::Index cols() const { return w; }
  Rgb& operator()(Eigen::Index y, Eigen::Index x) { return pixels[static_cast<std::size_t>(y * w + x)]; }
  const Rgb& operator()(Eigen::Index y, Eigen::Index x) const {
    return pixels[static_cast<std::size_t>(y * w + x)];
  }

  Eigen::Index h, w;
  std::vector<Rgb> pixels;
};

Graymap parse_graymap(const std::string& bytes);
Graymap read_graymap(const std::filesystem::path& path);
/// Binary P5 (two bytes per sample, big-endian, when maxval > 255) or ASCII P2.
std::string encode_graymap(const Graymap& g, bool ascii = false);
void write_graymap(const std::filesystem::path& path, const Graymap& g, bool ascii = false);

/// P6 binary or P3 ASCII pixmap.
std::string encode_pixmap(const RgbImage& img, bool ascii = false);
void write_pixmap(const std::filesystem::path& path, const RgbImage& img, bool ascii = false);

/// Gray image from a P2/P5 graymap or a CSV matrix of reals (one image row
/// per line, an optional non-numeric header line).
GrayImage read_gray(const std::filesystem::path& path);
/// Rounds to integers; values must already lie in [0, maxval].
void write_gray(const std::filesystem::path& path, const GrayImage& g, int maxval = 255);
/// Nonzero samples are inside the ROI.
RoiMask read_mask(const std::filesystem::path& path);

GrayImage parse_csv_matrix(const std::string& text);
/// Header row x0,x1,... followed by one line per image row, full precision.
std::string encode_csv_matrix(const Grid<double>& g);

// --- Map rendering ------------------------------------------------------------

/// round(255 min(fa / fa_display_max, 1)).
Graymap render_fa(const AnisotropyMaps& maps, double fa_display_max = 0.1);

/// Hue = 2 x angle at full saturation and value; unoriented pixels black.
Rgb direction_color(double angle_degrees);
RgbImage render_directions(const AnisotropyMaps& maps);

/// Writes <stem>_fa.csv and <stem>_fa.pgm.
void write_fa_map(const AnisotropyMaps& maps, const std::filesystem::path& stem,
                  double fa_display_max = 0.1);
/// Writes <stem>_direction.ppm.
void write_direction_map(const AnisotropyMaps& maps, const std::filesystem::path& stem);

// --- Tables -------------------------------------------------------------------

/// bin_lo,bin_hi,count,frequency
std::string encode_histogram(const Histogram& h);

/// id,failure_load,<feature columns>
std::string encode_feature_table(const FeatureTable& t);
FeatureTable parse_feature_table(const std::string& text);
FeatureTable read_feature_table(const std::filesystem::path& path);

/// Minimal CSV with a header row; fields contain no commas or quotes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws when absent
};
CsvTable parse_csv(const std::string& text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace amf

#endif  // AMF_IO_HPP
