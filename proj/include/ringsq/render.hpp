#pragma once

#include <string>
#include <vector>

#include "ringsq/types.hpp"

namespace ringsq {

/// 8-bit RGB image.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> rgb;
};

/// Heatmap of m (rows along y, drawn bottom-up) restricted to the given axis
/// window, fixed color map, scaled to [0, max].
Image heatmap(const RVector& row_axis, const RVector& col_axis, const RMatrix& m, double lo,
              double hi, int pixels);

std::vector<unsigned char> encode_png(const Image& img);
void write_png(const std::string& path, const Image& img);

/// SVG wrapper around a heatmap with axes, ticks and labels.
std::string heatmap_svg(const Image& img, double lo, double hi, const std::string& title,
                        const std::string& xlabel, const std::string& ylabel);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string curves_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel);

/// Reads the CSVs of a bundle directory and writes its images.
/// Throws Error when an expected CSV is missing.
void render_bundle(const std::string& dir);

}  // namespace ringsq
