#pragma once
#include <string>
#include <vector>

#include "hopc/geometry.hpp"

namespace hopc {

struct GridConfig {
  coord_t pitch = 1;  // nm per pixel
  int width = 2048;
  int height = 2048;
  coord_t origin_x = 0;  // nm of the left/bottom grid edge
  coord_t origin_y = 0;

  coord_t extent_x() const { return coord_t(width) * pitch; }
  coord_t extent_y() const { return coord_t(height) * pitch; }
  bool covers(const BBox& b) const {
    return b.x0 >= origin_x && b.y0 >= origin_y && b.x1 <= origin_x + extent_x() &&
           b.y1 <= origin_y + extent_y();
  }
};

/// Real-valued H x W raster in [0,1]; row-major, row iy = 0 at origin_y.
struct MaskGrid {
  int width = 0, height = 0;
  coord_t pitch = 1;
  std::vector<double> values;

  MaskGrid() = default;
  MaskGrid(int w, int h, coord_t p, double fill = 0.0)
      : width(w), height(h), pitch(p), values(size_t(w) * h, fill) {}

  double& at(int ix, int iy) { return values[size_t(iy) * width + ix]; }
  double at(int ix, int iy) const { return values[size_t(iy) * width + ix]; }
  size_t size() const { return values.size(); }
  double sum() const;
  bool same_shape(const MaskGrid& o) const {
    return width == o.width && height == o.height && pitch == o.pitch;
  }
};

enum class RasterMode { Area, Binary };

/// Pixel value = area fraction of the pixel covered by the polygon
/// union, clamped to 1 where polygons overlap. Binary mode thresholds
/// the coverage at 0.5.
MaskGrid rasterize(const Layout& layout, const GridConfig& cfg,
                   RasterMode mode = RasterMode::Area);

/// 8-bit P5 export. Scaling is linear: pixel = round(255 * v / scale_max)
/// clamped to [0,255]; scale_max defaults to max(1e-12, max value) and is
/// recorded in a header comment. Row 0 of the file is the top (max iy).
void write_pgm(const std::string& path, const MaskGrid& grid, double scale_max = 0.0);

}  // namespace hopc
