#include "hopc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace hopc {

double MaskGrid::sum() const {
  double s = 0;
  for (double v : values) s += v;
  return s;
}

MaskGrid rasterize(const Layout& layout, const GridConfig& cfg, RasterMode mode) {
  if (!layout.polygons.empty() && !cfg.covers(layout.bbox))
    throw InputError("rasterize: layout '" + layout.name + "' exceeds grid extents");

  MaskGrid grid(cfg.width, cfg.height, cfg.pitch);
  const double inv_area = 1.0 / (double(cfg.pitch) * double(cfg.pitch));

  for (const Polygon& poly : layout.polygons) {
    for (const Band& band : polygon_bands(poly)) {
      coord_t by0 = band.y0 - cfg.origin_y;
      coord_t by1 = band.y1 - cfg.origin_y;
      int iy0 = int(by0 / cfg.pitch);
      int iy1 = int((by1 + cfg.pitch - 1) / cfg.pitch);
      iy0 = std::max(iy0, 0);
      iy1 = std::min(iy1, cfg.height);
      for (auto [x0, x1] : band.intervals) {
        coord_t bx0 = x0 - cfg.origin_x;
        coord_t bx1 = x1 - cfg.origin_x;
        int ix0 = std::max(int(bx0 / cfg.pitch), 0);
        int ix1 = std::min(int((bx1 + cfg.pitch - 1) / cfg.pitch), cfg.width);
        for (int iy = iy0; iy < iy1; ++iy) {
          coord_t py0 = coord_t(iy) * cfg.pitch, py1 = py0 + cfg.pitch;
          double yov = double(std::min(by1, py1) - std::max(by0, py0));
          if (yov <= 0) continue;
          for (int ix = ix0; ix < ix1; ++ix) {
            coord_t px0 = coord_t(ix) * cfg.pitch, px1 = px0 + cfg.pitch;
            double xov = double(std::min(bx1, px1) - std::max(bx0, px0));
            if (xov <= 0) continue;
            grid.at(ix, iy) += xov * yov * inv_area;
          }
        }
      }
    }
  }

  for (double& v : grid.values) {
    v = std::min(v, 1.0);
    if (mode == RasterMode::Binary) v = v >= 0.5 ? 1.0 : 0.0;
  }
  return grid;
}

void write_pgm(const std::string& path, const MaskGrid& grid, double scale_max) {
  if (scale_max <= 0.0) {
    scale_max = 1e-12;
    for (double v : grid.values) scale_max = std::max(scale_max, v);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("write_pgm: cannot open " + path);
  out << "P5\n# scale: pixel = round(255 * value / " << scale_max << ")\n"
      << grid.width << " " << grid.height << "\n255\n";
  for (int iy = grid.height - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < grid.width; ++ix) {
      double v = grid.at(ix, iy) / scale_max * 255.0;
      int b = int(std::lround(std::clamp(v, 0.0, 255.0)));
      out.put(char(b));
    }
  }
}

}  // namespace hopc
