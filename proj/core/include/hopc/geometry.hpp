#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hopc/error.hpp"

namespace hopc {

using coord_t = int64_t;  // nm

struct Point {
  coord_t x = 0, y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct BBox {
  coord_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  coord_t width() const { return x1 - x0; }
  coord_t height() const { return y1 - y0; }
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  void expand(Point p);
  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Closed rectilinear ring. Vertices are stored without the repeated
/// closing point, normalized to counter-clockwise orientation with
/// collinear runs merged.
class Polygon {
 public:
  /// Validates and normalizes a vertex ring. Throws InputError on
  /// non-rectilinear edges, open/degenerate rings or self-intersection.
  static Polygon from_ring(std::vector<Point> ring);

  static Polygon rect(coord_t x0, coord_t y0, coord_t x1, coord_t y1);

  const std::vector<Point>& vertices() const { return verts_; }
  size_t size() const { return verts_.size(); }
  BBox bbox() const;
  /// Positive area in nm^2 (ring is CCW after normalization).
  int64_t area() const;

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  Polygon() = default;
  std::vector<Point> verts_;
};

struct Layout {
  std::string name = "unnamed";
  std::vector<Polygon> polygons;
  BBox bbox;  // tight over all vertices; (0,0,0,0) when empty

  void recompute_bbox();
  int64_t total_area() const;  // sum of polygon areas (overlaps double-counted)
};

/// Horizontal slab of a polygon's interior: y in [y0,y1), x covered by
/// disjoint sorted [x0,x1) intervals.
struct Band {
  coord_t y0 = 0, y1 = 0;
  std::vector<std::pair<coord_t, coord_t>> intervals;
};

/// Slab decomposition at every distinct vertex y coordinate.
std::vector<Band> polygon_bands(const Polygon& poly);

// --- Layout text format ---------------------------------------------------
// Line-oriented ASCII: "DESIGN <name>", "RECT x0 y0 x1 y1",
// "POLY x0 y0 ... xn yn" (even coordinate count, implicitly closed),
// "#" comments. Coordinates in integer nm.

Layout parse_layout(std::istream& in);
Layout parse_layout(const std::string& text);
std::string print_layout(const Layout& layout);

/// Tolerant converter for the ICCAD2013 contest glyph format (glp):
/// RECT/PGON records are ingested, everything else is skipped.
Layout convert_glyph(std::istream& in, const std::string& name = "glyph");

/// Intersection of the layout with the axis-aligned square window of
/// side `size` centered at `center`. Clipped pieces are emitted as
/// maximal y-merged rectangles; an empty window yields an empty Layout.
Layout clip_window(const Layout& layout, Point center, coord_t size);

}  // namespace hopc
