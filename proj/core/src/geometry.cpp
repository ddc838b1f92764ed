#include "hopc/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <sstream>

namespace hopc {

void BBox::expand(Point p) {
  x0 = std::min(x0, p.x);
  y0 = std::min(y0, p.y);
  x1 = std::max(x1, p.x);
  y1 = std::max(y1, p.y);
}

namespace {

bool horizontal(Point a, Point b) { return a.y == b.y; }
bool vertical(Point a, Point b) { return a.x == b.x; }

int64_t shoelace2(const std::vector<Point>& v) {
  int64_t s = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return s;
}

bool ranges_touch(coord_t a0, coord_t a1, coord_t b0, coord_t b1) {
  if (a0 > a1) std::swap(a0, a1);
  if (b0 > b1) std::swap(b0, b1);
  return a0 <= b1 && b0 <= a1;
}

// Any shared point between two non-adjacent edges counts as a
// self-intersection (proper crossings, overlaps and touches alike).
bool edges_touch(Point a0, Point a1, Point b0, Point b1) {
  bool ah = horizontal(a0, a1);
  bool bh = horizontal(b0, b1);
  if (ah && bh)
    return a0.y == b0.y && ranges_touch(a0.x, a1.x, b0.x, b1.x);
  if (!ah && !bh)
    return a0.x == b0.x && ranges_touch(a0.y, a1.y, b0.y, b1.y);
  const Point &h0 = ah ? a0 : b0, &h1 = ah ? a1 : b1;
  const Point &v0 = ah ? b0 : a0, &v1 = ah ? b1 : a1;
  return ranges_touch(h0.x, h1.x, v0.x, v0.x) && ranges_touch(v0.y, v1.y, h0.y, h0.y);
}

}  // namespace

Polygon Polygon::from_ring(std::vector<Point> ring) {
  if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();

  // Drop consecutive duplicates and merge collinear runs (wrap-aware).
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Point> out;
    out.reserve(ring.size());
    size_t n = ring.size();
    for (size_t i = 0; i < n; ++i) {
      const Point& prev = ring[(i + n - 1) % n];
      const Point& cur = ring[i];
      const Point& next = ring[(i + 1) % n];
      if (cur == next) {
        changed = true;
        continue;
      }
      bool collinear = (prev.x == cur.x && cur.x == next.x) ||
                       (prev.y == cur.y && cur.y == next.y);
      if (collinear && !(prev == cur)) {
        changed = true;
        continue;
      }
      out.push_back(cur);
    }
    ring = std::move(out);
  }

  if (ring.size() < 4) throw InputError("polygon: fewer than 4 distinct vertices");
  if (ring.size() % 2 != 0) throw InputError("polygon: odd vertex count, ring cannot alternate H/V");

  size_t n = ring.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    if (!horizontal(a, b) && !vertical(a, b))
      throw InputError("polygon: non-rectilinear edge (" + std::to_string(a.x) + "," +
                       std::to_string(a.y) + ")-(" + std::to_string(b.x) + "," +
                       std::to_string(b.y) + ")");
  }
  for (size_t i = 0; i < n; ++i) {
    bool h0 = horizontal(ring[i], ring[(i + 1) % n]);
    bool h1 = horizontal(ring[(i + 1) % n], ring[(i + 2) % n]);
    if (h0 == h1) throw InputError("polygon: consecutive edges do not alternate H/V");
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      if (edges_touch(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n]))
        throw InputError("polygon: self-intersection between edges " + std::to_string(i) +
                         " and " + std::to_string(j));
    }
  }

  int64_t a2 = shoelace2(ring);
  if (a2 == 0) throw InputError("polygon: zero area");
  if (a2 < 0) std::reverse(ring.begin(), ring.end());

  // Canonical start: lexicographically smallest vertex first.
  auto mn = std::min_element(ring.begin(), ring.end(), [](Point a, Point b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  std::rotate(ring.begin(), mn, ring.end());

  Polygon p;
  p.verts_ = std::move(ring);
  return p;
}

Polygon Polygon::rect(coord_t x0, coord_t y0, coord_t x1, coord_t y1) {
  if (x0 > x1) std::swap(x0, x1);
  if (y0 > y1) std::swap(y0, y1);
  return from_ring({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

BBox Polygon::bbox() const {
  BBox b{verts_[0].x, verts_[0].y, verts_[0].x, verts_[0].y};
  for (const Point& p : verts_) b.expand(p);
  return b;
}

int64_t Polygon::area() const { return shoelace2(verts_) / 2; }

void Layout::recompute_bbox() {
  bbox = {};
  bool first = true;
  for (const Polygon& p : polygons) {
    for (const Point& v : p.vertices()) {
      if (first) {
        bbox = {v.x, v.y, v.x, v.y};
        first = false;
      } else {
        bbox.expand(v);
      }
    }
  }
}

int64_t Layout::total_area() const {
  int64_t a = 0;
  for (const Polygon& p : polygons) a += p.area();
  return a;
}

std::vector<Band> polygon_bands(const Polygon& poly) {
  const std::vector<Point>& v = poly.vertices();
  std::vector<coord_t> ys;
  for (const Point& p : v) ys.push_back(p.y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  std::vector<Band> bands;
  size_t n = v.size();
  for (size_t bi = 0; bi + 1 < ys.size(); ++bi) {
    Band band{ys[bi], ys[bi + 1], {}};
    // Cross-section is constant inside the slab; cut at twice-mid to stay integral.
    coord_t mid2 = band.y0 + band.y1;
    std::vector<coord_t> xs;
    for (size_t i = 0; i < n; ++i) {
      const Point& a = v[i];
      const Point& b = v[(i + 1) % n];
      if (a.x != b.x) continue;  // vertical edges only
      coord_t lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
      if (2 * lo < mid2 && mid2 < 2 * hi) xs.push_back(a.x);
    }
    std::sort(xs.begin(), xs.end());
    for (size_t i = 0; i + 1 < xs.size(); i += 2) band.intervals.emplace_back(xs[i], xs[i + 1]);
    if (!band.intervals.empty()) bands.push_back(std::move(band));
  }
  return bands;
}

// --- text format ----------------------------------------------------------

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

[[noreturn]] void syntax_error(int line, int column, const std::string& what) {
  throw InputError("layout syntax error at line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + what);
}

coord_t parse_coord(const std::string& tok, int line, int column) {
  size_t pos = 0;
  coord_t value = 0;
  try {
    value = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    syntax_error(line, column, "expected integer, got '" + tok + "'");
  }
  if (pos != tok.size()) syntax_error(line, column, "trailing characters in '" + tok + "'");
  return value;
}

}  // namespace

Layout parse_layout(std::istream& in) {
  Layout layout;
  std::string raw;
  int lineno = 0;
  bool saw_design = false;
  while (std::getline(in, raw)) {
    ++lineno;
    if (size_t hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;

    const std::string& kw = toks[0];
    if (kw == "DESIGN") {
      if (toks.size() != 2) syntax_error(lineno, 1, "DESIGN expects exactly one name");
      if (saw_design) syntax_error(lineno, 1, "duplicate DESIGN header");
      layout.name = toks[1];
      saw_design = true;
    } else if (kw == "RECT") {
      if (toks.size() != 5) syntax_error(lineno, 1, "RECT expects 4 coordinates");
      coord_t c[4];
      for (int i = 0; i < 4; ++i) c[i] = parse_coord(toks[i + 1], lineno, i + 2);
      if (c[0] == c[2] || c[1] == c[3]) syntax_error(lineno, 2, "RECT has zero extent");
      layout.polygons.push_back(Polygon::rect(c[0], c[1], c[2], c[3]));
    } else if (kw == "POLY") {
      if (toks.size() < 9 || (toks.size() - 1) % 2 != 0)
        syntax_error(lineno, 1, "POLY expects an even count of >= 8 coordinates");
      std::vector<Point> ring;
      for (size_t i = 1; i + 1 < toks.size(); i += 2)
        ring.push_back({parse_coord(toks[i], lineno, int(i + 1)),
                        parse_coord(toks[i + 1], lineno, int(i + 2))});
      try {
        layout.polygons.push_back(Polygon::from_ring(std::move(ring)));
      } catch (const InputError& e) {
        throw InputError("line " + std::to_string(lineno) + ": " + e.what());
      }
    } else {
      syntax_error(lineno, 1, "unknown keyword '" + kw + "'");
    }
  }
  layout.recompute_bbox();
  return layout;
}

Layout parse_layout(const std::string& text) {
  std::istringstream in(text);
  return parse_layout(in);
}

std::string print_layout(const Layout& layout) {
  std::ostringstream out;
  out << "DESIGN " << layout.name << "\n";
  for (const Polygon& p : layout.polygons) {
    const std::vector<Point>& v = p.vertices();
    if (v.size() == 4) {
      BBox b = p.bbox();
      out << "RECT " << b.x0 << " " << b.y0 << " " << b.x1 << " " << b.y1 << "\n";
    } else {
      out << "POLY";
      for (const Point& q : v) out << " " << q.x << " " << q.y;
      out << "\n";
    }
  }
  return out.str();
}

Layout convert_glyph(std::istream& in, const std::string& name) {
  Layout layout;
  layout.name = name;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::istringstream ls(raw);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    std::string kw = toks[0];
    for (char& c : kw) c = char(std::toupper(static_cast<unsigned char>(c)));
    if (kw != "RECT" && kw != "PGON" && kw != "PGONE") continue;

    // Skip leading non-numeric attribute tokens (orientation, layer name).
    std::vector<coord_t> nums;
    for (size_t i = 1; i < toks.size(); ++i) {
      try {
        size_t pos = 0;
        coord_t v = std::stoll(toks[i], &pos);
        if (pos == toks[i].size()) nums.push_back(v);
      } catch (const std::exception&) {
        if (!nums.empty())
          throw InputError("glyph line " + std::to_string(lineno) + ": mixed tokens");
      }
    }
    try {
      if (kw == "RECT") {
        if (nums.size() != 4)
          throw InputError("glyph RECT expects 4 numbers (x y w h)");
        layout.polygons.push_back(
            Polygon::rect(nums[0], nums[1], nums[0] + nums[2], nums[1] + nums[3]));
      } else {
        if (nums.size() < 8 || nums.size() % 2 != 0)
          throw InputError("glyph PGON expects an even count of >= 8 coordinates");
        std::vector<Point> ring;
        for (size_t i = 0; i + 1 < nums.size(); i += 2) ring.push_back({nums[i], nums[i + 1]});
        layout.polygons.push_back(Polygon::from_ring(std::move(ring)));
      }
    } catch (const InputError& e) {
      throw InputError("glyph line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  layout.recompute_bbox();
  return layout;
}

Layout clip_window(const Layout& layout, Point center, coord_t size) {
  if (size <= 0) throw InputError("clip_window: size must be positive");
  coord_t wx0 = center.x - size / 2;
  coord_t wy0 = center.y - size / 2;
  coord_t wx1 = wx0 + size;
  coord_t wy1 = wy0 + size;

  struct Rect {
    coord_t x0, x1, y0, y1;
  };
  std::vector<Rect> rects;
  for (const Polygon& poly : layout.polygons) {
    for (const Band& band : polygon_bands(poly)) {
      coord_t y0 = std::max(band.y0, wy0);
      coord_t y1 = std::min(band.y1, wy1);
      if (y0 >= y1) continue;
      for (auto [x0, x1] : band.intervals) {
        coord_t cx0 = std::max(x0, wx0);
        coord_t cx1 = std::min(x1, wx1);
        if (cx0 < cx1) rects.push_back({cx0, cx1, y0, y1});
      }
    }
  }

  // Merge y-contiguous rects with identical x spans back into maximal pieces.
  std::sort(rects.begin(), rects.end(), [](const Rect& a, const Rect& b) {
    if (a.x0 != b.x0) return a.x0 < b.x0;
    if (a.x1 != b.x1) return a.x1 < b.x1;
    return a.y0 < b.y0;
  });
  std::vector<Rect> merged;
  for (const Rect& r : rects) {
    if (!merged.empty()) {
      Rect& m = merged.back();
      if (m.x0 == r.x0 && m.x1 == r.x1 && m.y1 == r.y0) {
        m.y1 = r.y1;
        continue;
      }
    }
    merged.push_back(r);
  }

  Layout out;
  out.name = layout.name + "_clip";
  for (const Rect& r : merged) out.polygons.push_back(Polygon::rect(r.x0, r.y0, r.x1, r.y1));
  out.recompute_bbox();
  return out;
}

}  // namespace hopc
