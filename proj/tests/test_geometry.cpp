#include <doctest.h>

#include <sstream>

#include "hopc/grid.hpp"

using namespace hopc;

TEST_CASE("parse single rectangle") {
  Layout l = parse_layout("DESIGN t\nRECT 0 0 100 200\n");
  CHECK(l.name == "t");
  REQUIRE(l.polygons.size() == 1);
  CHECK(l.polygons[0].size() == 4);
  CHECK(l.bbox == BBox{0, 0, 100, 200});
  CHECK(l.polygons[0].area() == 100 * 200);
}

TEST_CASE("parse rectilinear L-shape") {
  Layout l = parse_layout("POLY 0 0 100 0 100 100 50 100 50 200 0 200\n");
  REQUIRE(l.polygons.size() == 1);
  CHECK(l.polygons[0].size() == 6);
  CHECK(l.polygons[0].area() == 100 * 100 + 50 * 100);
}

TEST_CASE("parse rejects diagonal edges") {
  CHECK_THROWS_AS(parse_layout("POLY 0 0 100 100 0 100\n"), InputError);
}

TEST_CASE("parse rejects odd coordinate count and degenerate rings") {
  CHECK_THROWS_AS(parse_layout("POLY 0 0 100\n"), InputError);
  CHECK_THROWS_AS(parse_layout("POLY 0 0 100 0\n"), InputError);
  CHECK_THROWS_AS(parse_layout("RECT 0 0 0 100\n"), InputError);
}

TEST_CASE("parse reports line numbers on syntax errors") {
  try {
    parse_layout("DESIGN ok\nRECT 0 0 10 x\n");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("comments and blank lines are ignored") {
  Layout l = parse_layout("# header\nDESIGN c\n\nRECT 0 0 10 10 # trailing\n");
  CHECK(l.polygons.size() == 1);
}

TEST_CASE("self-intersecting ring is rejected") {
  // bow-tie made of axis-parallel edges
  CHECK_THROWS_AS(parse_layout("POLY 0 0 100 0 100 100 40 100 40 -50 60 -50 60 60 0 60\n"),
                  InputError);
}

TEST_CASE("round-trip serialization is idempotent") {
  std::string text =
      "DESIGN rt\nRECT 5 5 50 80\nPOLY 100 100 200 100 200 150 150 150 150 220 100 220\n";
  Layout a = parse_layout(text);
  Layout b = parse_layout(print_layout(a));
  REQUIRE(a.polygons.size() == b.polygons.size());
  CHECK(a.name == b.name);
  for (size_t i = 0; i < a.polygons.size(); ++i) CHECK(a.polygons[i] == b.polygons[i]);
  CHECK(print_layout(a) == print_layout(b));
}

TEST_CASE("normalization is orientation and start-vertex independent") {
  // same rectangle entered clockwise and with a rotated start
  Layout a = parse_layout("POLY 0 0 10 0 10 20 0 20\n");
  Layout b = parse_layout("POLY 0 20 10 20 10 0 0 0\n");
  Layout c = parse_layout("POLY 10 20 0 20 0 0 10 0\n");
  CHECK(a.polygons[0] == b.polygons[0]);
  CHECK(a.polygons[0] == c.polygons[0]);
  CHECK(a.polygons[0] == Polygon::rect(0, 0, 10, 20));
}

TEST_CASE("collinear vertices are merged") {
  Layout l = parse_layout("POLY 0 0 5 0 10 0 10 10 0 10\n");
  CHECK(l.polygons[0].size() == 4);
}

TEST_CASE("glyph converter ingests RECT and PGON records") {
  std::istringstream in(
      "BEGIN\nOFFSET 0 0\nRECT 10 20 30 40\nPGON 0 0 100 0 100 100 0 100\nEND\n");
  Layout l = convert_glyph(in, "g1");
  CHECK(l.name == "g1");
  REQUIRE(l.polygons.size() == 2);
  CHECK(l.polygons[0] == Polygon::rect(10, 20, 40, 60));  // RECT is x y w h
  CHECK(l.polygons[1] == Polygon::rect(0, 0, 100, 100));
}

TEST_CASE("rasterize empty layout is all zero") {
  Layout l;
  MaskGrid g = rasterize(l, GridConfig{1, 16, 16});
  CHECK(g.sum() == 0.0);
}

TEST_CASE("rasterize pixel-aligned rectangle is binary with exact area") {
  Layout l = parse_layout("RECT 2 3 10 9\n");
  MaskGrid g = rasterize(l, GridConfig{1, 16, 16});
  for (double v : g.values) CHECK((v == 0.0 || v == 1.0));
  CHECK(g.sum() == doctest::Approx(8 * 6).epsilon(1e-12));
  CHECK(g.at(2, 3) == 1.0);
  CHECK(g.at(9, 8) == 1.0);
  CHECK(g.at(1, 3) == 0.0);
  CHECK(g.at(10, 3) == 0.0);
}

TEST_CASE("rasterize half-pixel offset gives 0.5 boundary rows") {
  // pitch 2: rows cover y [0,2), [2,4), [4,6); rect y-span 1..5
  Layout l = parse_layout("RECT 0 1 4 5\n");
  MaskGrid g = rasterize(l, GridConfig{2, 4, 4});
  CHECK(g.at(0, 0) == doctest::Approx(0.5));
  CHECK(g.at(1, 1) == doctest::Approx(1.0));
  CHECK(g.at(0, 2) == doctest::Approx(0.5));
  CHECK(g.at(0, 3) == doctest::Approx(0.0));
}

TEST_CASE("rasterize is monotone under adding polygons") {
  Layout a = parse_layout("RECT 3 3 20 11\n");
  Layout b = a;
  b.polygons.push_back(Polygon::rect(10, 5, 28, 25));
  b.recompute_bbox();
  GridConfig cfg{2, 16, 16};
  MaskGrid ga = rasterize(a, cfg), gb = rasterize(b, cfg);
  for (size_t i = 0; i < ga.values.size(); ++i) CHECK(gb.values[i] >= ga.values[i]);
}

TEST_CASE("rasterize union clamps overlap to 1") {
  Layout l = parse_layout("RECT 0 0 8 8\nRECT 4 4 12 12\n");
  MaskGrid g = rasterize(l, GridConfig{1, 16, 16});
  CHECK(g.at(5, 5) == 1.0);
  // union area = 64 + 64 - 16
  CHECK(g.sum() == doctest::Approx(112.0));
}

TEST_CASE("raster sum approximates polygon area within boundary tolerance") {
  Layout l = parse_layout("POLY 1 1 15 1 15 9 8 9 8 14 1 14\n");
  GridConfig cfg{2, 8, 8};
  MaskGrid g = rasterize(l, cfg);
  double area = double(l.polygons[0].area());
  CHECK(g.sum() * cfg.pitch * cfg.pitch == doctest::Approx(area).epsilon(1e-12));
}

TEST_CASE("rasterize rejects layouts outside the grid") {
  Layout l = parse_layout("RECT 0 0 100 100\n");
  CHECK_THROWS_AS(rasterize(l, GridConfig{1, 16, 16}), InputError);
}

TEST_CASE("rasterize honors the grid origin") {
  Layout l = parse_layout("RECT 100 100 104 104\n");
  MaskGrid g = rasterize(l, GridConfig{1, 8, 8, 100, 100});
  CHECK(g.at(0, 0) == 1.0);
  CHECK(g.at(3, 3) == 1.0);
  CHECK(g.at(4, 4) == 0.0);
  CHECK(g.sum() == doctest::Approx(16.0));
}

TEST_CASE("clip window fully inside a rectangle") {
  Layout l = parse_layout("RECT 0 0 100 100\n");
  Layout c = clip_window(l, {50, 50}, 40);
  REQUIRE(c.polygons.size() == 1);
  CHECK(c.polygons[0] == Polygon::rect(30, 30, 70, 70));
}

TEST_CASE("clip window disjoint from all polygons is empty") {
  Layout l = parse_layout("RECT 0 0 100 100\n");
  Layout c = clip_window(l, {500, 500}, 40);
  CHECK(c.polygons.empty());
}

TEST_CASE("clip window straddling an L corner matches raster cross-check") {
  Layout l = parse_layout("POLY 0 0 60 0 60 30 30 30 30 60 0 60\n");
  Point center{30, 30};
  coord_t size = 40;  // window (10,10)..(50,50)
  Layout c = clip_window(l, center, size);
  for (const Polygon& p : c.polygons) {
    CHECK(p.bbox().x0 >= 10);
    CHECK(p.bbox().x1 <= 50);
  }
  GridConfig full{1, 64, 64};
  GridConfig win{1, 40, 40, 10, 10};
  MaskGrid gf = rasterize(l, full);
  MaskGrid gc = rasterize(c, win);
  for (int iy = 0; iy < 40; ++iy)
    for (int ix = 0; ix < 40; ++ix)
      CHECK(gc.at(ix, iy) == doctest::Approx(gf.at(ix + 10, iy + 10)).epsilon(1e-12));
}

TEST_CASE("clip window keeps disconnected pieces separate") {
  Layout l = parse_layout("RECT 0 0 10 100\nRECT 90 0 100 100\n");
  Layout c = clip_window(l, {50, 50}, 100);
  CHECK(c.polygons.size() == 2);
}
