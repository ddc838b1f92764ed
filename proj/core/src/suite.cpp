#include "hopc/suite.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace hopc {

namespace {

constexpr coord_t kWindow = 2048;  // nm, matches the default bench grid

Layout dense_lines(const std::string& name, coord_t width, coord_t space, bool vertical) {
  Layout l;
  l.name = name;
  coord_t lo = 296, hi = kWindow - 296;
  for (coord_t x = lo; x + width <= hi; x += width + space) {
    if (vertical)
      l.polygons.push_back(Polygon::rect(x, lo, x + width, hi));
    else
      l.polygons.push_back(Polygon::rect(lo, x, hi, x + width));
  }
  l.recompute_bbox();
  return l;
}

Layout contacts(const std::string& name, coord_t size, const std::vector<Point>& centers) {
  Layout l;
  l.name = name;
  for (Point c : centers)
    l.polygons.push_back(Polygon::rect(c.x - size / 2, c.y - size / 2, c.x + size / 2,
                                       c.y + size / 2));
  l.recompute_bbox();
  return l;
}

Layout junctions(const std::string& name, int variant) {
  Layout l;
  l.name = name;
  const coord_t w = 160;
  if (variant == 0) {
    // two L corners and a T
    l.polygons.push_back(Polygon::from_ring(
        {{400, 400}, {1000, 400}, {1000, 400 + w}, {400 + w, 400 + w}, {400 + w, 1000}, {400, 1000}}));
    l.polygons.push_back(Polygon::from_ring({{1648, 1648}, {1648, 1048},
                                             {1648 - w, 1048},
                                             {1648 - w, 1648 - w},
                                             {1048, 1648 - w},
                                             {1048, 1648}}));
    l.polygons.push_back(Polygon::from_ring({{1200, 400}, {1648, 400}, {1648, 400 + w},
                                             {1504, 400 + w}, {1504, 900}, {1344, 900},
                                             {1344, 400 + w}, {1200, 400 + w}}));
  } else {
    l.polygons.push_back(Polygon::from_ring(
        {{400, 1100}, {900, 1100}, {900, 1600}, {900 - w, 1600}, {900 - w, 1100 + w}, {400, 1100 + w}}));
    l.polygons.push_back(Polygon::from_ring({{400, 448}, {1400, 448}, {1400, 448 + w},
                                             {980, 448 + w}, {980, 948}, {820, 948},
                                             {820, 448 + w}, {400, 448 + w}}));
    l.polygons.push_back(Polygon::rect(1200, 1100, 1648, 1100 + w));
  }
  l.recompute_bbox();
  return l;
}

}  // namespace

BenchSetup default_bench_setup() {
  BenchSetup s;
  s.grid = GridConfig{4, 512, 512, 0, 0};
  s.optics = OpticsConfig{};
  s.optics.support_radius = 50;
  s.resist = ResistConfig{};
  s.ilt = IltConfig{};
  s.mbopc = MbOpcConfig{};
  return s;
}

std::vector<Layout> bundled_suite() {
  std::vector<Layout> suite;
  suite.push_back(dense_lines("d01_lines_v144", 144, 144, true));
  suite.push_back(contacts("d02_contacts_160", 160,
                           {{520, 520}, {1480, 560}, {560, 1440}, {1440, 1480}}));
  suite.push_back(dense_lines("d03_lines_h160", 160, 160, false));
  suite.push_back(contacts("d04_contacts_240", 240,
                           {{480, 480}, {1024, 640}, {1560, 480}, {640, 1360}, {1440, 1520}}));
  suite.push_back(dense_lines("d05_lines_v128", 128, 192, true));
  suite.push_back(contacts("d06_contacts_320", 320, {{600, 680}, {1400, 600}, {1000, 1480}}));
  suite.push_back(junctions("d07_junctions_a", 0));
  suite.push_back(contacts("d08_contacts_152", 152,
                           {{480, 520}, {1040, 480}, {1560, 560}, {480, 1160}, {1080, 1520},
                            {1560, 1120}}));
  suite.push_back(dense_lines("d09_lines_h176", 176, 144, false));
  suite.push_back(junctions("d10_junctions_b", 1));
  return suite;
}

std::vector<Layout> training_suite(int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](coord_t lo, coord_t hi, coord_t step) {
    std::uniform_int_distribution<coord_t> d(0, (hi - lo) / step);
    return lo + d(rng) * step;
  };

  std::vector<Layout> suite;
  for (int i = 0; i < count; ++i) {
    std::string name = "t" + std::to_string(i);
    if (i % 2 == 0) {
      coord_t w = pick(128, 176, 8);
      coord_t s = pick(128, 192, 8);
      bool vertical = rng() % 2 == 0;
      suite.push_back(dense_lines(name + "_lines", w, s, vertical));
    } else {
      coord_t size = pick(144, 200, 8);
      int n = 3 + int(rng() % 4);
      // one contact per chosen cell of a 3x3 grid, jittered; cells are
      // far enough apart that contacts never touch
      std::array<int, 9> cells{0, 1, 2, 3, 4, 5, 6, 7, 8};
      std::shuffle(cells.begin(), cells.end(), rng);
      std::vector<Point> centers;
      for (int k = 0; k < n; ++k) {
        coord_t cx = 640 + coord_t(cells[k] % 3) * 384 + pick(-56, 56, 8);
        coord_t cy = 640 + coord_t(cells[k] / 3) * 384 + pick(-56, 56, 8);
        centers.push_back({cx, cy});
      }
      suite.push_back(contacts(name + "_contacts", size, centers));
    }
  }
  return suite;
}

}  // namespace hopc
