#include "hopc/mbopc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

namespace hopc {

namespace {

struct EdgeGeom {
  Point a, b;      // drawn endpoints, ring order
  coord_t length;
  double dx, dy;   // unit direction a->b
  int nx, ny;      // outward normal (CCW ring: right of direction)
};

EdgeGeom edge_geom(const Polygon& poly, int edge) {
  const auto& v = poly.vertices();
  Point a = v[edge];
  Point b = v[(edge + 1) % v.size()];
  EdgeGeom g{a, b, 0, 0, 0, 0, 0};
  coord_t ddx = b.x - a.x, ddy = b.y - a.y;
  g.length = std::abs(ddx) + std::abs(ddy);
  g.dx = ddx == 0 ? 0.0 : (ddx > 0 ? 1.0 : -1.0);
  g.dy = ddy == 0 ? 0.0 : (ddy > 0 ? 1.0 : -1.0);
  g.nx = int(g.dy);
  g.ny = int(-g.dx);
  return g;
}

double sample_bilinear(const PrintedImage& img, const GridConfig& grid, double x, double y) {
  double u = (x - double(grid.origin_x)) / double(img.pitch) - 0.5;
  double v = (y - double(grid.origin_y)) / double(img.pitch) - 0.5;
  int ix0 = int(std::floor(u)), iy0 = int(std::floor(v));
  double fx = u - ix0, fy = v - iy0;
  auto px = [&](int ix, int iy) -> double {
    if (ix < 0 || iy < 0 || ix >= img.width || iy >= img.height) return 0.0;  // dark field
    return img.at(ix, iy);
  };
  return px(ix0, iy0) * (1 - fx) * (1 - fy) + px(ix0 + 1, iy0) * fx * (1 - fy) +
         px(ix0, iy0 + 1) * (1 - fx) * fy + px(ix0 + 1, iy0 + 1) * fx * fy;
}

}  // namespace

std::vector<Fragment> fragment_edges(const Layout& layout, const MbOpcConfig& cfg) {
  cfg.validate();
  std::vector<Fragment> frags;
  for (int pi = 0; pi < int(layout.polygons.size()); ++pi) {
    const Polygon& poly = layout.polygons[pi];
    for (int ei = 0; ei < int(poly.size()); ++ei) {
      EdgeGeom g = edge_geom(poly, ei);
      std::vector<coord_t> cuts;  // span boundaries, 0 .. length
      cuts.push_back(0);
      if (g.length >= 2 && g.length > cfg.fragment_length) {
        coord_t m = g.length / cfg.fragment_length;
        coord_t rem = g.length - m * cfg.fragment_length;
        coord_t pieces = (rem == 0 || rem * 2 <= cfg.fragment_length) ? m : m + 1;
        for (coord_t j = 1; j < pieces; ++j) cuts.push_back(j * cfg.fragment_length);
      }
      cuts.push_back(g.length);

      for (size_t j = 0; j + 1 < cuts.size(); ++j) {
        Fragment f;
        f.polygon = pi;
        f.edge = ei;
        f.span_start = cuts[j];
        f.span_end = cuts[j + 1];
        f.is_horizontal = g.a.y == g.b.y;
        f.nx = g.nx;
        f.ny = g.ny;
        double mid = 0.5 * double(f.span_start + f.span_end);
        f.cx = double(g.a.x) + g.dx * mid;
        f.cy = double(g.a.y) + g.dy * mid;
        f.corner = j == 0 || j + 2 == cuts.size();
        frags.push_back(f);
      }
    }
  }
  return frags;
}

EpeReport measure_epe(const PrintedImage& hard, const PrintedImage* relaxed,
                      const std::vector<Fragment>& fragments, const GridConfig& grid,
                      const MbOpcConfig& cfg) {
  if (hard.mode != ResistMode::Hard) throw InputError("measure_epe: printed image must be hard");
  const PrintedImage& img = relaxed ? *relaxed : hard;
  const double limit = 4.0 * double(cfg.max_offset);
  const double step = double(img.pitch) / 2.0;

  EpeReport report;
  for (size_t fi = 0; fi < fragments.size(); ++fi) {
    const Fragment& f = fragments[fi];
    double best = 0;
    bool found = false;
    double prev_s = -limit;
    double prev_v = sample_bilinear(img, grid, f.cx + prev_s * f.nx, f.cy + prev_s * f.ny);
    for (double s = -limit + step; s <= limit + 1e-9; s += step) {
      double v = sample_bilinear(img, grid, f.cx + s * f.nx, f.cy + s * f.ny);
      if (prev_v >= 0.5 && v < 0.5) {  // inside -> outside along the outward normal
        double cross = prev_s + (0.5 - prev_v) / (v - prev_v) * (s - prev_s);
        if (!found || std::abs(cross) < std::abs(best)) {
          best = cross;
          found = true;
        }
      }
      prev_s = s;
      prev_v = v;
    }
    EpeEntry entry;
    entry.fragment = fi;
    if (found) {
      entry.epe_nm = best;
    } else {
      double at0 = sample_bilinear(img, grid, f.cx, f.cy);
      entry.epe_nm = at0 >= 0.5 ? limit : -limit;
      entry.saturated = true;
    }
    report.max_abs_epe = std::max(report.max_abs_epe, std::abs(entry.epe_nm));
    if (std::abs(entry.epe_nm) > cfg.epe_tol) ++report.violation_count;
    report.entries.push_back(entry);
  }
  return report;
}

Layout apply_offsets(const Layout& layout, const std::vector<Fragment>& fragments) {
  // fragments grouped per (polygon, edge), sorted along the edge
  std::map<std::pair<int, int>, std::vector<const Fragment*>> by_edge;
  for (const Fragment& f : fragments) by_edge[{f.polygon, f.edge}].push_back(&f);
  for (auto& [key, list] : by_edge)
    std::sort(list.begin(), list.end(),
              [](const Fragment* a, const Fragment* b) { return a->span_start < b->span_start; });

  Layout out;
  out.name = layout.name;
  for (int pi = 0; pi < int(layout.polygons.size()); ++pi) {
    const Polygon& poly = layout.polygons[pi];
    int n = int(poly.size());
    std::vector<Point> ring;
    for (int ei = 0; ei < n; ++ei) {
      EdgeGeom g = edge_geom(poly, ei);
      EdgeGeom gp = edge_geom(poly, (ei + n - 1) % n);
      auto it = by_edge.find({pi, ei});
      auto itp = by_edge.find({pi, (ei + n - 1) % n});
      if (it == by_edge.end() || itp == by_edge.end())
        throw EngineError("apply_offsets: polygon " + std::to_string(pi) +
                          " has unfragmented edges");
      const auto& cur = it->second;
      coord_t off_prev = itp->second.back()->offset;
      coord_t off_first = cur.front()->offset;

      // Corner vertex moves with both adjacent fragment offsets.
      ring.push_back({g.a.x + off_prev * gp.nx + off_first * g.nx,
                      g.a.y + off_prev * gp.ny + off_first * g.ny});
      for (size_t j = 0; j + 1 < cur.size(); ++j) {
        coord_t d = cur[j]->span_end;
        Point p{g.a.x + coord_t(g.dx) * d, g.a.y + coord_t(g.dy) * d};
        ring.push_back({p.x + cur[j]->offset * g.nx, p.y + cur[j]->offset * g.ny});
        ring.push_back({p.x + cur[j + 1]->offset * g.nx, p.y + cur[j + 1]->offset * g.ny});
      }
    }
    try {
      out.polygons.push_back(Polygon::from_ring(std::move(ring)));
    } catch (const InputError& e) {
      throw EngineError("apply_offsets: polygon " + std::to_string(pi) +
                        " became invalid after displacement: " + e.what());
    }
  }
  out.recompute_bbox();
  return out;
}

OpcResult run_mbopc(const Layout& layout, const MbOpcConfig& cfg, const LithoContext& ctx) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  MaskGrid target = rasterize(layout, ctx.grid, RasterMode::Binary);
  std::vector<Fragment> frags = fragment_edges(layout, cfg);
  ConvEngine eng(ctx.grid.width, ctx.grid.height, ctx.kernels);

  std::ofstream dump;
  if (!cfg.dump_path.empty()) {
    dump.open(cfg.dump_path);
    dump << "iteration,polygon,edge,span_start,span_end,offset,epe\n";
  }

  Layout current = layout;
  int iterations = 0;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    MaskGrid mask = rasterize(current, ctx.grid, RasterMode::Area);
    ConvEngine::Forward fwd = eng.forward(mask.values);
    AerialImage img{mask.width, mask.height, mask.pitch, std::move(fwd.intensity)};
    PrintedImage relaxed = resist_threshold(img, ctx.resist, ResistMode::Relaxed);
    PrintedImage hard = resist_threshold(img, ctx.resist, ResistMode::Hard);
    EpeReport report = measure_epe(hard, &relaxed, frags, ctx.grid, cfg);
    iterations = iter;

    if (dump.is_open())
      for (const EpeEntry& e : report.entries) {
        const Fragment& f = frags[e.fragment];
        dump << iter << "," << f.polygon << "," << f.edge << "," << f.span_start << ","
             << f.span_end << "," << f.offset << "," << e.epe_nm << "\n";
      }

    if (report.max_abs_epe <= cfg.epe_tol || iter == cfg.max_iters) break;

    for (const EpeEntry& e : report.entries) {
      Fragment& f = frags[e.fragment];
      coord_t move = coord_t(std::llround(std::min(double(cfg.step), std::abs(e.epe_nm))));
      f.offset -= (e.epe_nm > 0 ? 1 : -1) * move;
      f.offset = std::clamp(f.offset, -cfg.max_offset, cfg.max_offset);
    }
    current = apply_offsets(layout, frags);
  }

  OpcResult res;
  res.mask = rasterize(current, ctx.grid, RasterMode::Binary);
  ConvEngine::Forward fwd = eng.forward(res.mask.values);
  AerialImage img{res.mask.width, res.mask.height, res.mask.pitch, std::move(fwd.intensity)};
  res.printed = resist_threshold(img, ctx.resist, ResistMode::Hard);
  res.mse = mse(res.printed, target);
  res.final_objective = res.mse;
  res.iterations = iterations;
  res.engine = "MB-OPC";
  res.runtime_seconds = seconds();
  return res;
}

}  // namespace hopc
