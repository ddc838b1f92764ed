#include "hopc/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace hopc {

namespace {

// Orthonormal DCT-II matrix, n x n.
std::vector<double> dct_matrix(int n) {
  std::vector<double> c(size_t(n) * n);
  double s0 = std::sqrt(1.0 / n), s = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      c[size_t(k) * n + i] =
          (k == 0 ? s0 : s) * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
  return c;
}

std::vector<std::pair<int, int>> zigzag_order(int n) {
  std::vector<std::pair<int, int>> order;
  for (int s = 0; s <= 2 * (n - 1); ++s) {
    if (s % 2 == 0) {
      for (int i = std::min(s, n - 1); i >= std::max(0, s - n + 1); --i)
        order.emplace_back(i, s - i);  // walking up-right
    } else {
      for (int i = std::max(0, s - n + 1); i <= std::min(s, n - 1); ++i)
        order.emplace_back(i, s - i);
    }
  }
  return order;
}

}  // namespace

FeatureVector dct_features(const MaskGrid& clip, int keep, int block_grid) {
  if (clip.width != clip.height) throw InputError("dct_features: clip must be square");
  if (block_grid < 1) throw ConfigError("dct_features: block_grid must be >= 1");
  const int block = (clip.width + block_grid - 1) / block_grid;
  if (keep < 0 || keep > block * block)
    throw InputError("dct_features: keep exceeds coefficients per block");

  const int padded = block * block_grid;
  const int off = (padded - clip.width) / 2;  // symmetric zero padding

  std::vector<double> C = dct_matrix(block);
  std::vector<std::pair<int, int>> zz = zigzag_order(block);
  // Only the first `keep` zigzag coefficients are emitted, so only rows
  // 0..max_row of T = C X are ever read by the second product.
  int rows = 1;
  for (int i = 0; i < keep; ++i) rows = std::max(rows, zz[size_t(i)].first + 1);

  FeatureVector fv;
  fv.provenance = "dct";
  fv.values.reserve(size_t(block_grid) * block_grid * keep);
  std::vector<double> X(size_t(block) * block), T(size_t(rows) * block);
  for (int by = 0; by < block_grid; ++by) {
    for (int bx = 0; bx < block_grid; ++bx) {
      for (int y = 0; y < block; ++y)
        for (int x = 0; x < block; ++x) {
          int gx = bx * block + x - off, gy = by * block + y - off;
          bool in = gx >= 0 && gy >= 0 && gx < clip.width && gy < clip.height;
          X[size_t(y) * block + x] = in ? clip.at(gx, gy) : 0.0;
        }
      // kept entries of D = C X C'
      for (int k = 0; k < rows; ++k)
        for (int x = 0; x < block; ++x) {
          double s = 0;
          for (int y = 0; y < block; ++y) s += C[size_t(k) * block + y] * X[size_t(y) * block + x];
          T[size_t(k) * block + x] = s;
        }
      for (int i = 0; i < keep; ++i) {
        auto [r, c] = zz[i];
        double s = 0;
        for (int x = 0; x < block; ++x) s += T[size_t(r) * block + x] * C[size_t(c) * block + x];
        fv.values.push_back(s);
      }
    }
  }
  return fv;
}

std::string FeaturePipeline::fingerprint() const {
  std::ostringstream os;
  os << "dct:g" << grid.width << "x" << grid.height << "p" << grid.pitch << ":b" << block_grid
     << ":k" << keep;
  return os.str();
}

FeatureVector FeaturePipeline::extract(const Layout& design) const {
  return dct_features(rasterize(design, grid, RasterMode::Area), keep, block_grid);
}

CircleSampleMatrix ccas_sample(const MaskGrid& clip, const std::vector<double>& radii, int m) {
  if (m < 1) throw InputError("ccas_sample: need at least one angular sample");
  for (size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw InputError("ccas_sample: radii must strictly increase");
  const double half = 0.5 * double(std::min(clip.width, clip.height)) * double(clip.pitch);
  if (!radii.empty() && radii.back() > half)
    throw InputError("ccas_sample: max radius exceeds clip half-extent");

  const double ccx = 0.5 * clip.width * double(clip.pitch);
  const double ccy = 0.5 * clip.height * double(clip.pitch);
  auto bilinear = [&](double x, double y) {
    double u = x / double(clip.pitch) - 0.5, v = y / double(clip.pitch) - 0.5;
    int ix0 = int(std::floor(u)), iy0 = int(std::floor(v));
    double fx = u - ix0, fy = v - iy0;
    auto px = [&](int ix, int iy) -> double {
      if (ix < 0 || iy < 0 || ix >= clip.width || iy >= clip.height) return 0.0;
      return clip.at(ix, iy);
    };
    return px(ix0, iy0) * (1 - fx) * (1 - fy) + px(ix0 + 1, iy0) * fx * (1 - fy) +
           px(ix0, iy0 + 1) * (1 - fx) * fy + px(ix0 + 1, iy0 + 1) * fx * fy;
  };

  CircleSampleMatrix out;
  out.radii = radii;
  for (double r : radii) {
    std::vector<double> row(m);
    for (int j = 0; j < m; ++j) {
      double th = 2.0 * std::numbers::pi * j / m;
      row[j] = bilinear(ccx + r * std::cos(th), ccy + r * std::sin(th));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

CircleStats circle_stats(const std::vector<std::pair<CircleSampleMatrix, int>>& samples,
                         int bins) {
  if (samples.size() < 2) throw InputError("circle_stats: need at least two labeled samples");
  const size_t ns = samples.size();
  const int nc = int(samples[0].first.rows.size());
  bool has0 = false, has1 = false;
  for (const auto& [s, label] : samples) {
    if (int(s.rows.size()) != nc) throw InputError("circle_stats: circle counts differ");
    (label ? has1 : has0) = true;
  }
  if (!has0 || !has1) throw InputError("circle_stats: both classes must be present");

  // Circle mean intensities, quantized per circle into equal-width bins.
  std::vector<std::vector<int>> q{size_t(nc), std::vector<int>(size_t(ns))};
  for (int i = 0; i < nc; ++i) {
    std::vector<double> x(ns);
    for (size_t s = 0; s < ns; ++s) {
      const auto& row = samples[s].first.rows[i];
      double mean = 0;
      for (double v : row) mean += v;
      x[s] = mean / double(row.size());
    }
    double lo = *std::min_element(x.begin(), x.end());
    double hi = *std::max_element(x.begin(), x.end());
    double span = hi - lo;
    for (size_t s = 0; s < ns; ++s) {
      int b = span <= 0 ? 0 : int((x[s] - lo) / span * bins);
      q[i][s] = std::min(b, bins - 1);
    }
  }

  auto entropy = [&](const std::vector<int>& key, int states) {
    std::vector<double> cnt(size_t(states), 0.0);
    for (int k : key) cnt[k] += 1.0;
    double h = 0;
    for (double c : cnt)
      if (c > 0) {
        double p = c / double(ns);
        h -= p * std::log2(p);
      }
    return h;
  };

  std::vector<int> ykey(ns), xykey(ns), xkey(ns);
  for (size_t s = 0; s < ns; ++s) ykey[s] = samples[s].second ? 1 : 0;
  double hy = entropy(ykey, 2);

  CircleStats stats;
  stats.n = nc;
  stats.m.assign(size_t(nc) * nc, 0.0);
  for (int i = 0; i < nc; ++i) {
    for (int j = i; j < nc; ++j) {
      for (size_t s = 0; s < ns; ++s) {
        xkey[s] = q[i][s] * bins + q[j][s];
        xykey[s] = xkey[s] * 2 + ykey[s];
      }
      // I((Xi,Xj);Y) = H(X) + H(Y) - H(X,Y)
      double mi = entropy(xkey, bins * bins) + hy - entropy(xykey, bins * bins * 2);
      stats.at(i, j) = stats.at(j, i) = mi;
    }
  }
  return stats;
}

namespace {

double subset_value(const CircleStats& M, const std::vector<int>& subset) {
  double v = 0;
  for (int i : subset)
    for (int j : subset) v += M.at(i, j);
  return v;
}

}  // namespace

CircleSelection select_circles(const CircleStats& M, int n_star, bool force_greedy) {
  const int n = M.n;
  if (n_star < 1 || n_star > n) throw InputError("select_circles: infeasible subset size");

  CircleSelection sel;
  if (n <= 20 && !force_greedy) {
    sel.solver = "exhaustive";
    std::vector<int> subset(n_star);
    for (int i = 0; i < n_star; ++i) subset[i] = i;
    std::vector<int> best;
    double best_v = -1e300;
    while (true) {
      double v = subset_value(M, subset);
      if (v > best_v) {  // strict: lexicographically first subset wins ties
        best_v = v;
        best = subset;
      }
      // next combination
      int i = n_star - 1;
      while (i >= 0 && subset[i] == n - n_star + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < n_star; ++j) subset[j] = subset[j - 1] + 1;
    }
    sel.value = best_v;
    sel.w.assign(n, 0);
    for (int i : best) sel.w[i] = 1;
    return sel;
  }

  sel.solver = "greedy";
  std::vector<int> chosen;
  std::vector<char> in(size_t(n), 0);
  for (int pick = 0; pick < n_star; ++pick) {
    int best_i = -1;
    double best_v = -1e300;
    for (int i = 0; i < n; ++i) {
      if (in[i]) continue;
      chosen.push_back(i);
      double v = subset_value(M, chosen);
      chosen.pop_back();
      if (v > best_v) {
        best_v = v;
        best_i = i;
      }
    }
    chosen.push_back(best_i);
    in[best_i] = 1;
  }
  // single-swap local improvement
  bool improved = true;
  while (improved) {
    improved = false;
    double cur = subset_value(M, chosen);
    for (size_t ci = 0; ci < chosen.size() && !improved; ++ci) {
      for (int cand = 0; cand < n && !improved; ++cand) {
        if (in[cand]) continue;
        int old = chosen[ci];
        chosen[ci] = cand;
        if (subset_value(M, chosen) > cur) {
          in[old] = 0;
          in[cand] = 1;
          improved = true;
        } else {
          chosen[ci] = old;
        }
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  sel.value = subset_value(M, chosen);
  sel.w.assign(n, 0);
  for (int i : chosen) sel.w[i] = 1;
  return sel;
}

namespace {

bool point_in_polygon(const Polygon& poly, double x, double y) {
  const auto& v = poly.vertices();
  bool inside = false;
  size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    if (a.x != b.x) continue;  // vertical edges only for the x-ray cast
    double lo = double(std::min(a.y, b.y)), hi = double(std::max(a.y, b.y));
    if (y > lo && y < hi && double(a.x) > x) inside = !inside;
  }
  return inside;
}

}  // namespace

SquishPattern squish_encode(const Layout& clip, const BBox& window) {
  std::vector<coord_t> xs{window.x0, window.x1}, ys{window.y0, window.y1};
  for (const Polygon& p : clip.polygons)
    for (const Point& v : p.vertices()) {
      if (v.x > window.x0 && v.x < window.x1) xs.push_back(v.x);
      if (v.y > window.y0 && v.y < window.y1) ys.push_back(v.y);
    }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  SquishPattern pat;
  pat.x0 = window.x0;
  pat.y0 = window.y0;
  for (size_t i = 0; i + 1 < xs.size(); ++i) pat.dx.push_back(xs[i + 1] - xs[i]);
  for (size_t i = 0; i + 1 < ys.size(); ++i) pat.dy.push_back(ys[i + 1] - ys[i]);

  pat.topology.assign(pat.dy.size(), std::vector<uint8_t>(pat.dx.size(), 0));
  for (size_t iy = 0; iy < pat.dy.size(); ++iy) {
    double my = 0.5 * double(ys[iy] + ys[iy + 1]);
    for (size_t ix = 0; ix < pat.dx.size(); ++ix) {
      double mx = 0.5 * double(xs[ix] + xs[ix + 1]);
      for (const Polygon& p : clip.polygons)
        if (point_in_polygon(p, mx, my)) {
          pat.topology[iy][ix] = 1;
          break;
        }
    }
  }
  return pat;
}

Layout squish_reconstruct(const SquishPattern& pattern) {
  Layout out;
  out.name = "squish";
  std::vector<coord_t> xs{pattern.x0}, ys{pattern.y0};
  for (coord_t d : pattern.dx) xs.push_back(xs.back() + d);
  for (coord_t d : pattern.dy) ys.push_back(ys.back() + d);
  for (size_t iy = 0; iy < pattern.topology.size(); ++iy)
    for (size_t ix = 0; ix < pattern.topology[iy].size(); ++ix)
      if (pattern.topology[iy][ix])
        out.polygons.push_back(Polygon::rect(xs[ix], ys[iy], xs[ix + 1], ys[iy + 1]));
  out.recompute_bbox();
  return out;
}

std::vector<int> squish_scale(const std::vector<coord_t>& delta, int d) {
  const int n = int(delta.size());
  if (d < n) throw InputError("squish_scale: d must be >= number of intervals");
  for (coord_t v : delta)
    if (v <= 0) throw InputError("squish_scale: interval widths must be positive");

  std::vector<int> s(size_t(n), 1);
  for (int extra = 0; extra < d - n; ++extra) {
    // Increment the interval with the current maximal delta_i/s_i;
    // rational comparison, ties to the lowest index.
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (delta[i] * coord_t(s[arg]) > delta[arg] * coord_t(s[i])) arg = i;
    ++s[arg];
  }
  return s;
}

void write_feature_csv(const std::string& path, const std::vector<FeatureRow>& rows) {
  std::ofstream out(path);
  if (!out) throw InputError("write_feature_csv: cannot open " + path);
  size_t d = rows.empty() ? 0 : rows[0].values.size();
  bool labeled = !rows.empty() && rows[0].label.has_value();
  out << "design";
  if (labeled) out << ",label";
  for (size_t i = 0; i < d; ++i) out << ",f" << i;
  out << "\n";
  out.precision(17);
  for (const FeatureRow& r : rows) {
    out << r.design;
    if (labeled) out << "," << r.label.value_or("");
    for (double v : r.values) out << "," << v;
    out << "\n";
  }
}

}  // namespace hopc
