#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hopc/grid.hpp"

namespace hopc {

struct FeatureVector {
  std::vector<double> values;
  std::string provenance;  // dct | ccas | squish
};

// --- block DCT ------------------------------------------------------------

/// Type-II orthonormal 2D DCT per non-overlapping block: the clip is
/// divided into a block_grid x block_grid grid (zero-padded
/// symmetrically when not divisible) and the lowest `keep` zigzag
/// coefficients of every block are concatenated.
FeatureVector dct_features(const MaskGrid& clip, int keep, int block_grid = 12);

/// Raster + block-DCT pipeline for whole designs; the fingerprint pins
/// the configuration a SelectorModel was trained against.
struct FeaturePipeline {
  GridConfig grid;
  int block_grid = 12;
  int keep = 32;

  std::string fingerprint() const;
  FeatureVector extract(const Layout& design) const;
};

// --- concentric circle sampling -------------------------------------------

struct CircleSampleMatrix {
  std::vector<std::vector<double>> rows;  // n_c x m
  std::vector<double> radii;              // nm, strictly increasing
};

/// Row i = clip bilinearly sampled at m equal angles on the circle of
/// radius radii[i] (nm) around the clip center.
CircleSampleMatrix ccas_sample(const MaskGrid& clip, const std::vector<double>& radii, int m);

struct CircleStats {
  int n = 0;
  std::vector<double> m;  // n x n, symmetric
  double at(int i, int j) const { return m[size_t(i) * n + j]; }
  double& at(int i, int j) { return m[size_t(i) * n + j]; }
};

/// M[i][j] = plug-in mutual information (bits) between the quantized
/// pair of circle-i and circle-j mean intensities and the binary label.
CircleStats circle_stats(const std::vector<std::pair<CircleSampleMatrix, int>>& samples,
                         int bins = 8);

struct CircleSelection {
  std::vector<int> w;  // 0/1 per circle
  double value = 0;    // w' M w
  std::string solver;  // exhaustive | greedy
};

/// max_w w'Mw with sum(w) = n_star, w binary. Exhaustive for n <= 20,
/// greedy forward selection plus single-swap improvement beyond. Ties
/// break toward the lexicographically smallest subset. force_greedy
/// routes small instances through the greedy path (for validation).
CircleSelection select_circles(const CircleStats& M, int n_star, bool force_greedy = false);

// --- squish patterns ------------------------------------------------------

struct SquishPattern {
  std::vector<std::vector<uint8_t>> topology;  // [ny][nx]
  std::vector<coord_t> dx, dy;                 // scanline interval widths, nm
  coord_t x0 = 0, y0 = 0;                      // window origin
};

/// Scanlines at every distinct vertex coordinate (plus the window
/// bounds) partition the window; a topology cell is 1 iff its interior
/// is covered. Lossless: reconstruction rasterizes equal to the clip.
SquishPattern squish_encode(const Layout& clip, const BBox& window);

/// One rectangle per covered cell.
Layout squish_reconstruct(const SquishPattern& pattern);

/// min_s max_i delta_i/s_i with s_i positive integers summing to d;
/// exact water-filling optimum, rational comparisons, ties to the
/// lowest index.
std::vector<int> squish_scale(const std::vector<coord_t>& delta, int d);

// --- export ---------------------------------------------------------------

struct FeatureRow {
  std::string design;
  std::optional<std::string> label;
  std::vector<double> values;
};

/// Header: design,label?,f0..f{d-1}.
void write_feature_csv(const std::string& path, const std::vector<FeatureRow>& rows);

}  // namespace hopc
