#pragma once
#include "hopc/ilt.hpp"
#include "hopc/litho.hpp"

namespace hopc {

struct MbOpcConfig {
  coord_t fragment_length = 40;  // nm
  int max_iters = 12;
  coord_t step = 2;        // nm moved per iteration
  double epe_tol = 2.0;    // nm
  coord_t max_offset = 20; // nm
  std::string dump_path;   // per-iteration fragment CSV when set

  void validate() const {
    if (fragment_length <= 0) throw ConfigError("mbopc: fragment_length must be positive");
    if (step <= 0) throw ConfigError("mbopc: step must be positive");
    if (max_iters < 1) throw ConfigError("mbopc: max_iters must be >= 1");
    if (max_offset < 0) throw ConfigError("mbopc: max_offset must be >= 0");
    if (epe_tol < 0) throw ConfigError("mbopc: epe_tol must be >= 0");
  }
};

/// One movable segment of a drawn polygon edge. Control point and span
/// stay on the drawn edge; the mask edge is displaced by `offset` along
/// the outward normal.
struct Fragment {
  int polygon = 0;
  int edge = 0;                          // edge index in the CCW ring
  coord_t span_start = 0, span_end = 0;  // nm along the edge from its first vertex
  bool is_horizontal = false;
  int nx = 0, ny = 0;  // outward unit normal
  double cx = 0, cy = 0;  // control point (span midpoint on the drawn edge), nm
  coord_t offset = 0;     // signed nm along the outward normal
  bool corner = false;    // adjacent to a polygon corner
};

struct EpeEntry {
  size_t fragment = 0;
  double epe_nm = 0;  // positive = printed contour outside the drawn edge
  bool saturated = false;
};

struct EpeReport {
  std::vector<EpeEntry> entries;
  double max_abs_epe = 0;
  int violation_count = 0;  // |EPE| > epe_tol
};

/// Splits every edge into fragment_length pieces; a remainder shorter
/// than half a fragment is merged into its neighbor.
std::vector<Fragment> fragment_edges(const Layout& layout, const MbOpcConfig& cfg);

/// Marches along each fragment's outward normal to find the printed
/// contour crossing; sub-pixel refinement uses the relaxed image when
/// given. No crossing within 4*max_offset saturates with a flag.
EpeReport measure_epe(const PrintedImage& hard, const PrintedImage* relaxed,
                      const std::vector<Fragment>& fragments, const GridConfig& grid,
                      const MbOpcConfig& cfg);

/// Rebuilds a rectilinear layout with every fragment span displaced by
/// its offset, jog edges inserted between unequal neighbors.
Layout apply_offsets(const Layout& layout, const std::vector<Fragment>& fragments);

OpcResult run_mbopc(const Layout& layout, const MbOpcConfig& cfg, const LithoContext& ctx);

}  // namespace hopc
