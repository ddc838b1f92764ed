#pragma once
#include <string>

#include "hopc/dispatch.hpp"

namespace hopc {

/// Full tool configuration: litho context, engine and training settings
/// plus the DCT feature pipeline geometry.
struct ToolConfig {
  BenchSetup setup = default_bench_setup();
  TrainConfig train;
  int dct_block_grid = 12;
  int dct_keep = 32;

  FeaturePipeline pipeline() const {
    return FeaturePipeline{setup.grid, dct_block_grid, dct_keep};
  }
};

/// Key-value text file, one `section.key = value` per line, `#`
/// comments. Unknown keys are a ConfigError.
ToolConfig load_config(const std::string& path);
ToolConfig parse_config(const std::string& text);

}  // namespace hopc
