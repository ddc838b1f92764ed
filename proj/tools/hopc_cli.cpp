// hopc: heterogeneous OPC toolkit command line.
//
// Subcommands: parse, simulate, opc-ilt, opc-mb, opc-dual, features,
// label, train, dispatch, bench, gap.
// Exit codes: 0 success, 1 input error, 2 engine failure, 3 config error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hopc/config.hpp"
#include "hopc/dispatch.hpp"

namespace {

using namespace hopc;

struct GlobalOpts {
  std::string config_path;
  int jobs = 1;
  uint64_t seed = 0;
  bool fixed_time = false;

  ToolConfig load() const {
    ToolConfig cfg = config_path.empty() ? ToolConfig{} : load_config(config_path);
    cfg.train.seed = seed;
    return cfg;
  }
};

Layout read_layout(const std::string& path, bool from_glyph) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open layout file " + path);
  return from_glyph ? convert_glyph(in, path) : parse_layout(in);
}

std::vector<Layout> gather_designs(const std::vector<std::string>& files, bool from_glyph,
                                   const std::string& suite, int suite_count, uint64_t seed) {
  std::vector<Layout> designs;
  if (suite == "bundled") {
    designs = bundled_suite();
  } else if (suite == "train") {
    designs = training_suite(suite_count, seed);
  } else if (!suite.empty()) {
    throw InputError("unknown suite '" + suite + "' (use: bundled, train)");
  }
  for (const std::string& f : files) designs.push_back(read_layout(f, from_glyph));
  if (designs.empty()) throw InputError("no designs given (files or --suite)");
  return designs;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file " + path);
  out << text;
}

std::vector<LabeledDesign> read_labeled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open data file " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty data file " + path);
  if (line.rfind("design,label,", 0) != 0)
    throw InputError("data file must start with header design,label,f0,...");
  std::vector<LabeledDesign> data;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string cell;
    LabeledDesign d;
    std::getline(is, d.id, ',');
    std::getline(is, cell, ',');
    d.label = engine_choice_from_string(cell);
    while (std::getline(is, cell, ',')) d.features.values.push_back(std::stod(cell));
    d.features.provenance = "dct";
    if (d.features.values.empty())
      throw InputError(path + " line " + std::to_string(lineno) + ": no feature values");
    data.push_back(std::move(d));
  }
  return data;
}

void print_result(const OpcResult& r) {
  std::cout << "engine=" << r.engine << " mse=" << r.mse << " iterations=" << r.iterations
            << " runtime_s=" << r.runtime_seconds << "\n";
}

void run_engines_and_label(const std::vector<Layout>& designs, const ToolConfig& cfg, int jobs,
                           const std::string& out_path) {
  FeaturePipeline pipeline = cfg.pipeline();
  BenchReport rep = bench_report(designs, nullptr, pipeline, cfg.setup, BenchMode::Oracle, jobs);
  std::vector<FeatureRow> rows;
  for (size_t i = 0; i < designs.size(); ++i) {
    const BenchRow& r = rep.rows[i];
    if (r.failed) {
      std::cerr << "warning: skipping failed design " << r.id << ": " << r.error << "\n";
      continue;
    }
    FeatureRow fr;
    fr.design = r.id;
    fr.label = to_string(r.oracle);
    fr.values = pipeline.extract(designs[i]).values;
    rows.push_back(std::move(fr));
  }
  write_feature_csv(out_path, rows);
  std::cout << "labeled " << rows.size() << " designs -> " << out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hopc: heterogeneous OPC toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "key-value config file");
  app.add_option("--jobs", g.jobs, "parallel designs")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "RNG seed for training/suite generation");
  app.add_flag("--fixed-time", g.fixed_time,
               "report iteration counts instead of seconds (deterministic output)");

  // parse
  auto* parse = app.add_subcommand("parse", "parse and normalize a layout file");
  std::string in_path, out_path;
  bool from_glyph = false;
  parse->add_option("input", in_path, "layout file")->required();
  parse->add_option("-o,--out", out_path, "output path (default stdout)");
  parse->add_flag("--from-glyph", from_glyph, "input is ICCAD2013 contest glyph format");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "forward litho simulation of a layout");
  std::string sim_in, mask_pgm, aerial_pgm, printed_pgm;
  bool sim_glyph = false, sim_hard = false;
  simulate->add_option("input", sim_in, "layout file")->required();
  simulate->add_flag("--from-glyph", sim_glyph, "input is glyph format");
  simulate->add_option("--mask-pgm", mask_pgm, "write rasterized mask PGM");
  simulate->add_option("--aerial-pgm", aerial_pgm, "write aerial intensity PGM");
  simulate->add_option("--printed-pgm", printed_pgm, "write printed image PGM");
  simulate->add_flag("--hard", sim_hard, "hard resist threshold instead of sigmoid");

  // opc-ilt / opc-mb / opc-dual
  auto* opc_ilt = app.add_subcommand("opc-ilt", "inverse-lithography mask optimization");
  std::string ilt_in, ilt_mask_pgm, ilt_printed_pgm, ilt_trace;
  opc_ilt->add_option("input", ilt_in, "layout file")->required();
  opc_ilt->add_option("--mask-pgm", ilt_mask_pgm, "write optimized mask PGM");
  opc_ilt->add_option("--printed-pgm", ilt_printed_pgm, "write printed image PGM");
  opc_ilt->add_option("--trace", ilt_trace, "per-iteration objective CSV");

  auto* opc_mb = app.add_subcommand("opc-mb", "model-based (fragment) mask optimization");
  std::string mb_in, mb_mask_pgm, mb_printed_pgm, mb_dump;
  opc_mb->add_option("input", mb_in, "layout file")->required();
  opc_mb->add_option("--mask-pgm", mb_mask_pgm, "write optimized mask PGM");
  opc_mb->add_option("--printed-pgm", mb_printed_pgm, "write printed image PGM");
  opc_mb->add_option("--dump", mb_dump, "per-iteration fragment CSV");

  auto* opc_dual = app.add_subcommand("opc-dual", "dual-mask (double exposure) ILT");
  std::string dual_in, dual_a_pgm, dual_b_pgm, dual_printed_pgm, dual_trace;
  opc_dual->add_option("input", dual_in, "layout file")->required();
  opc_dual->add_option("--mask-a-pgm", dual_a_pgm, "write exposure-A mask PGM");
  opc_dual->add_option("--mask-b-pgm", dual_b_pgm, "write exposure-B mask PGM");
  opc_dual->add_option("--printed-pgm", dual_printed_pgm, "write combined printed PGM");
  opc_dual->add_option("--trace", dual_trace, "per-iteration objective CSV");

  // features / label / train / dispatch / bench / gap
  auto* features = app.add_subcommand("features", "extract DCT features to CSV");
  std::vector<std::string> feat_files;
  std::string feat_suite, feat_out = "features.csv";
  int feat_suite_count = 20;
  features->add_option("inputs", feat_files, "layout files");
  features->add_option("--suite", feat_suite, "bundled | train");
  features->add_option("--suite-count", feat_suite_count, "designs when --suite train");
  features->add_option("-o,--out", feat_out, "output CSV");

  auto* label = app.add_subcommand("label", "run both engines and emit labeled features CSV");
  std::vector<std::string> label_files;
  std::string label_suite, label_out = "labeled.csv";
  int label_suite_count = 20;
  label->add_option("inputs", label_files, "layout files");
  label->add_option("--suite", label_suite, "bundled | train");
  label->add_option("--suite-count", label_suite_count, "designs when --suite train");
  label->add_option("-o,--out", label_out, "output CSV");

  auto* train = app.add_subcommand("train", "train the engine selector");
  std::string train_data, train_model = "selector.model";
  train->add_option("--data", train_data, "labeled feature CSV (from `label`)")->required();
  train->add_option("-o,--out", train_model, "model output path");

  auto* dispatch_cmd = app.add_subcommand("dispatch", "predict the engine and run it");
  std::string disp_in, disp_model, disp_mask_pgm;
  dispatch_cmd->add_option("input", disp_in, "layout file")->required();
  dispatch_cmd->add_option("--model", disp_model, "selector model file")->required();
  dispatch_cmd->add_option("--mask-pgm", disp_mask_pgm, "write optimized mask PGM");

  auto* bench = app.add_subcommand("bench", "run the benchmark report");
  std::vector<std::string> bench_files;
  std::string bench_suite = "bundled", bench_model, bench_mode = "oracle";
  std::string bench_out = "-", bench_gap_out;
  int bench_suite_count = 10;
  bench->add_option("inputs", bench_files, "layout files");
  bench->add_option("--suite", bench_suite, "bundled | train | '' (files only)");
  bench->add_option("--suite-count", bench_suite_count, "designs when --suite train");
  bench->add_option("--model", bench_model, "selector model (required for predicted mode)");
  bench->add_option("--mode", bench_mode, "predicted | oracle | both-engines");
  bench->add_option("-o,--out", bench_out, "report CSV (default stdout)");
  bench->add_option("--gap-out", bench_gap_out, "also write the MSE gap CSV");

  auto* gap = app.add_subcommand("gap", "project (id,mse_mb,mse_ilt) out of a bench CSV");
  std::string gap_in, gap_out = "-";
  gap->add_option("input", gap_in, "bench report CSV")->required();
  gap->add_option("-o,--out", gap_out, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    ToolConfig cfg = g.load();
    LithoContext ctx;  // built lazily by subcommands that simulate

    if (*parse) {
      Layout layout = read_layout(in_path, from_glyph);
      write_text(out_path, print_layout(layout));
    } else if (*simulate) {
      ctx = cfg.setup.make_context();
      Layout layout = read_layout(sim_in, sim_glyph);
      MaskGrid mask = rasterize(layout, cfg.setup.grid, RasterMode::Area);
      AerialImage img = aerial_image(mask, ctx.kernels);
      PrintedImage printed =
          resist_threshold(img, cfg.setup.resist, sim_hard ? ResistMode::Hard : ResistMode::Relaxed);
      MaskGrid target = rasterize(layout, cfg.setup.grid, RasterMode::Binary);
      if (!mask_pgm.empty()) write_pgm(mask_pgm, mask, 1.0);
      if (!aerial_pgm.empty()) {
        MaskGrid gimg(img.width, img.height, img.pitch);
        gimg.values = img.values;
        write_pgm(aerial_pgm, gimg);
      }
      if (!printed_pgm.empty()) {
        MaskGrid gp(printed.width, printed.height, printed.pitch);
        gp.values = printed.values;
        write_pgm(printed_pgm, gp, 1.0);
      }
      PrintedImage hard = resist_threshold(img, cfg.setup.resist, ResistMode::Hard);
      std::cout << "design=" << layout.name << " polygons=" << layout.polygons.size()
                << " mse_vs_target=" << mse(hard, target) << "\n";
    } else if (*opc_ilt) {
      ctx = cfg.setup.make_context();
      Layout layout = read_layout(ilt_in, false);
      MaskGrid target = rasterize(layout, cfg.setup.grid, RasterMode::Binary);
      IltConfig icfg = cfg.setup.ilt;
      icfg.trace_path = ilt_trace;
      OpcResult res = run_ilt(target, icfg, ctx);
      if (!ilt_mask_pgm.empty()) write_pgm(ilt_mask_pgm, res.mask, 1.0);
      if (!ilt_printed_pgm.empty()) {
        MaskGrid gp(res.printed.width, res.printed.height, res.printed.pitch);
        gp.values = res.printed.values;
        write_pgm(ilt_printed_pgm, gp, 1.0);
      }
      print_result(res);
    } else if (*opc_mb) {
      ctx = cfg.setup.make_context();
      Layout layout = read_layout(mb_in, false);
      MbOpcConfig mcfg = cfg.setup.mbopc;
      mcfg.dump_path = mb_dump;
      OpcResult res = run_mbopc(layout, mcfg, ctx);
      if (!mb_mask_pgm.empty()) write_pgm(mb_mask_pgm, res.mask, 1.0);
      if (!mb_printed_pgm.empty()) {
        MaskGrid gp(res.printed.width, res.printed.height, res.printed.pitch);
        gp.values = res.printed.values;
        write_pgm(mb_printed_pgm, gp, 1.0);
      }
      print_result(res);
    } else if (*opc_dual) {
      ctx = cfg.setup.make_context();
      Layout layout = read_layout(dual_in, false);
      MaskGrid target = rasterize(layout, cfg.setup.grid, RasterMode::Binary);
      IltConfig icfg = cfg.setup.ilt;
      icfg.trace_path = dual_trace;
      DualIltOutput out = run_dual_ilt(target, icfg, ctx);
      if (!dual_a_pgm.empty()) write_pgm(dual_a_pgm, out.mask_a, 1.0);
      if (!dual_b_pgm.empty()) write_pgm(dual_b_pgm, out.mask_b, 1.0);
      if (!dual_printed_pgm.empty()) {
        MaskGrid gp(out.result.printed.width, out.result.printed.height, out.result.printed.pitch);
        gp.values = out.result.printed.values;
        write_pgm(dual_printed_pgm, gp, 1.0);
      }
      print_result(out.result);
    } else if (*features) {
      std::vector<Layout> designs =
          gather_designs(feat_files, false, feat_suite, feat_suite_count, g.seed);
      FeaturePipeline pipeline = cfg.pipeline();
      std::vector<FeatureRow> rows;
      for (const Layout& d : designs)
        rows.push_back({d.name, std::nullopt, pipeline.extract(d).values});
      write_feature_csv(feat_out, rows);
      std::cout << "wrote " << rows.size() << " feature rows (" << pipeline.fingerprint()
                << ") -> " << feat_out << "\n";
    } else if (*label) {
      std::vector<Layout> designs =
          gather_designs(label_files, false, label_suite, label_suite_count, g.seed);
      run_engines_and_label(designs, cfg, g.jobs, label_out);
    } else if (*train) {
      std::vector<LabeledDesign> data = read_labeled_csv(train_data);
      SelectorModel model = train_selector(data, cfg.train, cfg.pipeline().fingerprint());
      save_model(train_model, model);
      std::cout << "trained on " << data.size() << " designs, final loss "
                << (model.loss_trace.empty() ? 0.0 : model.loss_trace.back()) << " -> "
                << train_model << "\n";
    } else if (*dispatch_cmd) {
      Layout layout = read_layout(disp_in, false);
      SelectorModel model = load_model(disp_model);
      DispatchResult res = dispatch(layout, model, cfg.pipeline(), cfg.setup);
      if (!disp_mask_pgm.empty()) write_pgm(disp_mask_pgm, res.result.mask, 1.0);
      std::cout << "chosen=" << to_string(res.chosen)
                << " predict_s=" << res.predict_seconds << " ";
      print_result(res.result);
    } else if (*bench) {
      std::vector<Layout> designs =
          gather_designs(bench_files, false, bench_suite, bench_suite_count, g.seed);
      BenchMode mode;
      if (bench_mode == "predicted") mode = BenchMode::Predicted;
      else if (bench_mode == "oracle") mode = BenchMode::Oracle;
      else if (bench_mode == "both-engines") mode = BenchMode::BothEngines;
      else throw InputError("unknown bench mode '" + bench_mode + "'");
      SelectorModel model;
      if (mode == BenchMode::Predicted) {
        if (bench_model.empty()) throw InputError("predicted mode requires --model");
        model = load_model(bench_model);
      }
      BenchReport rep =
          bench_report(designs, mode == BenchMode::Predicted ? &model : nullptr, cfg.pipeline(),
                       cfg.setup, mode, g.jobs, g.fixed_time);
      std::ostringstream csv;
      write_bench_csv(csv, rep);
      write_text(bench_out, csv.str());
      if (!bench_gap_out.empty()) {
        std::ostringstream gcsv;
        write_mse_gap_csv(gcsv, rep);
        write_text(bench_gap_out, gcsv.str());
      }
    } else if (*gap) {
      std::ifstream in(gap_in);
      if (!in) throw InputError("cannot open " + gap_in);
      std::string line;
      if (!std::getline(in, line) || line.rfind("id,mse_mb,", 0) != 0)
        throw InputError(gap_in + " is not a bench report CSV");
      std::ostringstream out;
      out << "id,mse_mb,mse_ilt\n";
      while (std::getline(in, line)) {
        std::istringstream is(line);
        std::vector<std::string> cells;
        for (std::string c; std::getline(is, c, ',');) cells.push_back(c);
        if (cells.size() < 5 || cells[0] == "Avg." || cells[0] == "Ratio" || cells[1].empty())
          continue;
        out << cells[0] << "," << cells[1] << "," << cells[3] << "\n";
      }
      write_text(gap_out, out.str());
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
