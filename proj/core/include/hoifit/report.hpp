#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hoifit/manifest.hpp"
#include "hoifit/metrics.hpp"
#include "hoifit/optimizer.hpp"

namespace hoifit {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line-plot SVG: axes, tick labels, one polyline per series with a
/// small legend. Output is well-formed XML.
void write_svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::filesystem::path& path, bool log_y = false);

/// Per-step total and per-term loss curves of one stage.
void write_loss_plot(const StageResult& result, const std::filesystem::path& path);

/// Camera-frame wrist depth per frame for the optimized result, the detector
/// inputs, and optionally the ground truth.
void write_wrist_depth_plot(const SequenceManifest& manifest, const HandModelDef& model,
                            const HandSequence& result, const HandSequence* gt,
                            const std::filesystem::path& path);

enum class ReportFormat { Csv, Json, Svg };
ReportFormat parse_report_format(const std::string& name);  // throws on unknown

/// Re-exports artifacts from a finished run directory in the requested
/// format: metrics (csv/json) or loss-trace plots (svg).
void export_report(const std::filesystem::path& run_dir, ReportFormat format,
                   const std::filesystem::path& out_dir);

}  // namespace hoifit
