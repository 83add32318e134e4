#include "hoifit/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hoifit/hand_io.hpp"

namespace hoifit {

namespace {

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                               "#8c564b"};

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(6) << v;
  return ss.str();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::filesystem::path& path, bool log_y) {
  constexpr double W = 640, H = 400;
  constexpr double L = 70, R = 20, T = 40, B = 50;  // margins

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      double y = s.y[i];
      if (log_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      if (first) {
        x_min = x_max = s.x[i];
        y_min = y_max = y;
        first = false;
      } else {
        x_min = std::min(x_min, s.x[i]);
        x_max = std::max(x_max, s.x[i]);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (x_max <= x_min) x_max = x_min + 1;
  if (y_max <= y_min) y_max = y_min + 1;

  auto sx = [&](double x) { return L + (x - x_min) / (x_max - x_min) * (W - L - R); };
  auto sy = [&](double y) {
    if (log_y) y = std::log10(std::max(y, 1e-300));
    return H - B - (y - y_min) / (y_max - y_min) * (H - T - B);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";

  // Axes and ticks.
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\""
      << H - B << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = x_min + (x_max - x_min) * k / 4.0;
    double yv = y_min + (y_max - y_min) * k / 4.0;
    out << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(xv) << "</text>\n";
    double shown = log_y ? std::pow(10.0, yv) : yv;
    out << "<text x=\"" << L - 6 << "\" y=\"" << H - B - (H - T - B) * k / 4.0 + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(shown) << "</text>\n";
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(x_label)
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << (T + H - B) / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << (T + H - B) / 2 << ")\">" << xml_escape(y_label + (log_y ? " (log)" : ""))
      << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kSeriesColors[si % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && !(s.y[i] > 0.0)) continue;
      out << fmt(sx(s.x[i])) << "," << fmt(sy(s.y[i])) << " ";
    }
    out << "\"/>\n";
    double ly = T + 16.0 * static_cast<double>(si);
    out << "<line x1=\"" << W - R - 120 << "\" y1=\"" << ly << "\" x2=\"" << W - R - 100
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << W - R - 94 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">"
        << xml_escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_loss_plot(const StageResult& result, const std::filesystem::path& path) {
  auto make = [&](const std::string& label, const std::vector<double>& y) {
    PlotSeries s;
    s.label = label;
    s.y = y;
    s.x.resize(y.size());
    for (size_t i = 0; i < y.size(); ++i) s.x[i] = static_cast<double>(i);
    return s;
  };
  std::vector<PlotSeries> series{make("total", result.loss_trace)};
  auto add_if_nonzero = [&](const std::string& label, const std::vector<double>& y) {
    for (double v : y) {
      if (v != 0.0) {
        series.push_back(make(label, y));
        return;
      }
    }
  };
  add_if_nonzero("contact", result.terms.contact);
  add_if_nonzero("sdf", result.terms.sdf);
  add_if_nonzero("smooth", result.terms.smooth);
  add_if_nonzero("reg", result.terms.reg);
  write_svg_line_plot(series, "optimization loss", "step", "loss", path, true);
}

void write_wrist_depth_plot(const SequenceManifest& manifest, const HandModelDef& model,
                            const HandSequence& result, const HandSequence* gt,
                            const std::filesystem::path& path) {
  PlotSeries opt{"optimized", {}, {}}, det{"detector", {}, {}}, truth{"ground truth", {}, {}};
  const std::vector<Vec3> rest = model.rest_joints();
  for (int t = 0; t < manifest.frame_count(); ++t) {
    const CameraModel& cam = manifest.frames[t].camera;
    // Wrist is the root joint: global rotation pivots about it, so its world
    // position is rest + tau.
    if (t < result.frame_count() && result.visible[t]) {
      opt.x.push_back(t);
      opt.y.push_back(cam.to_camera(rest[0] + result.tau[t]).z());
    }
    if (manifest.frames[t].hand_visible) {
      det.x.push_back(t);
      det.y.push_back(cam.to_camera(rest[0] + manifest.frames[t].hand_tau).z());
    }
    if (gt && t < gt->frame_count() && gt->visible[t]) {
      truth.x.push_back(t);
      truth.y.push_back(cam.to_camera(rest[0] + gt->tau[t]).z());
    }
  }
  std::vector<PlotSeries> series{opt, det};
  if (gt) series.push_back(truth);
  write_svg_line_plot(series, "wrist depth over time", "frame", "camera z (m)", path);
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  if (name == "svg") return ReportFormat::Svg;
  throw std::invalid_argument("unknown report format: " + name +
                              " (expected csv|json|svg)");
}

namespace {

StageResult load_loss_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  StageResult r;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 6) continue;
    r.loss_trace.push_back(row[1]);
    r.terms.contact.push_back(row[2]);
    r.terms.sdf.push_back(row[3]);
    r.terms.smooth.push_back(row[4]);
    r.terms.reg.push_back(row[5]);
  }
  return r;
}

}  // namespace

void export_report(const std::filesystem::path& run_dir, ReportFormat format,
                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto metrics_json = run_dir / "metrics.json";
  switch (format) {
    case ReportFormat::Csv:
    case ReportFormat::Json: {
      if (!std::filesystem::exists(metrics_json)) {
        throw std::runtime_error("no metrics.json in " + run_dir.string() +
                                 " (run with ground truth to produce metrics)");
      }
      std::ifstream in(metrics_json);
      nlohmann::json j = nlohmann::json::parse(in);
      if (format == ReportFormat::Json) {
        std::ofstream out(out_dir / "metrics.json");
        out << j.dump(2) << "\n";
      } else {
        MetricsReport r;
        r.mpjpe_mm = j.value("mpjpe_mm", 0.0);
        r.mrpe_mm = j.value("mrpe_mm", 0.0);
        r.iv_mean_cm3 = j.value("iv_mean_cm3", 0.0);
        r.iv_max_cm3 = j.value("iv_max_cm3", 0.0);
        r.id_mean_mm = j.value("id_mean_mm", 0.0);
        r.id_max_mm = j.value("id_max_mm", 0.0);
        r.jm_mm_s3 = j.value("jm_mm_s3", 0.0);
        save_metrics_csv({r}, out_dir / "metrics.csv");
      }
      break;
    }
    case ReportFormat::Svg: {
      for (const char* name : {"interaction_loss", "grasp_loss"}) {
        const auto csv = run_dir / (std::string(name) + ".csv");
        if (std::filesystem::exists(csv)) {
          write_loss_plot(load_loss_csv(csv), out_dir / (std::string(name) + ".svg"));
        }
      }
      break;
    }
  }
}

}  // namespace hoifit
