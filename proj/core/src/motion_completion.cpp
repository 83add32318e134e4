#include "hoifit/motion_completion.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hoifit/pose.hpp"

namespace hoifit {

MotionCompletion complete_motion_interpolate(const std::vector<int>& visible_frames,
                                             const std::vector<VecX>& theta_visible,
                                             const std::vector<Vec3>& tau_visible,
                                             int frame_count) {
  if (visible_frames.empty()) {
    throw std::invalid_argument("complete_motion: no visible frames");
  }
  if (visible_frames.size() != theta_visible.size() ||
      visible_frames.size() != tau_visible.size()) {
    throw std::invalid_argument("complete_motion: guidance sizes disagree");
  }
  for (size_t i = 0; i < visible_frames.size(); ++i) {
    if (visible_frames[i] < 0 || visible_frames[i] >= frame_count ||
        (i > 0 && visible_frames[i] <= visible_frames[i - 1])) {
      throw std::invalid_argument("complete_motion: visible frames must be sorted in range");
    }
  }

  MotionCompletion out;
  out.source = MotionCompletion::Source::Interpolation;
  out.theta.resize(frame_count);
  out.tau.resize(frame_count);

  const int first = visible_frames.front();
  const int last = visible_frames.back();
  size_t seg = 0;  // index of the visible frame at or before the current frame
  for (int t = 0; t < frame_count; ++t) {
    if (t <= first) {
      out.theta[t] = theta_visible.front();
      out.tau[t] = tau_visible.front();
      continue;
    }
    if (t >= last) {
      out.theta[t] = theta_visible.back();
      out.tau[t] = tau_visible.back();
      continue;
    }
    while (visible_frames[seg + 1] < t) ++seg;
    if (visible_frames[seg + 1] == t) {
      out.theta[t] = theta_visible[seg + 1];
      out.tau[t] = tau_visible[seg + 1];
      continue;
    }
    const int a = visible_frames[seg];
    const int b = visible_frames[seg + 1];
    const double s = static_cast<double>(t - a) / (b - a);
    out.tau[t] = (1.0 - s) * tau_visible[seg] + s * tau_visible[seg + 1];
    VecX theta(kThetaDim);
    for (int j = 0; j < kHandJoints; ++j) {
      // Per-joint spherical interpolation of the axis-angle blocks.
      theta.segment<3>(3 * j) = slerp_rotvec(theta_visible[seg].segment<3>(3 * j),
                                             theta_visible[seg + 1].segment<3>(3 * j), s);
    }
    out.theta[t] = theta;
  }
  return out;
}

void validate_external_completion(const MotionCompletion& completion,
                                  const std::vector<int>& visible_frames,
                                  const std::vector<VecX>& theta_visible,
                                  const std::vector<Vec3>& tau_visible,
                                  double tolerance,
                                  std::vector<CompletionMismatch>* report) {
  std::vector<CompletionMismatch> mismatches;
  for (size_t i = 0; i < visible_frames.size(); ++i) {
    const int t = visible_frames[i];
    if (t < 0 || t >= static_cast<int>(completion.theta.size())) {
      throw std::invalid_argument("external completion: visible frame out of range");
    }
    CompletionMismatch m;
    m.frame = t;
    m.theta_deviation = (completion.theta[t] - theta_visible[i]).cwiseAbs().maxCoeff();
    m.tau_deviation = (completion.tau[t] - tau_visible[i]).cwiseAbs().maxCoeff();
    if (m.theta_deviation > tolerance || m.tau_deviation > tolerance) {
      mismatches.push_back(m);
    }
  }
  if (report) *report = mismatches;
  if (!mismatches.empty()) {
    std::ostringstream msg;
    msg << "external completion disagrees with guidance on " << mismatches.size()
        << " visible frame(s):";
    for (const auto& m : mismatches) {
      msg << "\n  frame " << m.frame << ": theta dev " << m.theta_deviation
          << ", tau dev " << m.tau_deviation << " (tolerance " << tolerance << ")";
    }
    throw std::runtime_error(msg.str());
  }
}

MotionCompletion load_completion_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  nlohmann::json j = nlohmann::json::parse(in);
  MotionCompletion out;
  out.source = MotionCompletion::Source::External;
  for (const auto& e : j.at("frames")) {
    VecX theta(kThetaDim);
    const auto& th = e.at("theta");
    if (th.size() != kThetaDim) {
      throw std::runtime_error(path.string() + ": theta must have 48 entries");
    }
    for (int k = 0; k < kThetaDim; ++k) theta[k] = th[k].get<double>();
    out.theta.push_back(theta);
    const auto& tau = e.at("tau");
    out.tau.push_back(Vec3(tau[0], tau[1], tau[2]));
  }
  return out;
}

void save_completion_json(const MotionCompletion& completion,
                          const std::filesystem::path& path) {
  nlohmann::json frames = nlohmann::json::array();
  for (size_t t = 0; t < completion.theta.size(); ++t) {
    nlohmann::json theta = nlohmann::json::array();
    for (int k = 0; k < completion.theta[t].size(); ++k) theta.push_back(completion.theta[t][k]);
    frames.push_back({{"t", t},
                      {"theta", theta},
                      {"tau", {completion.tau[t].x(), completion.tau[t].y(),
                               completion.tau[t].z()}}});
  }
  nlohmann::json j{{"source", completion.source == MotionCompletion::Source::External
                                  ? "external"
                                  : "interpolation"},
                   {"frames", frames}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

}  // namespace hoifit
