#include "hoifit/synth.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "hoifit/hand_synthetic.hpp"
#include "hoifit/image_io.hpp"
#include "hoifit/mesh_io.hpp"
#include "hoifit/hand_io.hpp"
#include "hoifit/raycast.hpp"
#include "hoifit/shapes.hpp"

namespace hoifit {

namespace {

// The grasped ball sits under the distal half of the palm, in the hand's
// rest frame (wrist at the origin, fingers along +y, palm facing -z).
const Vec3 kBallCenter(0.0, 0.075, -0.061);
constexpr double kBallRadius = 0.040;
constexpr double kOpenCurlFraction = 0.25;
constexpr double kSurfaceClearance = 0.0005;  // meters between apex and surface

// Per-finger curl direction (proximal, middle, distal); the grasp scales
// these until the tip reaches the ball.
const std::array<Vec3, 5> kCurlProfile = {
    Vec3(1.05, 0.70, 0.55),  // thumb (opposition sweep, then curl)
    Vec3(1.35, 1.10, 0.75),  // index
    Vec3(1.35, 1.10, 0.75),  // middle
    Vec3(1.35, 1.10, 0.75),  // ring
    Vec3(1.35, 1.10, 0.75),  // pinky
};

Vec3 apex_position(const PosedHand& hand, int finger) {
  return hand.vertices[synthetic_tip_apices()[finger]];
}

/// Curl scales that land each tip apex exactly on the ball surface, found by
/// a scan plus bisection per finger over the curl profile.
std::array<double, 5> solve_grasp_curls(const HandModelDef& model) {
  const VecX beta = VecX::Zero(kShapeDim);
  const double target = kBallRadius + kSurfaceClearance;
  std::array<double, 5> scales{};
  for (int f = 0; f < 5; ++f) {
    auto gap = [&](double s) {
      std::array<Vec3, 5> curls{};
      curls[f] = s * kCurlProfile[f];
      PosedHand h = forward_hand(model, synthetic_curl_theta(curls), beta, Vec3::Zero());
      return (apex_position(h, f) - kBallCenter).norm() - target;
    };
    // Bracket the first touch as the finger curls in.
    double lo = 0.1, hi = 1.8;
    double prev_s = lo, prev_gap = gap(lo);
    bool bracketed = false;
    for (double s = lo + 0.05; s <= hi; s += 0.05) {
      double g = gap(s);
      if (prev_gap > 0.0 && g <= 0.0) {
        lo = prev_s;
        hi = s;
        bracketed = true;
        break;
      }
      prev_s = s;
      prev_gap = g;
    }
    if (!bracketed) {
      throw std::logic_error("synthetic grasp: finger cannot reach the ball");
    }
    for (int iter = 0; iter < 60; ++iter) {
      double mid = 0.5 * (lo + hi);
      (gap(mid) > 0.0 ? lo : hi) = mid;
    }
    scales[f] = 0.5 * (lo + hi);
  }
  return scales;
}

double smoothstep(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * (3.0 - 2.0 * s);
}

/// Per-frame motion magnitudes: a short velocity ramp at both ends with a
/// constant plateau, normalized so the profile integrates to 1.
std::vector<double> motion_profile(int frames) {
  constexpr int kRamp = 3;
  std::vector<double> velocity(frames, 0.0);
  for (int k = 0; k < frames; ++k) {
    double ramp_in = std::min(1.0, (k + 1) / static_cast<double>(kRamp));
    double ramp_out = std::min(1.0, (frames - k) / static_cast<double>(kRamp));
    velocity[k] = std::min(ramp_in, ramp_out);
  }
  double total = 0.0;
  for (double v : velocity) total += v;
  std::vector<double> cumulative(frames, 0.0);
  double acc = 0.0;
  for (int k = 0; k < frames; ++k) {
    acc += velocity[k] / total;
    cumulative[k] = acc;
  }
  return cumulative;
}

VecX curl_theta_at(const std::array<double, 5>& scales, double fraction) {
  std::array<Vec3, 5> curls;
  for (int f = 0; f < 5; ++f) curls[f] = fraction * scales[f] * kCurlProfile[f];
  return synthetic_curl_theta(curls);
}

}  // namespace

SynthResult generate_synthetic_sequence(const SynthSpec& spec) {
  SynthResult result;
  result.hand = make_synthetic_hand();
  const HandModelDef& model = result.hand;
  const VecX beta = VecX::Zero(kShapeDim);

  // Grasp configuration in the hand frame (wrist at origin).
  const std::array<double, 5> curl_scales = solve_grasp_curls(model);
  const VecX theta_grasp = curl_theta_at(curl_scales, 1.0);
  PosedHand grasp = forward_hand(model, theta_grasp, beta, Vec3::Zero());

  std::vector<Vec3> apexes(5);
  for (int f = 0; f < 5; ++f) apexes[f] = apex_position(grasp, f);

  const Vec3 obj_center = kBallCenter;
  const double obj_radius = kBallRadius;

  switch (spec.primitive) {
    case SynthSpec::Primitive::Sphere:
      result.object = make_icosphere(obj_radius, 2);
      break;
    case SynthSpec::Primitive::Box: {
      const double h = obj_radius / std::sqrt(3.0);  // inscribed in the fit sphere
      result.object = make_box(Vec3(h, h, h) * 1.25);
      break;
    }
    case SynthSpec::Primitive::Composite: {
      TriMesh box = make_box(Vec3(obj_radius * 0.7, obj_radius * 0.7, obj_radius * 0.45),
                             Vec3(0, 0, -obj_radius * 0.45));
      TriMesh ball = make_icosphere(obj_radius * 0.62, 2, Vec3(0, 0, obj_radius * 0.35));
      result.object = box;
      const int offset = static_cast<int>(result.object.vertices.size());
      for (const auto& v : ball.vertices) result.object.vertices.push_back(v);
      for (const auto& f : ball.faces) {
        result.object.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
      }
      break;
    }
  }

  // View the grasp from the thumb side (+x of the hand frame): the nail-strip
  // candidates split into camera-facing fingers near the silhouette rim and
  // the opposing thumb across the view axis. Image-up is world +z, so the
  // lift stays in frame.
  const Vec3 view_axis(-1.0, 0.0, 0.0);
  const Vec3 up_hint(0, 0, 1);
  const double focal = 1.875 * spec.image_size;  // ~30 degree horizontal FOV
  const CameraModel camera = CameraModel::look_at(
      obj_center - 0.45 * view_axis, obj_center, up_hint, focal, focal,
      spec.image_size / 2.0, spec.image_size / 2.0, spec.image_size, spec.image_size);

  const int T = spec.approach_frames + spec.interaction_frames;
  const int g = spec.approach_frames - 1;  // grasp pose attained here
  result.grasp_attained_frame = g;

  // Approach: enter from the side, outside the field of view, fingers
  // opening into the grasp over the last 60% of the approach.
  const Vec3 lateral = camera.R.row(0).transpose();  // image-right, exits the FOV
  const Vec3 tau_start = 0.30 * lateral + 0.04 * camera.R.row(1).transpose();

  std::vector<VecX> theta_gt(T);
  std::vector<Vec3> tau_gt(T);
  ObjectTrajectory object_gt;
  object_gt.fps = spec.fps;
  object_gt.poses.assign(T, Pose6D(Quat::Identity(), obj_center));

  for (int t = 0; t <= g; ++t) {
    const double s = g == 0 ? 1.0 : static_cast<double>(t) / g;
    tau_gt[t] = (1.0 - smoothstep(s)) * tau_start;
    const double close = std::clamp((s - 0.4) / 0.6, 0.0, 1.0);
    theta_gt[t] =
        curl_theta_at(curl_scales, kOpenCurlFraction + (1.0 - kOpenCurlFraction) * close);
  }

  // Interaction: object and hand move rigidly together.
  const auto profile = motion_profile(spec.interaction_frames);
  const Vec3 lift_dir = -camera.R.row(1).transpose();  // image-up (world +z here)
  const double lift_total = 0.08;
  const double yaw_total = deg_to_rad(40.0);
  for (int t = g + 1; t < T; ++t) {
    const double s = profile[t - g - 1];
    Vec3 lift = Vec3::Zero();
    Quat yaw = Quat::Identity();
    if (spec.motion != SynthSpec::Motion::Rotate) lift = lift_total * s * lift_dir;
    if (spec.motion != SynthSpec::Motion::Lift) yaw = quat_exp(yaw_total * s * Vec3(0, 0, 1));
    object_gt.poses[t] = Pose6D(yaw, obj_center + lift);
    // Hand follows: rotate about the object center, then translate.
    tau_gt[t] = yaw * (Vec3::Zero() - obj_center) + obj_center + lift;
    VecX theta = theta_grasp;
    theta.segment<3>(0) = quat_log(yaw * quat_exp(theta_grasp.segment<3>(0)));
    theta_gt[t] = theta;
  }

  // Clean-signal grasp frame under the default thresholds.
  GraspThresholds thresholds;
  thresholds.reference_fps = spec.fps;
  GraspSegmentation clean_seg = detect_grasp_frame(object_gt, thresholds);

  result.gt.object = object_gt;
  result.gt.t_star = clean_seg.t_star;
  result.gt.hand.beta = beta;
  result.gt.hand.visible.assign(T, true);
  result.gt.hand.theta = theta_gt;
  result.gt.hand.tau = tau_gt;

  // Detector-style noise.
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const double mid = 0.5 * (spec.depth_offset_min_m + spec.depth_offset_max_m);
  const double amp = 0.5 * (spec.depth_offset_max_m - spec.depth_offset_min_m);
  const double period = T * (0.8 + 0.6 * uniform(rng));
  const double phase = 2.0 * kPi * uniform(rng);
  // The depth error alternates sign in blocks of a few frames, the way
  // per-frame detector depth jumps between near and far interpretations; a
  // constant offset would vanish under first-frame alignment.
  std::vector<double> depth_sign(T, 1.0);
  {
    const int block = 3 + static_cast<int>(uniform(rng) * 2.0);
    const double first = uniform(rng) < 0.5 ? -1.0 : 1.0;
    for (int t = 0; t < T; ++t) {
      depth_sign[t] = ((t / block) % 2 == 0) ? first : -first;
    }
  }

  SequenceManifest& m = result.manifest;
  m.fps = spec.fps;
  m.beta = beta;
  m.object_mesh_file = "object.obj";
  m.hand_model_file = "hand_model.json";
  m.config.segmentation.reference_fps = spec.fps;
  m.frames.resize(T);

  for (int t = 0; t < T; ++t) {
    FrameRecord& rec = m.frames[t];
    rec.camera = camera;

    Vec3 t_noise(gauss(rng), gauss(rng), gauss(rng));
    Vec3 r_noise(gauss(rng), gauss(rng), gauss(rng));
    rec.object_pose =
        Pose6D(quat_exp(spec.pose_jitter_rad * r_noise) * object_gt.poses[t].rotation,
               object_gt.poses[t].translation + spec.pose_jitter_m * t_noise);

    // Visibility from the projected contact candidates.
    PosedHand posed = forward_hand(model, theta_gt[t], beta, tau_gt[t]);
    ContactCandidates cand = contact_candidates(model, posed);
    auto projected = project_points(camera, cand.positions);
    int in_view = 0;
    for (const auto& p : projected) {
      if (p.valid && p.pixel.x() >= 0 && p.pixel.x() < camera.width && p.pixel.y() >= 0 &&
          p.pixel.y() < camera.height) {
        ++in_view;
      }
    }
    rec.hand_visible = in_view * 2 >= static_cast<int>(projected.size());

    const double depth_err =
        depth_sign[t] * (mid + amp * std::sin(2.0 * kPi * t / period + phase));
    const Vec3 ray = (tau_gt[t] - camera.center()).normalized();

    VecX theta_noise(kThetaDim);
    for (int k = 0; k < kThetaDim; ++k) theta_noise[k] = gauss(rng);
    if (rec.hand_visible) {
      rec.hand_theta = theta_gt[t] + spec.theta_jitter_rad * theta_noise;
      rec.hand_tau = tau_gt[t] + depth_err * ray;
    }
  }

  m.validate(false);
  return result;
}

std::filesystem::path write_synthetic_sequence(const SynthSpec& spec,
                                               const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::filesystem::create_directories(dir / "depth");
  std::filesystem::create_directories(dir / "mask");

  SynthResult result = generate_synthetic_sequence(spec);
  save_obj(result.object, dir / "object.obj");
  save_hand_model(result.hand, dir / "hand_model.json");
  save_ground_truth_json(result.gt, dir / "gt.json");

  TriangleBvh bvh(result.object);
  char name[32];
  for (int t = 0; t < result.manifest.frame_count(); ++t) {
    FrameRecord& rec = result.manifest.frames[t];
    const Pose6D& pose = result.gt.object.poses[t];
    std::snprintf(name, sizeof(name), "depth/%04d.png", t);
    save_depth_png(render_depth(bvh, pose, rec.camera), dir / name);
    rec.depth_file = name;
    std::snprintf(name, sizeof(name), "mask/%04d.png", t);
    save_mask_png(render_object_mask(bvh, pose, rec.camera), dir / name);
    rec.mask_file = name;
  }

  result.manifest.base_dir = dir;
  save_manifest(result.manifest, dir / "manifest.json");
  return dir / "manifest.json";
}

}  // namespace hoifit
