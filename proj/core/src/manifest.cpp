#include "hoifit/manifest.hpp"

#include <fstream>
#include <sstream>

namespace hoifit {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& field, const std::string& why) {
  throw ManifestError("manifest schema error at '" + field + "': " + why);
}

double require_number(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number()) schema_fail(field, "expected a number");
  return j[field].get<double>();
}

const json& require(const json& j, const std::string& field) {
  if (!j.contains(field)) schema_fail(field, "missing");
  return j[field];
}

Vec3 parse_vec3(const json& arr, const std::string& field) {
  if (!arr.is_array() || arr.size() != 3) schema_fail(field, "expected [x, y, z]");
  return Vec3(arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>());
}

Mat3 parse_mat3(const json& arr, const std::string& field) {
  if (!arr.is_array() || arr.size() != 9) {
    schema_fail(field, "expected 9 numbers, row-major");
  }
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = arr[3 * r + c].get<double>();
  }
  return m;
}

json mat3_json(const Mat3& m) {
  json arr = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) arr.push_back(m(r, c));
  }
  return arr;
}

json pose_json(const Pose6D& p) {
  return json{{"quat", {p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z()}},
              {"trans", {p.translation.x(), p.translation.y(), p.translation.z()}}};
}

Pose6D parse_pose(const json& j, const std::string& field) {
  const json& q = require(j, "quat");
  if (!q.is_array() || q.size() != 4) schema_fail(field + ".quat", "expected [w, x, y, z]");
  return Pose6D(Quat(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                     q[3].get<double>()),
                parse_vec3(require(j, "trans"), field + ".trans"));
}

}  // namespace

std::vector<int> SequenceManifest::visible_frames() const {
  std::vector<int> out;
  for (int i = 0; i < frame_count(); ++i) {
    if (frames[i].hand_visible) out.push_back(i);
  }
  return out;
}

ObjectTrajectory SequenceManifest::object_trajectory() const {
  ObjectTrajectory traj;
  traj.fps = fps;
  traj.poses.reserve(frames.size());
  for (const auto& f : frames) traj.poses.push_back(f.object_pose);
  return traj;
}

std::filesystem::path SequenceManifest::resolve(const std::string& relative) const {
  std::filesystem::path p(relative);
  return p.is_absolute() ? p : base_dir / p;
}

void SequenceManifest::validate(bool check_files) const {
  if (!(fps > 0.0)) schema_fail("fps", "must be positive");
  if (frames.empty()) schema_fail("frames", "must not be empty");
  if (object_mesh_file.empty()) schema_fail("object_mesh", "missing");
  if (hand_model_file.empty()) schema_fail("hand_model", "missing");
  if (beta.size() != kShapeDim) schema_fail("beta", "expected 10 entries");
  if (grasp_frame && (*grasp_frame < 0 || *grasp_frame >= frame_count())) {
    schema_fail("grasp_frame", "out of range");
  }
  for (int i = 0; i < frame_count(); ++i) {
    const auto& f = frames[i];
    const std::string where = "frames[" + std::to_string(i) + "]";
    if (!f.camera.is_valid()) {
      schema_fail(where + ".camera", "K must be upper-triangular with positive focals "
                                     "and R a proper rotation");
    }
    if (f.hand_visible && f.hand_theta.size() != kThetaDim) {
      schema_fail(where + ".hand_theta", "visible frames must carry 48 pose entries");
    }
  }
  if (check_files) {
    auto must_exist = [&](const std::string& rel, const std::string& field) {
      if (!std::filesystem::exists(resolve(rel))) {
        schema_fail(field, "referenced file does not exist: " + resolve(rel).string());
      }
    };
    must_exist(object_mesh_file, "object_mesh");
    must_exist(hand_model_file, "hand_model");
    for (int i = 0; i < frame_count(); ++i) {
      const std::string where = "frames[" + std::to_string(i) + "]";
      if (frames[i].depth_file) must_exist(*frames[i].depth_file, where + ".depth");
      if (frames[i].mask_file) must_exist(*frames[i].mask_file, where + ".mask");
    }
    if (config.completion_file) {
      must_exist(*config.completion_file, "config.completion_file");
    }
  }
}

json config_to_json(const PipelineConfig& config) {
  json j;
  j["segmentation"] = {{"eps_translation_m", config.segmentation.eps_translation},
                       {"eps_rotation_rad", config.segmentation.eps_rotation},
                       {"window", config.segmentation.window},
                       {"reference_fps", config.segmentation.reference_fps}};
  j["filter"] = {{"f_min", config.filter.f_min},
                 {"f_d", config.filter.f_d},
                 {"speed_coeff", config.filter.speed_coeff},
                 {"dt", config.filter.dt}};
  const OptimConfig& o = config.optim;
  j["optim"] = {{"lambda_contact", o.lambda_contact},
                {"lambda_sdf", o.lambda_sdf},
                {"lambda_smooth", o.lambda_smooth},
                {"lambda_reg", o.lambda_reg},
                {"lambda_grasp_sdf", o.lambda_grasp_sdf},
                {"lambda_grasp_smooth", o.lambda_grasp_smooth},
                {"lambda_grasp_reg", o.lambda_grasp_reg},
                {"interaction_steps", o.interaction_steps},
                {"interaction_lr", o.interaction_lr},
                {"grasp_steps", o.grasp_steps},
                {"grasp_lr", o.grasp_lr},
                {"contact_refresh", o.contact_refresh},
                {"gradient_mode",
                 o.gradient_mode == GradientMode::Analytic ? "analytic" : "finite-difference"},
                {"sdf_mode", o.sdf_mode == SdfLossMode::Hinge ? "hinge" : "literal"}};
  j["iv_voxel_m"] = config.iv_voxel_m;
  j["completion_tolerance"] = config.completion_tolerance;
  if (config.completion_file) j["completion_file"] = *config.completion_file;
  return j;
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig config;
  if (j.contains("segmentation")) {
    const auto& s = j["segmentation"];
    if (s.contains("eps_translation_m")) config.segmentation.eps_translation = s["eps_translation_m"];
    if (s.contains("eps_rotation_rad")) config.segmentation.eps_rotation = s["eps_rotation_rad"];
    if (s.contains("window")) config.segmentation.window = s["window"];
    if (s.contains("reference_fps")) config.segmentation.reference_fps = s["reference_fps"];
  }
  if (j.contains("filter")) {
    const auto& f = j["filter"];
    if (f.contains("f_min")) config.filter.f_min = f["f_min"];
    if (f.contains("f_d")) config.filter.f_d = f["f_d"];
    if (f.contains("speed_coeff")) config.filter.speed_coeff = f["speed_coeff"];
    if (f.contains("dt")) config.filter.dt = f["dt"];
  }
  if (j.contains("optim")) {
    const auto& o = j["optim"];
    OptimConfig& c = config.optim;
    if (o.contains("lambda_contact")) c.lambda_contact = o["lambda_contact"];
    if (o.contains("lambda_sdf")) c.lambda_sdf = o["lambda_sdf"];
    if (o.contains("lambda_smooth")) c.lambda_smooth = o["lambda_smooth"];
    if (o.contains("lambda_reg")) c.lambda_reg = o["lambda_reg"];
    if (o.contains("lambda_grasp_sdf")) c.lambda_grasp_sdf = o["lambda_grasp_sdf"];
    if (o.contains("lambda_grasp_smooth")) c.lambda_grasp_smooth = o["lambda_grasp_smooth"];
    if (o.contains("lambda_grasp_reg")) c.lambda_grasp_reg = o["lambda_grasp_reg"];
    if (o.contains("interaction_steps")) c.interaction_steps = o["interaction_steps"];
    if (o.contains("interaction_lr")) c.interaction_lr = o["interaction_lr"];
    if (o.contains("grasp_steps")) c.grasp_steps = o["grasp_steps"];
    if (o.contains("grasp_lr")) c.grasp_lr = o["grasp_lr"];
    if (o.contains("contact_refresh")) c.contact_refresh = o["contact_refresh"];
    if (o.contains("gradient_mode")) {
      std::string mode = o["gradient_mode"];
      if (mode == "analytic") c.gradient_mode = GradientMode::Analytic;
      else if (mode == "finite-difference") c.gradient_mode = GradientMode::FiniteDifference;
      else schema_fail("config.optim.gradient_mode", "expected analytic|finite-difference");
    }
    if (o.contains("sdf_mode")) {
      std::string mode = o["sdf_mode"];
      if (mode == "hinge") c.sdf_mode = SdfLossMode::Hinge;
      else if (mode == "literal") c.sdf_mode = SdfLossMode::Literal;
      else schema_fail("config.optim.sdf_mode", "expected hinge|literal");
    }
  }
  if (j.contains("iv_voxel_m")) config.iv_voxel_m = j["iv_voxel_m"];
  if (j.contains("completion_tolerance")) config.completion_tolerance = j["completion_tolerance"];
  if (j.contains("completion_file")) config.completion_file = j["completion_file"].get<std::string>();
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError(path.string() + ": cannot open config");
  return config_from_json(json::parse(in));
}

void save_config(const PipelineConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << config_to_json(config).dump(2) << "\n";
}

SequenceManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError(path.string() + ": cannot open manifest");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ManifestError(path.string() + ": not valid JSON: " + e.what());
  }

  SequenceManifest m;
  m.base_dir = std::filesystem::absolute(path).parent_path();

  int version = require(j, "schema_version").get<int>();
  if (version != SequenceManifest::kSchemaVersion) {
    schema_fail("schema_version", "unsupported version " + std::to_string(version));
  }
  m.fps = require_number(j, "fps");
  m.object_mesh_file = require(j, "object_mesh").get<std::string>();
  m.hand_model_file = require(j, "hand_model").get<std::string>();
  const json& beta = require(j, "beta");
  if (!beta.is_array() || beta.size() != kShapeDim) schema_fail("beta", "expected 10 entries");
  for (int k = 0; k < kShapeDim; ++k) m.beta[k] = beta[k].get<double>();
  if (j.contains("grasp_frame") && !j["grasp_frame"].is_null()) {
    m.grasp_frame = j["grasp_frame"].get<int>();
  }
  if (j.contains("config")) m.config = config_from_json(j["config"]);

  const json& frames = require(j, "frames");
  if (!frames.is_array()) schema_fail("frames", "expected an array");
  for (size_t i = 0; i < frames.size(); ++i) {
    const json& fj = frames[i];
    const std::string where = "frames[" + std::to_string(i) + "]";
    auto field = [&](const json& node, const char* name) -> const json& {
      if (!node.contains(name)) schema_fail(where + "." + name, "missing");
      return node[name];
    };
    FrameRecord rec;
    const json& cam = field(fj, "camera");
    rec.camera.K = parse_mat3(field(cam, "K"), where + ".camera.K");
    rec.camera.R = parse_mat3(field(cam, "R"), where + ".camera.R");
    rec.camera.t = parse_vec3(field(cam, "t"), where + ".camera.t");
    rec.camera.width = field(cam, "width").get<int>();
    rec.camera.height = field(cam, "height").get<int>();
    rec.object_pose = parse_pose(field(fj, "object_pose"), where + ".object_pose");
    rec.hand_visible = field(fj, "hand_visible").get<bool>();
    if (rec.hand_visible) {
      const json& th = field(fj, "hand_theta");
      if (!th.is_array() || th.size() != kThetaDim) {
        schema_fail(where + ".hand_theta", "expected 48 entries");
      }
      rec.hand_theta.resize(kThetaDim);
      for (int k = 0; k < kThetaDim; ++k) rec.hand_theta[k] = th[k].get<double>();
      rec.hand_tau = parse_vec3(field(fj, "hand_tau"), where + ".hand_tau");
    }
    if (fj.contains("depth") && !fj["depth"].is_null()) {
      rec.depth_file = fj["depth"].get<std::string>();
    }
    if (fj.contains("mask") && !fj["mask"].is_null()) {
      rec.mask_file = fj["mask"].get<std::string>();
    }
    m.frames.push_back(std::move(rec));
  }

  m.validate(true);
  return m;
}

void save_manifest(const SequenceManifest& manifest, const std::filesystem::path& path) {
  manifest.validate(false);
  json j;
  j["schema_version"] = SequenceManifest::kSchemaVersion;
  j["fps"] = manifest.fps;
  j["object_mesh"] = manifest.object_mesh_file;
  j["hand_model"] = manifest.hand_model_file;
  json beta = json::array();
  for (int k = 0; k < kShapeDim; ++k) beta.push_back(manifest.beta[k]);
  j["beta"] = beta;
  if (manifest.grasp_frame) j["grasp_frame"] = *manifest.grasp_frame;
  j["config"] = config_to_json(manifest.config);

  json frames = json::array();
  for (const auto& f : manifest.frames) {
    json fj;
    fj["camera"] = {{"K", mat3_json(f.camera.K)},
                    {"R", mat3_json(f.camera.R)},
                    {"t", {f.camera.t.x(), f.camera.t.y(), f.camera.t.z()}},
                    {"width", f.camera.width},
                    {"height", f.camera.height}};
    fj["object_pose"] = pose_json(f.object_pose);
    fj["hand_visible"] = f.hand_visible;
    if (f.hand_visible) {
      json th = json::array();
      for (int k = 0; k < kThetaDim; ++k) th.push_back(f.hand_theta[k]);
      fj["hand_theta"] = th;
      fj["hand_tau"] = {f.hand_tau.x(), f.hand_tau.y(), f.hand_tau.z()};
    }
    if (f.depth_file) fj["depth"] = *f.depth_file;
    if (f.mask_file) fj["mask"] = *f.mask_file;
    frames.push_back(fj);
  }
  j["frames"] = frames;

  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

void save_hand_sequence_json(const HandSequence& seq, const std::filesystem::path& path) {
  json frames = json::array();
  for (int t = 0; t < seq.frame_count(); ++t) {
    json fj{{"t", t}, {"visible", static_cast<bool>(seq.visible[t])}};
    if (seq.visible[t]) {
      json th = json::array();
      for (int k = 0; k < seq.theta[t].size(); ++k) th.push_back(seq.theta[t][k]);
      fj["theta"] = th;
      fj["tau"] = {seq.tau[t].x(), seq.tau[t].y(), seq.tau[t].z()};
    }
    frames.push_back(fj);
  }
  json beta = json::array();
  for (int k = 0; k < seq.beta.size(); ++k) beta.push_back(seq.beta[k]);
  json j{{"beta", beta}, {"frames", frames}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

HandSequence load_hand_sequence_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError(path.string() + ": cannot open");
  json j = json::parse(in);
  HandSequence seq;
  const json& beta = require(j, "beta");
  seq.beta.resize(beta.size());
  for (size_t k = 0; k < beta.size(); ++k) seq.beta[k] = beta[k].get<double>();
  for (const auto& fj : require(j, "frames")) {
    bool visible = require(fj, "visible").get<bool>();
    seq.visible.push_back(visible);
    if (visible) {
      const json& th = require(fj, "theta");
      VecX theta(th.size());
      for (size_t k = 0; k < th.size(); ++k) theta[k] = th[k].get<double>();
      seq.theta.push_back(theta);
      seq.tau.push_back(parse_vec3(require(fj, "tau"), "frames.tau"));
    } else {
      seq.theta.emplace_back();
      seq.tau.emplace_back(Vec3::Zero());
    }
  }
  return seq;
}

void save_ground_truth_json(const GroundTruth& gt, const std::filesystem::path& path) {
  json frames = json::array();
  for (int t = 0; t < gt.hand.frame_count(); ++t) {
    json th = json::array();
    for (int k = 0; k < gt.hand.theta[t].size(); ++k) th.push_back(gt.hand.theta[t][k]);
    const Pose6D& p = gt.object.poses[t];
    frames.push_back(
        {{"t", t},
         {"theta", th},
         {"tau", {gt.hand.tau[t].x(), gt.hand.tau[t].y(), gt.hand.tau[t].z()}},
         {"object_pose", pose_json(p)}});
  }
  json beta = json::array();
  for (int k = 0; k < gt.hand.beta.size(); ++k) beta.push_back(gt.hand.beta[k]);
  json j{{"t_star", gt.t_star}, {"fps", gt.object.fps}, {"beta", beta}, {"frames", frames}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

GroundTruth load_ground_truth_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError(path.string() + ": cannot open");
  json j = json::parse(in);
  GroundTruth gt;
  gt.t_star = require(j, "t_star").get<int>();
  gt.object.fps = require_number(j, "fps");
  const json& beta = require(j, "beta");
  gt.hand.beta.resize(beta.size());
  for (size_t k = 0; k < beta.size(); ++k) gt.hand.beta[k] = beta[k].get<double>();
  for (const auto& fj : require(j, "frames")) {
    const json& th = require(fj, "theta");
    VecX theta(th.size());
    for (size_t k = 0; k < th.size(); ++k) theta[k] = th[k].get<double>();
    gt.hand.theta.push_back(theta);
    gt.hand.tau.push_back(parse_vec3(require(fj, "tau"), "frames.tau"));
    gt.hand.visible.push_back(true);
    gt.object.poses.push_back(parse_pose(require(fj, "object_pose"), "frames.object_pose"));
  }
  return gt;
}

}  // namespace hoifit
