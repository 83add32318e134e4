// hoifit command line: detector outputs in, scene-aligned hand-object
// trajectories and evaluation reports out.
//
// Exit codes: 0 success, 2 manifest/schema error, 3 stage failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <future>
#include <iostream>

#include "hoifit/hand_io.hpp"
#include "hoifit/hand_synthetic.hpp"
#include "hoifit/image_io.hpp"
#include "hoifit/mesh_io.hpp"
#include "hoifit/pipeline.hpp"
#include "hoifit/report.hpp"

namespace {

using namespace hoifit;
namespace fs = std::filesystem;

constexpr int kExitSchema = 2;
constexpr int kExitStage = 3;

fs::path default_output_dir() {
  if (const char* env = std::getenv("HOIFIT_OUT_DIR")) return fs::path(env);
  return fs::path("hoifit_out");
}

struct ConfigFlags {
  std::string config_file;
  // segmentation
  double eps_translation = -1, eps_rotation_deg = -1;
  int window = -1;
  // filter
  double f_min = -1, f_d = -1, speed_coeff = -1, dt = -1;
  // optimizer
  double l1 = -1, l2 = -1, l3 = -1, l4 = -1, l5 = -1, l6 = -1, l7 = -1;
  int interaction_steps = -1, grasp_steps = -1, contact_refresh = -1000000;
  double interaction_lr = -1, grasp_lr = -1;
  std::string gradient_mode, sdf_mode;
  double iv_voxel = -1, completion_tol = -1;
  std::string completion_file;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "pipeline config JSON (overrides manifest)");
    cmd->add_option("--eps-translation", eps_translation,
                    "grasp threshold, meters per frame");
    cmd->add_option("--eps-rotation-deg", eps_rotation_deg,
                    "grasp threshold, degrees per frame");
    cmd->add_option("--window", window, "consecutive frames m");
    cmd->add_option("--f-min", f_min, "one-euro minimum cutoff, Hz");
    cmd->add_option("--f-d", f_d, "one-euro derivative cutoff, Hz");
    cmd->add_option("--speed-coeff", speed_coeff, "one-euro speed coefficient");
    cmd->add_option("--dt", dt, "one-euro sampling interval constant");
    cmd->add_option("--lambda1", l1, "interaction contact weight");
    cmd->add_option("--lambda2", l2, "interaction sdf weight");
    cmd->add_option("--lambda3", l3, "interaction smoothness weight");
    cmd->add_option("--lambda4", l4, "interaction regularization weight");
    cmd->add_option("--lambda5", l5, "grasp sdf weight");
    cmd->add_option("--lambda6", l6, "grasp smoothness weight");
    cmd->add_option("--lambda7", l7, "grasp regularization weight");
    cmd->add_option("--interaction-steps", interaction_steps, "interaction stage steps");
    cmd->add_option("--interaction-lr", interaction_lr, "interaction learning rate");
    cmd->add_option("--grasp-steps", grasp_steps, "grasp stage steps");
    cmd->add_option("--grasp-lr", grasp_lr, "grasp learning rate");
    cmd->add_option("--contact-refresh", contact_refresh,
                    "steps between contact re-matching (<=0 freezes)");
    cmd->add_option("--gradient-mode", gradient_mode, "analytic|finite-difference");
    cmd->add_option("--sdf-mode", sdf_mode, "hinge|literal");
    cmd->add_option("--iv-voxel", iv_voxel, "interpenetration voxel edge, meters");
    cmd->add_option("--completion-tolerance", completion_tol,
                    "external completion guidance tolerance");
    cmd->add_option("--completion-file", completion_file,
                    "externally produced motion completion JSON");
  }

  void apply(PipelineConfig& config) const {
    if (!config_file.empty()) config = load_config(config_file);
    if (eps_translation >= 0) config.segmentation.eps_translation = eps_translation;
    if (eps_rotation_deg >= 0) config.segmentation.eps_rotation = deg_to_rad(eps_rotation_deg);
    if (window >= 0) config.segmentation.window = window;
    if (f_min > 0) config.filter.f_min = f_min;
    if (f_d > 0) config.filter.f_d = f_d;
    if (speed_coeff > 0) config.filter.speed_coeff = speed_coeff;
    if (dt > 0) config.filter.dt = dt;
    if (l1 >= 0) config.optim.lambda_contact = l1;
    if (l2 >= 0) config.optim.lambda_sdf = l2;
    if (l3 >= 0) config.optim.lambda_smooth = l3;
    if (l4 >= 0) config.optim.lambda_reg = l4;
    if (l5 >= 0) config.optim.lambda_grasp_sdf = l5;
    if (l6 >= 0) config.optim.lambda_grasp_smooth = l6;
    if (l7 >= 0) config.optim.lambda_grasp_reg = l7;
    if (interaction_steps > 0) config.optim.interaction_steps = interaction_steps;
    if (grasp_steps > 0) config.optim.grasp_steps = grasp_steps;
    if (contact_refresh != -1000000) config.optim.contact_refresh = contact_refresh;
    if (interaction_lr > 0) config.optim.interaction_lr = interaction_lr;
    if (grasp_lr > 0) config.optim.grasp_lr = grasp_lr;
    if (gradient_mode == "analytic") config.optim.gradient_mode = GradientMode::Analytic;
    else if (gradient_mode == "finite-difference")
      config.optim.gradient_mode = GradientMode::FiniteDifference;
    if (sdf_mode == "hinge") config.optim.sdf_mode = SdfLossMode::Hinge;
    else if (sdf_mode == "literal") config.optim.sdf_mode = SdfLossMode::Literal;
    if (iv_voxel > 0) config.iv_voxel_m = iv_voxel;
    if (completion_tol > 0) config.completion_tolerance = completion_tol;
    if (!completion_file.empty()) config.completion_file = completion_file;
  }
};

SequenceManifest load_with_flags(const std::string& path, const ConfigFlags& flags) {
  SequenceManifest manifest = load_manifest(path);
  flags.apply(manifest.config);
  return manifest;
}

// Per-sequence contexts shared by the stage subcommands.
struct StageInputs {
  SequenceManifest manifest;
  HandModelDef model;
  TriMesh object;
  GraspSegmentation segmentation;
  ObjectTrajectory filtered;

  static StageInputs load(const std::string& manifest_path, const ConfigFlags& flags) {
    StageInputs in{load_with_flags(manifest_path, flags), {}, {}, {}, {}};
    in.model = load_hand_model(in.manifest.resolve(in.manifest.hand_model_file));
    in.object = load_mesh(in.manifest.resolve(in.manifest.object_mesh_file));
    if (in.manifest.grasp_frame) {
      in.segmentation.t_star = *in.manifest.grasp_frame;
    } else {
      in.segmentation =
          detect_grasp_frame(in.manifest.object_trajectory(), in.manifest.config.segmentation);
    }
    in.filtered = smooth_interaction_poses(in.manifest.object_trajectory(),
                                           in.segmentation.t_star, in.manifest.config.filter);
    return in;
  }
};

int run_sequence(const std::string& manifest_path, const ConfigFlags& flags,
                 const fs::path& out_dir, const std::string& gt_path) {
  SequenceManifest manifest = load_with_flags(manifest_path, flags);
  std::optional<GroundTruth> gt;
  if (!gt_path.empty()) {
    gt = load_ground_truth_json(gt_path);
  } else if (fs::exists(manifest.base_dir / "gt.json")) {
    gt = load_ground_truth_json(manifest.base_dir / "gt.json");
  }
  PipelineResult result = run_pipeline(manifest, out_dir, gt ? &*gt : nullptr);
  std::cout << manifest_path << ": t_star=" << result.segmentation.t_star;
  if (result.metrics) {
    std::cout << " mpjpe=" << result.metrics->mpjpe_mm << "mm"
              << " mrpe=" << result.metrics->mrpe_mm << "mm"
              << " iv_mean=" << result.metrics->iv_mean_cm3 << "cm3"
              << " id_max=" << result.metrics->id_max_mm << "mm"
              << " jm=" << result.metrics->jm_mm_s3 << "mm/s3";
  }
  std::cout << " -> " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hand-object manipulation trajectory fitting"};
  app.require_subcommand(1);

  std::string manifest_path, out_dir_str, gt_path, completion_out;
  int frame = -1;
  ConfigFlags flags;

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic grasp sequence bundle");
  SynthSpec spec;
  std::string primitive = "sphere", motion = "lift";
  synth->add_option("--seed", spec.seed, "RNG seed (fixes every output bit)");
  synth->add_option("--primitive", primitive, "sphere|box|composite");
  synth->add_option("--motion", motion, "lift|rotate|both");
  synth->add_option("--approach-frames", spec.approach_frames, "approach length");
  synth->add_option("--interaction-frames", spec.interaction_frames, "interaction length");
  synth->add_option("--pose-jitter", spec.pose_jitter_m, "object pose jitter, meters");
  synth->add_option("--pose-jitter-deg", spec.pose_jitter_rad, "object pose jitter, degrees")
      ->transform(CLI::Validator(
          [](std::string& s) {
            s = std::to_string(deg_to_rad(std::stod(s)));
            return std::string();
          },
          "DEG"));
  synth->add_option("--depth-offset-min", spec.depth_offset_min_m,
                    "wrist depth error band minimum, meters");
  synth->add_option("--depth-offset-max", spec.depth_offset_max_m,
                    "wrist depth error band maximum, meters");
  synth->add_option("--fps", spec.fps, "frame rate");
  synth->add_option("--image-size", spec.image_size, "square image resolution");
  synth->add_option("--out", out_dir_str, "output directory")->required();

  // segment
  auto* segment = app.add_subcommand("segment", "detect the grasp frame t*");
  segment->add_option("manifest", manifest_path)->required();
  flags.add_to(segment);

  // filter
  auto* filter = app.add_subcommand("filter",
                                    "stationary average + one-euro smooth the object poses");
  filter->add_option("manifest", manifest_path)->required();
  filter->add_option("--out", out_dir_str, "output trajectory JSON");
  flags.add_to(filter);

  // contacts
  auto* contacts_cmd = app.add_subcommand("contacts", "match 2D-3D contact correspondences");
  contacts_cmd->add_option("manifest", manifest_path)->required();
  contacts_cmd->add_option("--frame", frame, "single frame (default: whole interaction stage)");
  contacts_cmd->add_option("--out", out_dir_str, "output JSON path");
  flags.add_to(contacts_cmd);

  // backproject
  auto* backproject_cmd =
      app.add_subcommand("backproject", "depth frame to world point cloud (PLY)");
  backproject_cmd->add_option("manifest", manifest_path)->required();
  backproject_cmd->add_option("--frame", frame, "frame index")->required();
  backproject_cmd->add_option("--out", out_dir_str, "output PLY path")->required();

  // optimize-interaction / optimize-grasp / run
  auto* opt_inter = app.add_subcommand("optimize-interaction",
                                       "optimize the interaction stage only");
  opt_inter->add_option("manifest", manifest_path)->required();
  opt_inter->add_option("--out", out_dir_str, "output directory");
  flags.add_to(opt_inter);

  auto* opt_grasp = app.add_subcommand(
      "optimize-grasp", "re-anchor, complete, and optimize the grasping stage "
                        "(runs the interaction stage first for the boundary)");
  opt_grasp->add_option("manifest", manifest_path)->required();
  opt_grasp->add_option("--out", out_dir_str, "output directory");
  flags.add_to(opt_grasp);

  std::vector<std::string> run_manifests;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "full two-stage pipeline");
  run->add_option("manifests", run_manifests, "one or more manifest JSON files")->required();
  run->add_option("--out", out_dir_str, "output directory (per-sequence subdirs when several)");
  run->add_option("--gt", gt_path, "ground-truth JSON for evaluation");
  run->add_option("--jobs", jobs, "sequences processed in parallel");
  flags.add_to(run);

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "metric suite against ground truth");
  evaluate_cmd->add_option("manifest", manifest_path)->required();
  std::string result_path;
  evaluate_cmd->add_option("--result", result_path, "hand_result.json from a run")->required();
  evaluate_cmd->add_option("--gt", gt_path, "ground truth JSON")->required();
  evaluate_cmd->add_option("--out", out_dir_str, "output directory");
  flags.add_to(evaluate_cmd);

  // report
  auto* report_cmd = app.add_subcommand("report", "re-export run artifacts");
  std::string run_dir, format = "csv";
  report_cmd->add_option("run_dir", run_dir, "finished run directory")->required();
  report_cmd->add_option("--format", format, "csv|json|svg");
  report_cmd->add_option("--out", out_dir_str, "output directory");

  CLI11_PARSE(app, argc, argv);

  const fs::path out_dir = out_dir_str.empty() ? default_output_dir() : fs::path(out_dir_str);

  try {
    if (synth->parsed()) {
      if (primitive == "box") spec.primitive = SynthSpec::Primitive::Box;
      else if (primitive == "composite") spec.primitive = SynthSpec::Primitive::Composite;
      else if (primitive != "sphere") throw ManifestError("unknown primitive: " + primitive);
      if (motion == "rotate") spec.motion = SynthSpec::Motion::Rotate;
      else if (motion == "both") spec.motion = SynthSpec::Motion::Both;
      else if (motion != "lift") throw ManifestError("unknown motion: " + motion);
      auto path = write_synthetic_sequence(spec, out_dir);
      std::cout << "wrote " << path.string() << "\n";
      return 0;
    }

    if (segment->parsed()) {
      StageInputs in = StageInputs::load(manifest_path, flags);
      std::cout << "t_star=" << in.segmentation.t_star;
      if (in.segmentation.t_star_translation)
        std::cout << " translation_onset=" << *in.segmentation.t_star_translation;
      if (in.segmentation.t_star_rotation)
        std::cout << " rotation_onset=" << *in.segmentation.t_star_rotation;
      std::cout << "\n";
      return 0;
    }

    if (filter->parsed()) {
      StageInputs in = StageInputs::load(manifest_path, flags);
      fs::path out = out_dir_str.empty() ? fs::path("object_filtered.json")
                                         : fs::path(out_dir_str);
      save_trajectory_json(in.filtered, out);
      std::cout << "wrote " << out.string() << " (t_star=" << in.segmentation.t_star << ")\n";
      return 0;
    }

    if (contacts_cmd->parsed()) {
      StageInputs in = StageInputs::load(manifest_path, flags);
      MeshSdf sdf(in.object);
      std::vector<ContactSet> sets;
      const int T = in.manifest.frame_count();
      for (int t = in.segmentation.t_star + 1; t < T; ++t) {
        if (frame >= 0 && t != frame) continue;
        const FrameRecord& rec = in.manifest.frames[t];
        if (!rec.hand_visible) continue;
        PosedHand hand = forward_hand(in.model, rec.hand_theta, in.manifest.beta, rec.hand_tau);
        sets.push_back(match_contacts(hand, in.model, sdf, in.filtered.poses[t], rec.camera, t));
      }
      fs::path out = out_dir_str.empty() ? fs::path("contacts.json") : fs::path(out_dir_str);
      save_contacts_json(sets, out);
      std::cout << "wrote " << out.string() << " (" << sets.size() << " frames)\n";
      return 0;
    }

    if (backproject_cmd->parsed()) {
      SequenceManifest manifest = load_manifest(manifest_path);
      if (frame < 0 || frame >= manifest.frame_count()) {
        throw ManifestError("frame index out of range");
      }
      const FrameRecord& rec = manifest.frames[frame];
      if (!rec.depth_file) throw ManifestError("frame has no depth file");
      DepthFrame depth = load_depth(manifest.resolve(*rec.depth_file));
      auto cloud = backproject_depth(depth, rec.camera);
      save_point_cloud_ply(cloud, out_dir_str);
      std::cout << "wrote " << out_dir_str << " (" << cloud.size() << " points)\n";
      return 0;
    }

    if (opt_inter->parsed() || opt_grasp->parsed() ) {
      // The grasp stage consumes the interaction boundary, so both
      // subcommands run the pipeline; the interaction-only variant simply
      // stops after the first stage by zeroing the grasp step budget.
      SequenceManifest manifest = load_with_flags(manifest_path, flags);
      if (opt_inter->parsed()) manifest.config.optim.grasp_steps = 1;
      PipelineResult result = run_pipeline(manifest, out_dir, nullptr);
      std::cout << "t_star=" << result.segmentation.t_star
                << " interaction_loss=" << result.interaction.final_loss
                << (opt_grasp->parsed()
                        ? " grasp_loss=" + std::to_string(result.grasp.final_loss)
                        : std::string())
                << " -> " << out_dir.string() << "\n";
      return 0;
    }

    if (run->parsed()) {
      if (run_manifests.size() == 1) {
        return run_sequence(run_manifests[0], flags, out_dir, gt_path);
      }
      // Sequences are independent; process them in parallel.
      std::vector<std::future<int>> futures;
      size_t next = 0;
      int rc = 0;
      while (next < run_manifests.size() || !futures.empty()) {
        while (next < run_manifests.size() &&
               futures.size() < static_cast<size_t>(std::max(1, jobs))) {
          const std::string path = run_manifests[next];
          const fs::path seq_out = out_dir / fs::path(path).parent_path().filename();
          futures.push_back(std::async(std::launch::async, run_sequence, path, flags,
                                       seq_out, gt_path));
          ++next;
        }
        rc = std::max(rc, futures.front().get());
        futures.erase(futures.begin());
      }
      return rc;
    }

    if (evaluate_cmd->parsed()) {
      SequenceManifest manifest = load_with_flags(manifest_path, flags);
      HandModelDef model = load_hand_model(manifest.resolve(manifest.hand_model_file));
      HandSequence prediction = load_hand_sequence_json(result_path);
      GroundTruth gt = load_ground_truth_json(gt_path);
      int t_star = manifest.grasp_frame
                       ? *manifest.grasp_frame
                       : detect_grasp_frame(manifest.object_trajectory(),
                                            manifest.config.segmentation).t_star;
      MetricsReport report = evaluate_sequence(manifest, model, prediction, gt, t_star);
      fs::create_directories(out_dir);
      save_metrics_csv({report}, out_dir / "metrics.csv");
      save_metrics_json(report, out_dir / "metrics.json");
      std::cout << "mpjpe=" << report.mpjpe_mm << "mm mrpe=" << report.mrpe_mm
                << "mm iv_mean=" << report.iv_mean_cm3 << "cm3 iv_max=" << report.iv_max_cm3
                << "cm3 id_mean=" << report.id_mean_mm << "mm id_max=" << report.id_max_mm
                << "mm jm=" << report.jm_mm_s3 << "mm/s3 -> " << out_dir.string() << "\n";
      return 0;
    }

    if (report_cmd->parsed()) {
      export_report(run_dir, parse_report_format(format), out_dir);
      std::cout << "wrote " << format << " report to " << out_dir.string() << "\n";
      return 0;
    }
  } catch (const ManifestError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const StageError& e) {
    std::cerr << e.what() << "\n";
    return kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
  return 0;
}
