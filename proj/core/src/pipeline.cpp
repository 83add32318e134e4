#include "hoifit/pipeline.hpp"

#include <fstream>

#include "hoifit/hand_io.hpp"
#include "hoifit/mesh_io.hpp"
#include "hoifit/report.hpp"

namespace hoifit {

namespace {

void write_stage_error(const std::filesystem::path& out_dir, const std::string& stage,
                       const std::string& what) {
  std::ofstream out(out_dir / "stage_error.txt");
  out << stage << "\n" << what << "\n";
}

void save_segmentation(const GraspSegmentation& seg, const std::filesystem::path& path) {
  nlohmann::json j{{"t_star", seg.t_star}};
  if (seg.t_star_translation) j["t_star_translation"] = *seg.t_star_translation;
  if (seg.t_star_rotation) j["t_star_rotation"] = *seg.t_star_rotation;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace

MetricsReport evaluate_sequence(const SequenceManifest& manifest,
                                const HandModelDef& model, const HandSequence& prediction,
                                const GroundTruth& gt, int t_star) {
  const int T = manifest.frame_count();
  MetricsReport report;
  report.iv_voxel_mm = manifest.config.iv_voxel_m * 1000.0;

  // Forward both parameter sets once.
  std::vector<std::vector<Vec3>> pred_joints(T), gt_joints(T);
  std::vector<Vec3> pred_wrist(T), gt_wrist(T);
  std::vector<TriMesh> pred_shells;                  // interaction frames only
  std::vector<std::vector<Vec3>> interaction_verts;
  std::vector<Pose6D> interaction_poses;
  for (int t = 0; t < T; ++t) {
    PosedHand pred = forward_hand(model, prediction.theta[t], prediction.beta,
                                  prediction.tau[t]);
    PosedHand truth = forward_hand(model, gt.hand.theta[t], gt.hand.beta, gt.hand.tau[t]);
    pred_joints[t] = pred.joints;
    gt_joints[t] = truth.joints;
    pred_wrist[t] = pred.joints[0];
    gt_wrist[t] = truth.joints[0];
    if (t > t_star) {
      TriMesh shell;
      shell.vertices = pred.vertices;
      shell.faces = model.faces;
      pred_shells.push_back(std::move(shell));
      interaction_poses.push_back(gt.object.poses[t]);
      interaction_verts.push_back(std::move(pred.vertices));
    }
  }

  const std::vector<int> visible = manifest.visible_frames();
  report.mpjpe_mm =
      mpjpe(pred_joints, gt_joints, visible, 0, &report.per_frame_mpjpe_mm);
  report.mpjpe_abs_mm = mpjpe_absolute(pred_joints, gt_joints, visible);
  report.mrpe_mm = mrpe(pred_wrist, gt_wrist, visible);

  TriMesh object = load_mesh(manifest.resolve(manifest.object_mesh_file));
  MeshSdf object_sdf(object);
  MeanMax iv = interpenetration_volume(pred_shells, object_sdf, interaction_poses,
                                       manifest.config.iv_voxel_m, &report.per_frame_iv_cm3);
  report.iv_mean_cm3 = iv.mean;
  report.iv_max_cm3 = iv.max;
  MeanMax id = interpenetration_depth(interaction_verts, object_sdf, interaction_poses,
                                      &report.per_frame_id_mm);
  report.id_mean_mm = id.mean;
  report.id_max_mm = id.max;

  std::vector<std::vector<Vec3>> interaction_joints(pred_joints.begin() + t_star + 1,
                                                    pred_joints.end());
  if (interaction_joints.size() >= 4) {
    report.jm_mm_s3 = jerk_magnitude(interaction_joints, manifest.fps);
  }
  return report;
}

PipelineResult run_pipeline(const SequenceManifest& manifest,
                            const std::filesystem::path& out_dir,
                            const GroundTruth* gt) {
  manifest.validate(true);
  std::filesystem::create_directories(out_dir);
  PipelineResult result;

  std::string stage = "load-inputs";
  try {
    const HandModelDef model = load_hand_model(manifest.resolve(manifest.hand_model_file));
    const TriMesh object = load_mesh(manifest.resolve(manifest.object_mesh_file));
    const MeshSdf object_sdf(object);
    const ObjectTrajectory raw = manifest.object_trajectory();
    const int T = manifest.frame_count();

    stage = "segment";
    if (manifest.grasp_frame) {
      result.segmentation.t_star = *manifest.grasp_frame;
    } else {
      result.segmentation = detect_grasp_frame(raw, manifest.config.segmentation);
    }
    const int t_star = result.segmentation.t_star;
    if (t_star + 1 >= T) throw std::runtime_error("no interaction frames after t_star");
    save_segmentation(result.segmentation, out_dir / "segmentation.json");

    stage = "filter";
    result.filtered = smooth_interaction_poses(raw, t_star, manifest.config.filter);
    save_trajectory_json(result.filtered, out_dir / "object_filtered.json");

    stage = "contacts";
    const int F = T - t_star - 1;  // interaction frame count
    std::vector<VecX> theta_init(F), theta_ref(F);
    std::vector<Vec3> tau_init(F);
    std::vector<Pose6D> poses(F);
    std::vector<CameraModel> cameras(F);
    for (int i = 0; i < F; ++i) {
      const FrameRecord& rec = manifest.frames[t_star + 1 + i];
      if (!rec.hand_visible) {
        throw std::runtime_error("interaction frame " + std::to_string(t_star + 1 + i) +
                                 " has no hand detection");
      }
      theta_init[i] = rec.hand_theta;
      theta_ref[i] = rec.hand_theta;
      tau_init[i] = rec.hand_tau;
      poses[i] = result.filtered.poses[t_star + 1 + i];
      cameras[i] = rec.camera;
    }
    result.contacts.resize(F);
    for (int i = 0; i < F; ++i) {
      PosedHand hand = forward_hand(model, theta_init[i], manifest.beta, tau_init[i]);
      result.contacts[i] =
          match_contacts(hand, model, object_sdf, poses[i], cameras[i], t_star + 1 + i);
    }
    save_contacts_json(result.contacts, out_dir / "contacts.json");

    stage = "optimize-interaction";
    HandParams interaction_init;
    interaction_init.theta = theta_init;
    interaction_init.tau = tau_init;
    interaction_init.beta = manifest.beta;
    result.interaction = optimize_interaction(model, interaction_init, theta_ref,
                                              object_sdf, poses, cameras,
                                              manifest.config.optim);
    save_loss_csv(result.interaction, out_dir / "interaction_loss.csv");
    if (result.interaction.diverged) {
      throw std::runtime_error("interaction optimization diverged (non-finite loss)");
    }

    stage = "reanchor";
    // Visible grasp-stage guidance; Eq.-10-style shift to the optimized
    // interaction start. The grasp frame itself must be visible.
    std::vector<int> vis_grasp;
    std::vector<VecX> theta_vis;
    std::vector<Vec3> tau_vis;
    for (int t = 0; t <= t_star; ++t) {
      if (manifest.frames[t].hand_visible) {
        vis_grasp.push_back(t);
        theta_vis.push_back(manifest.frames[t].hand_theta);
        tau_vis.push_back(manifest.frames[t].hand_tau);
      }
    }
    if (vis_grasp.empty() || vis_grasp.back() != t_star) {
      throw std::runtime_error("grasp frame t_star must have a hand detection");
    }
    tau_vis = reanchor_grasp_translations(tau_vis, result.interaction.tau.front());

    stage = "complete-motion";
    if (manifest.config.completion_file) {
      result.completion =
          load_completion_json(manifest.resolve(*manifest.config.completion_file));
      if (static_cast<int>(result.completion.theta.size()) != t_star + 1) {
        throw std::runtime_error("external completion frame count != t_star + 1");
      }
      validate_external_completion(result.completion, vis_grasp, theta_vis, tau_vis,
                                   manifest.config.completion_tolerance);
    } else {
      result.completion =
          complete_motion_interpolate(vis_grasp, theta_vis, tau_vis, t_star + 1);
    }
    save_completion_json(result.completion, out_dir / "completion.json");

    stage = "optimize-grasp";
    HandParams grasp_init;
    grasp_init.theta = result.completion.theta;
    grasp_init.tau = result.completion.tau;
    grasp_init.beta = manifest.beta;
    const Pose6D stationary = result.filtered.poses[0];
    result.grasp = optimize_grasp(model, grasp_init, result.completion.theta, object_sdf,
                                  stationary, result.interaction.theta.front(),
                                  result.interaction.tau.front(), manifest.config.optim);
    save_loss_csv(result.grasp, out_dir / "grasp_loss.csv");
    if (result.grasp.diverged) {
      throw std::runtime_error("grasp optimization diverged (non-finite loss)");
    }

    stage = "merge";
    result.final_hand.beta = manifest.beta;
    result.final_hand.visible.assign(T, true);
    result.final_hand.theta.resize(T);
    result.final_hand.tau.resize(T);
    for (int t = 0; t <= t_star; ++t) {
      result.final_hand.theta[t] = result.grasp.theta[t];
      result.final_hand.tau[t] = result.grasp.tau[t];
    }
    for (int i = 0; i < F; ++i) {
      result.final_hand.theta[t_star + 1 + i] = result.interaction.theta[i];
      result.final_hand.tau[t_star + 1 + i] = result.interaction.tau[i];
    }
    save_hand_sequence_json(result.final_hand, out_dir / "hand_result.json");

    stage = "report";
    write_loss_plot(result.interaction, out_dir / "interaction_loss.svg");
    write_loss_plot(result.grasp, out_dir / "grasp_loss.svg");
    write_wrist_depth_plot(manifest, model, result.final_hand,
                           gt ? &gt->hand : nullptr, out_dir / "wrist_depth.svg");

    if (gt) {
      stage = "evaluate";
      result.metrics = evaluate_sequence(manifest, model, result.final_hand, *gt, t_star);
      save_metrics_csv({*result.metrics}, out_dir / "metrics.csv");
      save_metrics_json(*result.metrics, out_dir / "metrics.json");
    }
  } catch (const std::exception& e) {
    write_stage_error(out_dir, stage, e.what());
    throw StageError(stage, e.what());
  }
  return result;
}

}  // namespace hoifit
