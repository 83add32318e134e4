#include "hoifit/hand_synthetic.hpp"

#include <cmath>

namespace hoifit {

namespace {

constexpr int kFingerSides = 11;
constexpr int kFingerCircles = 11;

struct FingerSpec {
  Vec3 root;           // knuckle position on the palm
  Vec3 direction;      // unit rest direction
  double lengths[3];   // proximal, middle, distal phalanx
  double base_radius;
  double tip_radius;
};

// Stations along the finger, denser near the tip so the candidate circles
// hug the pad region.
constexpr double kStations[kFingerCircles] = {
    0.0, 0.12, 0.26, 0.40, 0.54, 0.66, 0.76, 0.85, 0.92, 0.97, 1.0};

struct Builder {
  HandModelDef model;

  int add_vertex(const Vec3& v, const std::vector<std::pair<int, double>>& weights) {
    model.template_vertices.push_back(v);
    weight_rows.push_back(weights);
    return static_cast<int>(model.template_vertices.size()) - 1;
  }

  std::vector<std::vector<std::pair<int, double>>> weight_rows;
};

// Two-joint blend keeps weight rows summing to one exactly.
std::vector<std::pair<int, double>> station_weights(double s, double j1, double j2,
                                                    int prox, int mid, int dist) {
  constexpr double kBlend = 0.10;  // transition half-width as a station fraction
  auto ramp = [](double x) { return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x); };
  if (s < j1 + kBlend) {
    double w = ramp((s - (j1 - kBlend)) / (2.0 * kBlend));
    if (w <= 0.0) return {{prox, 1.0}};
    return {{prox, 1.0 - w}, {mid, w}};
  }
  double w = ramp((s - (j2 - kBlend)) / (2.0 * kBlend));
  if (w <= 0.0) return {{mid, 1.0}};
  if (w >= 1.0) return {{dist, 1.0}};
  return {{mid, 1.0 - w}, {dist, w}};
}

void build_finger(Builder& b, const FingerSpec& spec, int prox_joint,
                  std::vector<int>& candidates, std::vector<int>& apices) {
  const double total = spec.lengths[0] + spec.lengths[1] + spec.lengths[2];
  const double j1 = spec.lengths[0] / total;
  const double j2 = (spec.lengths[0] + spec.lengths[1]) / total;
  const int mid_joint = prox_joint + 1;
  const int dist_joint = prox_joint + 2;

  const Vec3 dir = spec.direction.normalized();
  Vec3 side = dir.cross(Vec3(0, 0, 1));
  if (side.norm() < 1e-6) side = Vec3(1, 0, 0);
  side.normalize();
  const Vec3 up = side.cross(dir);

  std::vector<std::vector<int>> circles(kFingerCircles);
  for (int c = 0; c < kFingerCircles; ++c) {
    double s = kStations[c];
    double radius = spec.base_radius + (spec.tip_radius - spec.base_radius) * s;
    if (c >= kFingerCircles - 2) radius *= (c == kFingerCircles - 1) ? 0.55 : 0.85;
    Vec3 center = spec.root + s * total * dir;
    auto weights = station_weights(s, j1, j2, prox_joint, mid_joint, dist_joint);
    for (int k = 0; k < kFingerSides; ++k) {
      double a = 2.0 * kPi * k / kFingerSides;
      Vec3 v = center + radius * (std::cos(a) * side + std::sin(a) * up);
      circles[c].push_back(b.add_vertex(v, weights));
    }
  }

  // Tip apex, slightly past the last circle.
  int apex = b.add_vertex(spec.root + (total + 0.6 * spec.tip_radius) * dir,
                          {{dist_joint, 1.0}});
  // Base cap center (buried in the palm).
  int base_center = b.add_vertex(spec.root, {{prox_joint, 1.0}});

  auto& faces = b.model.faces;
  for (int c = 0; c + 1 < kFingerCircles; ++c) {
    for (int k = 0; k < kFingerSides; ++k) {
      int k1 = (k + 1) % kFingerSides;
      faces.push_back({circles[c][k], circles[c][k1], circles[c + 1][k1]});
      faces.push_back({circles[c][k], circles[c + 1][k1], circles[c + 1][k]});
    }
  }
  for (int k = 0; k < kFingerSides; ++k) {
    int k1 = (k + 1) % kFingerSides;
    faces.push_back({apex, circles[kFingerCircles - 1][k], circles[kFingerCircles - 1][k1]});
    faces.push_back({base_center, circles[0][k1], circles[0][k]});
  }

  // 23 candidates per finger: the nail-side strip of the last circles, whose
  // outward normals cluster around the back-of-tip direction (k indexes the
  // cross-section angle; sin(2 pi k / 11) peaks at k = 2, 3).
  for (int c = kFingerCircles - 1; c >= kFingerCircles - 5; --c) {
    for (int k = 1; k <= 4; ++k) candidates.push_back(circles[c][k]);
  }
  candidates.push_back(circles[kFingerCircles - 6][2]);
  candidates.push_back(circles[kFingerCircles - 6][3]);
  candidates.push_back(circles[kFingerCircles - 7][3]);
  apices.push_back(apex);
}

void build_palm(Builder& b) {
  // Subdivided slab: top (+z) and bottom (-z) grids plus stitched side walls.
  constexpr int nx = 8, ny = 9;
  const double x0 = -0.040, x1 = 0.040;
  const double y0 = -0.012, y1 = 0.092;
  const double z_top = 0.011, z_bot = -0.011;

  int top[nx + 1][ny + 1];
  int bot[nx + 1][ny + 1];
  for (int i = 0; i <= nx; ++i) {
    for (int j = 0; j <= ny; ++j) {
      double x = x0 + (x1 - x0) * i / nx;
      double y = y0 + (y1 - y0) * j / ny;
      // Taper the palm slightly toward the wrist.
      double squeeze = 1.0 - 0.25 * (y1 - y) / (y1 - y0);
      top[i][j] = b.add_vertex(Vec3(x * squeeze, y, z_top), {{0, 1.0}});
      bot[i][j] = b.add_vertex(Vec3(x * squeeze, y, z_bot), {{0, 1.0}});
    }
  }
  auto& faces = b.model.faces;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      faces.push_back({top[i][j], top[i + 1][j], top[i + 1][j + 1]});
      faces.push_back({top[i][j], top[i + 1][j + 1], top[i][j + 1]});
      faces.push_back({bot[i][j], bot[i + 1][j + 1], bot[i + 1][j]});
      faces.push_back({bot[i][j], bot[i][j + 1], bot[i + 1][j + 1]});
    }
  }
  for (int i = 0; i < nx; ++i) {
    faces.push_back({top[i][0], bot[i][0], bot[i + 1][0]});
    faces.push_back({top[i][0], bot[i + 1][0], top[i + 1][0]});
    faces.push_back({top[i][ny], bot[i + 1][ny], bot[i][ny]});
    faces.push_back({top[i][ny], top[i + 1][ny], bot[i + 1][ny]});
  }
  for (int j = 0; j < ny; ++j) {
    faces.push_back({top[0][j], bot[0][j + 1], bot[0][j]});
    faces.push_back({top[0][j], top[0][j + 1], bot[0][j + 1]});
    faces.push_back({top[nx][j], bot[nx][j], bot[nx][j + 1]});
    faces.push_back({top[nx][j], bot[nx][j + 1], top[nx][j + 1]});
  }
}

struct BuiltHand {
  HandModelDef model;
  std::array<int, 5> apices{};
};

}  // namespace

const std::vector<int>& synthetic_finger_roots() {
  static const std::vector<int> roots = {1, 4, 7, 10, 13};
  return roots;
}

namespace {

BuiltHand build_synthetic_hand() {
  Builder b;
  auto& model = b.model;

  const FingerSpec fingers[5] = {
      // thumb: attached at the palm edge, angled outward and slightly down
      {{0.042, 0.020, -0.004}, Vec3(0.76, 0.62, -0.20), {0.034, 0.028, 0.024}, 0.0095, 0.0052},
      // index
      {{0.028, 0.090, 0.0}, Vec3(0.04, 1.0, 0.0), {0.036, 0.024, 0.021}, 0.0078, 0.0044},
      // middle
      {{0.009, 0.092, 0.0}, Vec3(0.0, 1.0, 0.0), {0.040, 0.027, 0.022}, 0.0080, 0.0045},
      // ring
      {{-0.010, 0.090, 0.0}, Vec3(-0.03, 1.0, 0.0), {0.036, 0.025, 0.021}, 0.0076, 0.0043},
      // pinky
      {{-0.028, 0.085, 0.0}, Vec3(-0.08, 1.0, 0.0), {0.028, 0.019, 0.017}, 0.0066, 0.0038},
  };

  // Skeleton: wrist root, then depth-first chains of 3 per finger.
  model.parents = {-1};
  model.joint_offsets = {Vec3::Zero()};
  for (int f = 0; f < 5; ++f) {
    const auto& spec = fingers[f];
    const Vec3 dir = spec.direction.normalized();
    int prox = static_cast<int>(model.parents.size());
    model.parents.push_back(0);
    model.joint_offsets.push_back(spec.root);
    model.parents.push_back(prox);
    model.joint_offsets.push_back(spec.lengths[0] * dir);
    model.parents.push_back(prox + 1);
    model.joint_offsets.push_back(spec.lengths[1] * dir);
  }
  model.fingertip_joints = {3, 6, 9, 12, 15};
  model.palm_joints = {4, 7, 10, 13};

  build_palm(b);
  std::vector<int> apices;
  for (int f = 0; f < 5; ++f) {
    build_finger(b, fingers[f], synthetic_finger_roots()[f], model.contact_candidates,
                 apices);
  }

  // Densify the sparse per-vertex weights into the row-major table.
  const int N = model.vertex_count();
  const int J = model.joint_count();
  model.skin_weights.assign(static_cast<size_t>(N) * J, 0.0);
  for (int i = 0; i < N; ++i) {
    for (const auto& [joint, w] : b.weight_rows[i]) {
      model.skin_weights[static_cast<size_t>(i) * J + joint] = w;
    }
  }

  // Shape basis: four global modes plus per-finger radial inflation, plus a
  // palm thickness mode. All displacements are linear in beta.
  model.shape_basis.assign(kShapeDim, std::vector<Vec3>(N, Vec3::Zero()));
  const auto rest = model.rest_joints();
  for (int i = 0; i < N; ++i) {
    const Vec3& v = model.template_vertices[i];
    model.shape_basis[0][i] = 0.10 * v;                       // overall scale
    model.shape_basis[1][i] = Vec3(0, 0.12 * std::max(0.0, v.y() - 0.085), 0);  // finger length
    model.shape_basis[2][i] = Vec3(0.10 * v.x(), 0, 0);       // width
    model.shape_basis[3][i] = Vec3(0, 0, 0.12 * v.z());       // thickness
  }
  for (int f = 0; f < 5; ++f) {
    int prox = synthetic_finger_roots()[f];
    const Vec3 root = rest[prox];
    const Vec3 dir = fingers[f].direction.normalized();
    for (int i = 0; i < N; ++i) {
      const Vec3& v = model.template_vertices[i];
      double along = (v - root).dot(dir);
      if (along < -0.005) continue;
      Vec3 radial = (v - root) - along * dir;
      if (radial.norm() > 0.015) continue;  // outside this finger's tube
      model.shape_basis[4 + f][i] = 0.25 * radial;
    }
  }
  for (int i = 0; i < N; ++i) {
    const Vec3& v = model.template_vertices[i];
    if (v.y() < 0.095 && std::abs(v.z()) <= 0.0115 && std::abs(v.x()) <= 0.042) {
      model.shape_basis[9][i] = Vec3(0, 0, 0.3 * v.z());  // palm thickness
    }
  }

  model.validate();
  BuiltHand built;
  built.model = std::move(model);
  for (int f = 0; f < 5; ++f) built.apices[f] = apices[f];
  return built;
}

const BuiltHand& cached_synthetic_hand() {
  static const BuiltHand built = build_synthetic_hand();
  return built;
}

}  // namespace

HandModelDef make_synthetic_hand() { return cached_synthetic_hand().model; }

const std::array<int, 5>& synthetic_tip_apices() { return cached_synthetic_hand().apices; }

VecX synthetic_curl_theta(const std::array<Vec3, 5>& per_finger_curl) {
  VecX theta = VecX::Zero(kThetaDim);
  // Curl axis: positive bend folds the finger toward the palm (-z). Fingers
  // point +y, so that is a rotation about -x for the four fingers. The thumb
  // proximal joint instead sweeps about +y mixed with a little flexion
  // (opposition, bringing the tip under the palm); its distal joints curl
  // about the axis perpendicular to the rest direction and the palm normal.
  const Vec3 thumb_dir = Vec3(0.76, 0.62, -0.20).normalized();
  const Vec3 thumb_curl_axis = thumb_dir.cross(Vec3(0, 0, -1)).normalized();
  const Vec3 thumb_opposition_axis = (Vec3(0, 1, 0) + 0.3 * thumb_curl_axis).normalized();
  for (int f = 0; f < 5; ++f) {
    int prox = synthetic_finger_roots()[f];
    for (int seg = 0; seg < 3; ++seg) {
      Vec3 axis = (f == 0) ? thumb_curl_axis : Vec3(-1, 0, 0);
      if (f == 0 && seg == 0) axis = thumb_opposition_axis;
      theta.segment<3>(3 * (prox + seg)) = per_finger_curl[f][seg] * axis;
    }
  }
  return theta;
}

}  // namespace hoifit
