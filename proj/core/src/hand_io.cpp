#include "hoifit/hand_io.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hoifit {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& why) {
  throw std::runtime_error(path.string() + ": " + why);
}

json vec3_array(const std::vector<Vec3>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back({x.x(), x.y(), x.z()});
  return arr;
}

std::vector<Vec3> parse_vec3_array(const json& arr) {
  std::vector<Vec3> out;
  out.reserve(arr.size());
  for (const auto& e : arr) out.push_back(Vec3(e[0], e[1], e[2]));
  return out;
}

struct ArrayLayout {
  std::string dtype;
  std::vector<size_t> shape;
  size_t byte_offset = 0;

  size_t elements() const {
    size_t n = 1;
    for (size_t s : shape) n *= s;
    return n;
  }
  size_t bytes() const { return elements() * (dtype == "float64" ? 8 : 4); }
};

json layout_json(const ArrayLayout& l) {
  return json{{"dtype", l.dtype}, {"shape", l.shape}, {"byte_offset", l.byte_offset}};
}

ArrayLayout parse_layout(const json& j) {
  ArrayLayout l;
  l.dtype = j.at("dtype").get<std::string>();
  l.shape = j.at("shape").get<std::vector<size_t>>();
  l.byte_offset = j.at("byte_offset").get<size_t>();
  if (l.dtype != "float64" && l.dtype != "int32") {
    throw std::runtime_error("hand model: unsupported dtype " + l.dtype);
  }
  return l;
}

}  // namespace

void save_hand_model(const HandModelDef& model, const std::filesystem::path& json_path) {
  const size_t N = model.template_vertices.size();
  const size_t J = model.parents.size();
  const size_t F = model.faces.size();
  const size_t S = model.shape_basis.size();

  ArrayLayout verts{"float64", {N, 3}, 0};
  ArrayLayout faces{"int32", {F, 3}, verts.byte_offset + verts.bytes()};
  ArrayLayout weights{"float64", {N, J}, faces.byte_offset + faces.bytes()};
  ArrayLayout basis{"float64", {S, N, 3}, weights.byte_offset + weights.bytes()};

  auto bin_path = json_path;
  bin_path.replace_extension(".bin");

  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) fail(bin_path, "cannot open for writing");
  for (const auto& v : model.template_vertices) {
    double xyz[3] = {v.x(), v.y(), v.z()};
    bin.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
  }
  for (const auto& f : model.faces) {
    int32_t idx[3] = {f[0], f[1], f[2]};
    bin.write(reinterpret_cast<const char*>(idx), sizeof(idx));
  }
  bin.write(reinterpret_cast<const char*>(model.skin_weights.data()),
            static_cast<std::streamsize>(model.skin_weights.size() * sizeof(double)));
  for (const auto& mode : model.shape_basis) {
    for (const auto& v : mode) {
      double xyz[3] = {v.x(), v.y(), v.z()};
      bin.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
  }
  if (!bin) fail(bin_path, "write failed");
  bin.close();

  json header;
  header["schema_version"] = 1;
  header["binary_file"] = bin_path.filename().string();
  header["joint_parents"] = model.parents;
  header["joint_offsets"] = vec3_array(model.joint_offsets);
  header["contact_candidates"] = model.contact_candidates;
  header["fingertip_joints"] = model.fingertip_joints;
  header["palm_joints"] = model.palm_joints;
  header["arrays"] = json{{"template_vertices", layout_json(verts)},
                          {"faces", layout_json(faces)},
                          {"skin_weights", layout_json(weights)},
                          {"shape_basis", layout_json(basis)}};

  std::ofstream out(json_path);
  if (!out) fail(json_path, "cannot open for writing");
  out << header.dump(2) << "\n";
}

HandModelDef load_hand_model(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) fail(json_path, "cannot open");
  json header = json::parse(in);

  HandModelDef model;
  model.parents = header.at("joint_parents").get<std::vector<int>>();
  model.joint_offsets = parse_vec3_array(header.at("joint_offsets"));
  model.contact_candidates = header.at("contact_candidates").get<std::vector<int>>();
  model.fingertip_joints = header.at("fingertip_joints").get<std::vector<int>>();
  if (header.contains("palm_joints")) {
    model.palm_joints = header.at("palm_joints").get<std::vector<int>>();
  }

  auto bin_path = json_path.parent_path() / header.at("binary_file").get<std::string>();
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) fail(bin_path, "cannot open hand model sidecar");

  const auto& arrays = header.at("arrays");
  auto verts = parse_layout(arrays.at("template_vertices"));
  auto faces = parse_layout(arrays.at("faces"));
  auto weights = parse_layout(arrays.at("skin_weights"));
  auto basis = parse_layout(arrays.at("shape_basis"));

  auto read_block = [&](const ArrayLayout& l, void* dst) {
    bin.seekg(static_cast<std::streamoff>(l.byte_offset));
    bin.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(l.bytes()));
    if (!bin) fail(bin_path, "truncated hand model sidecar");
  };

  const size_t N = verts.shape[0];
  std::vector<double> vbuf(N * 3);
  read_block(verts, vbuf.data());
  model.template_vertices.resize(N);
  for (size_t i = 0; i < N; ++i) {
    model.template_vertices[i] = Vec3(vbuf[3 * i], vbuf[3 * i + 1], vbuf[3 * i + 2]);
  }

  const size_t F = faces.shape[0];
  std::vector<int32_t> fbuf(F * 3);
  read_block(faces, fbuf.data());
  model.faces.resize(F);
  for (size_t i = 0; i < F; ++i) {
    model.faces[i] = {fbuf[3 * i], fbuf[3 * i + 1], fbuf[3 * i + 2]};
  }

  model.skin_weights.resize(weights.elements());
  read_block(weights, model.skin_weights.data());

  const size_t S = basis.shape[0];
  std::vector<double> bbuf(basis.elements());
  read_block(basis, bbuf.data());
  model.shape_basis.assign(S, std::vector<Vec3>(N));
  for (size_t s = 0; s < S; ++s) {
    for (size_t i = 0; i < N; ++i) {
      size_t o = (s * N + i) * 3;
      model.shape_basis[s][i] = Vec3(bbuf[o], bbuf[o + 1], bbuf[o + 2]);
    }
  }

  model.validate();
  return model;
}

}  // namespace hoifit
