#include "hoifit/mesh_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hoifit {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& why) {
  throw std::runtime_error(path.string() + ": " + why);
}

}  // namespace

TriMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  TriMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      ss >> v.x() >> v.y() >> v.z();
      if (!ss && !ss.eof()) fail(path, "malformed vertex line");
      mesh.vertices.push_back(v);
      double r, g, b;
      if (ss >> r >> g >> b) mesh.colors.push_back(Vec3(r, g, b));
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        // "i", "i/t", "i//n", "i/t/n" — the leading integer is the position.
        idx.push_back(std::stoi(tok.substr(0, tok.find('/'))));
      }
      if (idx.size() != 3) fail(path, "non-triangle face (triangles only)");
      FaceIndices f;
      for (int k = 0; k < 3; ++k) {
        int i = idx[k];
        f[k] = i > 0 ? i - 1 : static_cast<int>(mesh.vertices.size()) + i;
      }
      mesh.faces.push_back(f);
    }
  }
  if (mesh.colors.size() != mesh.vertices.size()) mesh.colors.clear();
  validate_face_indices(mesh);
  return mesh;
}

void save_obj(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  out.precision(17);
  const bool colors = mesh.has_colors();
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& v = mesh.vertices[i];
    out << "v " << v.x() << " " << v.y() << " " << v.z();
    if (colors) {
      const Vec3& c = mesh.colors[i];
      out << " " << c.x() << " " << c.y() << " " << c.z();
    }
    out << "\n";
  }
  for (const auto& f : mesh.faces) {
    out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  }
  if (!out) fail(path, "write failed");
}

namespace {

struct PlyProperty {
  std::string type;
  std::string name;
};

size_t scalar_size(const std::string& type) {
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
  if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
  if (type == "int" || type == "uint" || type == "int32" || type == "uint32" ||
      type == "float" || type == "float32") return 4;
  if (type == "double" || type == "float64") return 8;
  throw std::runtime_error("unsupported PLY scalar type: " + type);
}

double read_scalar(std::ifstream& in, const std::string& type) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), scalar_size(type));
  if (type == "float" || type == "float32") {
    float f;
    std::memcpy(&f, buf, 4);
    return f;
  }
  if (type == "double" || type == "float64") {
    double d;
    std::memcpy(&d, buf, 8);
    return d;
  }
  if (type == "uchar" || type == "uint8") return buf[0];
  if (type == "char" || type == "int8") return static_cast<int8_t>(buf[0]);
  if (type == "int" || type == "int32") {
    int32_t i;
    std::memcpy(&i, buf, 4);
    return i;
  }
  if (type == "uint" || type == "uint32") {
    uint32_t i;
    std::memcpy(&i, buf, 4);
    return i;
  }
  if (type == "short" || type == "int16") {
    int16_t i;
    std::memcpy(&i, buf, 2);
    return i;
  }
  uint16_t i;
  std::memcpy(&i, buf, 2);
  return i;
}

}  // namespace

TriMesh load_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  std::string line;
  std::getline(in, line);
  if (line.rfind("ply", 0) != 0) fail(path, "not a PLY file");

  size_t vertex_count = 0, face_count = 0;
  std::vector<PlyProperty> vertex_props;
  std::string face_count_type = "uchar", face_index_type = "int";
  bool binary_le = false;
  std::string current_element;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "format") {
      std::string fmt;
      ss >> fmt;
      binary_le = (fmt == "binary_little_endian");
      if (!binary_le) fail(path, "only binary_little_endian PLY is supported");
    } else if (tag == "element") {
      std::string name;
      size_t count;
      ss >> name >> count;
      current_element = name;
      if (name == "vertex") vertex_count = count;
      else if (name == "face") face_count = count;
    } else if (tag == "property") {
      std::string type;
      ss >> type;
      if (type == "list") {
        ss >> face_count_type >> face_index_type;
      } else if (current_element == "vertex") {
        PlyProperty p;
        p.type = type;
        ss >> p.name;
        vertex_props.push_back(p);
      }
    } else if (tag == "end_header") {
      break;
    }
  }

  TriMesh mesh;
  mesh.vertices.resize(vertex_count);
  bool has_color = false;
  for (const auto& p : vertex_props) {
    if (p.name == "red") has_color = true;
  }
  if (has_color) mesh.colors.resize(vertex_count);

  for (size_t i = 0; i < vertex_count; ++i) {
    for (const auto& p : vertex_props) {
      double value = read_scalar(in, p.type);
      if (p.name == "x") mesh.vertices[i].x() = value;
      else if (p.name == "y") mesh.vertices[i].y() = value;
      else if (p.name == "z") mesh.vertices[i].z() = value;
      else if (has_color && p.name == "red") mesh.colors[i].x() = value / 255.0;
      else if (has_color && p.name == "green") mesh.colors[i].y() = value / 255.0;
      else if (has_color && p.name == "blue") mesh.colors[i].z() = value / 255.0;
    }
  }
  for (size_t i = 0; i < face_count; ++i) {
    int n = static_cast<int>(read_scalar(in, face_count_type));
    if (n != 3) fail(path, "non-triangle face (triangles only)");
    FaceIndices f;
    for (int k = 0; k < 3; ++k) f[k] = static_cast<int>(read_scalar(in, face_index_type));
    mesh.faces.push_back(f);
  }
  if (!in) fail(path, "truncated PLY payload");
  validate_face_indices(mesh);
  return mesh;
}

void save_ply(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  const bool colors = mesh.has_colors();
  out << "ply\nformat binary_little_endian 1.0\n";
  out << "element vertex " << mesh.vertices.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  if (colors) {
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  }
  out << "element face " << mesh.faces.size() << "\n";
  out << "property list uchar int vertex_indices\nend_header\n";
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    double xyz[3] = {mesh.vertices[i].x(), mesh.vertices[i].y(), mesh.vertices[i].z()};
    out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    if (colors) {
      auto to_byte = [](double c) {
        return static_cast<unsigned char>(std::min(255.0, std::max(0.0, c * 255.0 + 0.5)));
      };
      unsigned char rgb[3] = {to_byte(mesh.colors[i].x()), to_byte(mesh.colors[i].y()),
                              to_byte(mesh.colors[i].z())};
      out.write(reinterpret_cast<const char*>(rgb), 3);
    }
  }
  for (const auto& f : mesh.faces) {
    unsigned char n = 3;
    out.write(reinterpret_cast<const char*>(&n), 1);
    int32_t idx[3] = {f[0], f[1], f[2]};
    out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
  }
  if (!out) fail(path, "write failed");
}

void save_point_cloud_ply(const std::vector<Vec3>& points,
                          const std::filesystem::path& path) {
  TriMesh cloud;
  cloud.vertices = points;
  save_ply(cloud, path);
}

TriMesh load_mesh(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".obj") return load_obj(path);
  if (ext == ".ply") return load_ply(path);
  fail(path, "unsupported mesh format (expected .obj or .ply)");
}

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".obj") return save_obj(mesh, path);
  if (ext == ".ply") return save_ply(mesh, path);
  fail(path, "unsupported mesh format (expected .obj or .ply)");
}

}  // namespace hoifit
