// SPDX-License-Identifier: Apache-2.0
#include "volcap/core/mesh_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace volcap {
namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(what + ": " + path.string());
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(path, "cannot open for reading");
  return in;
}

}  // namespace

void write_obj(const std::filesystem::path& path, const TriMesh& mesh) {
  auto out = open_out(path, false);
  out.precision(9);
  for (const auto& v : mesh.vertices)
    out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& n : mesh.normals)
    out << "vn " << n.x() << ' ' << n.y() << ' ' << n.z() << '\n';
  for (const auto& ch : mesh.channels) {
    out << "#channel " << ch.name << ' ' << ch.components << ' ' << mesh.vertex_count() << '\n';
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      out << "#c";
      for (int c = 0; c < ch.components; ++c)
        out << ' ' << ch.data[v * ch.components + c];
      out << '\n';
    }
  }
  const bool with_n = !mesh.normals.empty();
  for (const auto& t : mesh.triangles) {
    out << 'f';
    for (int i : t) {
      const int idx = i + 1;
      if (with_n)
        out << ' ' << idx << "//" << idx;
      else
        out << ' ' << idx;
    }
    out << '\n';
  }
  if (!out) fail(path, "obj write failed");
}

TriMesh read_obj(const std::filesystem::path& path) {
  auto in = open_in(path, false);
  TriMesh mesh;
  AttributeChannel* pending = nullptr;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      ss >> v.x() >> v.y() >> v.z();
      mesh.vertices.push_back(v);
    } else if (tag == "vn") {
      Vec3 n;
      ss >> n.x() >> n.y() >> n.z();
      mesh.normals.push_back(n);
    } else if (tag == "#channel") {
      std::string name;
      int comps = 0;
      std::size_t count = 0;
      ss >> name >> comps >> count;
      mesh.channels.push_back(AttributeChannel{name, comps, {}});
      mesh.channels.back().data.reserve(count * comps);
      pending = &mesh.channels.back();
    } else if (tag == "#c") {
      if (!pending) fail(path, "channel data before #channel header");
      float x;
      while (ss >> x) pending->data.push_back(x);
    } else if (tag == "f") {
      std::array<int, 3> t{};
      for (int i = 0; i < 3; ++i) {
        std::string corner;
        ss >> corner;
        t[i] = std::stoi(corner.substr(0, corner.find('/'))) - 1;
      }
      mesh.triangles.push_back(t);
    }
  }
  mesh.validate();
  return mesh;
}

void write_ply(const std::filesystem::path& path, const TriMesh& mesh) {
  auto out = open_out(path, true);
  const bool with_n = !mesh.normals.empty();
  out << "ply\nformat binary_little_endian 1.0\n";
  out << "element vertex " << mesh.vertex_count() << '\n';
  out << "property float x\nproperty float y\nproperty float z\n";
  if (with_n) out << "property float nx\nproperty float ny\nproperty float nz\n";
  for (const auto& ch : mesh.channels)
    for (int c = 0; c < ch.components; ++c)
      out << "property float " << ch.name << '_' << c << '\n';
  out << "element face " << mesh.triangle_count() << '\n';
  out << "property list uchar int vertex_indices\n";
  // channel directory, so reads restore names/components exactly
  for (const auto& ch : mesh.channels)
    out << "comment channel " << ch.name << ' ' << ch.components << '\n';
  out << "end_header\n";

  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    float buf[6];
    buf[0] = static_cast<float>(mesh.vertices[v].x());
    buf[1] = static_cast<float>(mesh.vertices[v].y());
    buf[2] = static_cast<float>(mesh.vertices[v].z());
    int n = 3;
    if (with_n) {
      buf[3] = static_cast<float>(mesh.normals[v].x());
      buf[4] = static_cast<float>(mesh.normals[v].y());
      buf[5] = static_cast<float>(mesh.normals[v].z());
      n = 6;
    }
    out.write(reinterpret_cast<const char*>(buf), n * sizeof(float));
    for (const auto& ch : mesh.channels)
      out.write(reinterpret_cast<const char*>(&ch.data[v * ch.components]),
                ch.components * sizeof(float));
  }
  for (const auto& t : mesh.triangles) {
    const std::uint8_t n = 3;
    out.write(reinterpret_cast<const char*>(&n), 1);
    const std::int32_t idx[3] = {t[0], t[1], t[2]};
    out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
  }
  if (!out) fail(path, "ply write failed");
}

TriMesh read_ply(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  std::string line;
  std::size_t n_vertices = 0, n_faces = 0;
  std::vector<std::string> vertex_props;
  std::vector<std::pair<std::string, int>> channel_dir;
  bool header_done = false;
  if (!std::getline(in, line) || line != "ply") fail(path, "not a ply file");
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt != "binary_little_endian") fail(path, "unsupported ply format " + fmt);
    } else if (tag == "element") {
      std::string what;
      std::size_t count;
      ss >> what >> count;
      if (what == "vertex") n_vertices = count;
      else if (what == "face") n_faces = count;
    } else if (tag == "property") {
      std::string type, name;
      ss >> type;
      if (type == "list") continue;
      ss >> name;
      vertex_props.push_back(name);
    } else if (tag == "comment") {
      std::string what, name;
      int comps;
      if (ss >> what && what == "channel" && ss >> name >> comps)
        channel_dir.emplace_back(name, comps);
    } else if (tag == "end_header") {
      header_done = true;
      break;
    }
  }
  if (!header_done) fail(path, "truncated ply header");

  TriMesh mesh;
  mesh.vertices.resize(n_vertices);
  const bool with_n = vertex_props.size() >= 6 && vertex_props[3] == "nx";
  if (with_n) mesh.normals.resize(n_vertices);
  std::size_t extra = vertex_props.size() - (with_n ? 6 : 3);
  for (const auto& [name, comps] : channel_dir) {
    mesh.channels.push_back(AttributeChannel{name, comps,
                                             std::vector<float>(n_vertices * comps, 0.f)});
    extra -= comps;
  }
  if (extra != 0) fail(path, "ply vertex properties do not match channel directory");

  for (std::size_t v = 0; v < n_vertices; ++v) {
    float buf[6];
    in.read(reinterpret_cast<char*>(buf), (with_n ? 6 : 3) * sizeof(float));
    mesh.vertices[v] = Vec3(buf[0], buf[1], buf[2]);
    if (with_n) mesh.normals[v] = Vec3(buf[3], buf[4], buf[5]);
    for (auto& ch : mesh.channels)
      in.read(reinterpret_cast<char*>(&ch.data[v * ch.components]), ch.components * sizeof(float));
  }
  mesh.triangles.resize(n_faces);
  for (std::size_t f = 0; f < n_faces; ++f) {
    std::uint8_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 1);
    if (n != 3) fail(path, "non-triangular ply face");
    std::int32_t idx[3];
    in.read(reinterpret_cast<char*>(idx), sizeof(idx));
    mesh.triangles[f] = {idx[0], idx[1], idx[2]};
  }
  if (!in) fail(path, "ply read failed");
  mesh.validate();
  return mesh;
}

void write_ply_points(const std::filesystem::path& path, const std::vector<Vec3>& points) {
  auto out = open_out(path, false);
  out.precision(9);
  out << "ply\nformat ascii 1.0\nelement vertex " << points.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  for (const auto& p : points)
    out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  if (!out) fail(path, "ply write failed");
}

std::vector<Vec3> read_ply_points(const std::filesystem::path& path) {
  auto in = open_in(path, false);
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "element") {
      std::string what;
      ss >> what >> count;
    } else if (tag == "end_header") {
      break;
    }
  }
  std::vector<Vec3> points(count);
  for (auto& p : points)
    if (!(in >> p.x() >> p.y() >> p.z())) fail(path, "truncated point ply");
  return points;
}

}  // namespace volcap
