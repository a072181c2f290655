#include "toriclab/geometry.h"

#include <cstdlib>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace toriclab {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int positive_mod(int a, int b) {
  int r = a % b;
  return r < 0 ? r + b : r;
}

}  // namespace

std::string_view to_string(Orientation orientation) {
  return orientation == Orientation::square ? "square" : "rotated";
}

Orientation parse_orientation(std::string_view text) {
  if (text == "square") return Orientation::square;
  if (text == "rotated") return Orientation::rotated;
  throw std::invalid_argument("unknown orientation '" + std::string(text) + "'");
}

std::string_view class_name(WindingClass c) {
  switch (c.bits()) {
    case 0: return "none";
    case 1: return "horizontal";
    case 2: return "vertical";
    default: return "diagonal";
  }
}

int Displacement::manhattan() const noexcept { return std::abs(dx) + std::abs(dy); }

CodeGeometry::CodeGeometry(Orientation orientation, int distance)
    : orientation_(orientation), distance_(distance) {
  if (distance < 2 || distance % 2 != 0) {
    throw std::invalid_argument("distance must be a positive even integer");
  }
  width_ = distance;
  if (orientation == Orientation::square) {
    height_ = distance;
    shear_ = 0;
  } else {
    height_ = distance / 2;
    shear_ = distance / 2;
  }
  num_vertices_ = width_ * height_;
  build_cuts();
  build_displacements();
}

VertexId CodeGeometry::vertex_at(int x, int y) const noexcept {
  const int q = floor_div(y, height_);
  y -= q * height_;
  x = positive_mod(x - q * shear_, width_);
  return y * width_ + x;
}

Displacement CodeGeometry::coord(VertexId v) const {
  check_vertex(v);
  return {v % width_, v / width_};
}

void CodeGeometry::check_vertex(VertexId v) const {
  if (v < 0 || v >= num_vertices_) throw std::out_of_range("vertex index out of range");
}

std::array<VertexId, 2> CodeGeometry::endpoints(EdgeId e) const {
  if (e < 0 || e >= num_qubits()) throw std::out_of_range("edge index out of range");
  const VertexId u = e / 2;
  const int x = u % width_;
  const int y = u / width_;
  return {u, is_horizontal(e) ? vertex_at(x + 1, y) : vertex_at(x, y + 1)};
}

std::array<EdgeId, 4> CodeGeometry::incident_edges(VertexId v) const {
  check_vertex(v);
  const int x = v % width_;
  const int y = v / width_;
  return {2 * v, 2 * v + 1, 2 * vertex_at(x - 1, y), 2 * vertex_at(x, y - 1) + 1};
}

std::array<VertexId, 4> CodeGeometry::neighbors(VertexId v) const {
  check_vertex(v);
  const int x = v % width_;
  const int y = v / width_;
  return {vertex_at(x + 1, y), vertex_at(x, y + 1), vertex_at(x - 1, y), vertex_at(x, y - 1)};
}

void CodeGeometry::lattice_coefficients(int px, int py, int& m, int& k) const {
  k = py / height_;
  m = (px - k * shear_) / width_;
  if (k * height_ != py || m * width_ + k * shear_ != px) {
    throw std::logic_error("vector is not a lattice period");
  }
}

std::uint8_t CodeGeometry::winding_of_period(int px, int py) const {
  int m = 0;
  int k = 0;
  lattice_coefficients(px, py, m, k);
  unsigned h = 0;
  unsigned v = 0;
  if (orientation_ == Orientation::square) {
    h = static_cast<unsigned>(m) & 1U;
    v = static_cast<unsigned>(k) & 1U;
  } else {
    h = static_cast<unsigned>(m + k) & 1U;
    v = static_cast<unsigned>(m) & 1U;
  }
  return static_cast<std::uint8_t>(h | (v << 1));
}

void CodeGeometry::build_cuts() {
  cut_mask_.assign(num_qubits(), 0);
  for (VertexId u = 0; u < num_vertices_; ++u) {
    const int x = u % width_;
    const int y = u / width_;
    for (int dir = 0; dir < 2; ++dir) {
      const int lx = dir == 0 ? x + 1 : x;
      const int ly = dir == 0 ? y : y + 1;
      const VertexId w = vertex_at(lx, ly);
      const int px = lx - w % width_;
      const int py = ly - w / width_;
      cut_mask_[2 * u + dir] = winding_of_period(px, py);
    }
  }
}

std::vector<EdgeId> CodeGeometry::cut(int which) const {
  if (which != 0 && which != 1) throw std::invalid_argument("cut index must be 0 or 1");
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < num_qubits(); ++e) {
    if ((cut_mask_[e] >> which) & 1U) out.push_back(e);
  }
  return out;
}

void CodeGeometry::build_displacements() {
  class_rep_.assign(num_vertices_, {});
  class_distance_.assign(num_vertices_, 0);
  for (VertexId t = 0; t < num_vertices_; ++t) {
    const int tx = t % width_;
    const int ty = t / width_;
    Displacement best{};
    bool found = false;
    for (int j = -3; j <= 3; ++j) {
      for (int i = -3; i <= 3; ++i) {
        const Displacement cand{tx + i * width_ + j * shear_, ty + j * height_};
        if (!found || cand.manhattan() < best.manhattan() ||
            (cand.manhattan() == best.manhattan() &&
             (cand.dx > best.dx || (cand.dx == best.dx && cand.dy > best.dy)))) {
          best = cand;
          found = true;
        }
      }
    }
    class_rep_[t] = best;
    class_distance_[t] = best.manhattan();
  }
  // Make the representative antisymmetric under u <-> v.
  for (VertexId t = 0; t < num_vertices_; ++t) {
    const Displacement r = class_rep_[t];
    const VertexId neg = vertex_at(-r.dx, -r.dy);
    if (neg < t) class_rep_[t] = -class_rep_[neg];
  }
}

int CodeGeometry::difference_class(VertexId u, VertexId v) const noexcept {
  const int ux = u % width_;
  const int uy = u / width_;
  const int vx = v % width_;
  const int vy = v / width_;
  return vertex_at(vx - ux, vy - uy);
}

Displacement CodeGeometry::minimal_displacement(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  return class_rep_[difference_class(u, v)];
}

int CodeGeometry::defect_distance(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  return class_distance_[difference_class(u, v)];
}

std::vector<EdgeId> CodeGeometry::trace(VertexId start, Displacement step) const {
  check_vertex(start);
  std::vector<EdgeId> out;
  out.reserve(static_cast<std::size_t>(step.manhattan()));
  int x = start % width_;
  int y = start / width_;
  for (int i = 0; i < std::abs(step.dx); ++i) {
    if (step.dx > 0) {
      out.push_back(2 * vertex_at(x, y));
      ++x;
    } else {
      --x;
      out.push_back(2 * vertex_at(x, y));
    }
  }
  for (int i = 0; i < std::abs(step.dy); ++i) {
    if (step.dy > 0) {
      out.push_back(2 * vertex_at(x, y) + 1);
      ++y;
    } else {
      --y;
      out.push_back(2 * vertex_at(x, y) + 1);
    }
  }
  return out;
}

std::vector<EdgeId> CodeGeometry::canonical_path(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return {};
  VertexId start = std::min(u, v);
  Displacement step = class_rep_[difference_class(start, std::max(u, v))];
  if (step.dx < 0 || (step.dx == 0 && step.dy < 0)) {
    start = std::max(u, v);
    step = -step;
  }
  return trace(start, step);
}

std::uint8_t CodeGeometry::path_cut_mask(VertexId u, VertexId v) const {
  std::uint8_t mask = 0;
  for (EdgeId e : canonical_path(u, v)) mask ^= cut_mask_[e];
  return mask;
}

std::vector<EdgeId> CodeGeometry::logical_generator(int which) const {
  if (which != 0 && which != 1) throw std::invalid_argument("generator index must be 0 or 1");
  const int half = distance_ / 2;
  if (orientation_ == Orientation::square) {
    return which == 0 ? trace(0, {distance_, 0}) : trace(0, {0, distance_});
  }
  return which == 0 ? trace(0, {half, half}) : trace(0, {half, -half});
}

std::string CodeGeometry::summary_json() const {
  nlohmann::json j;
  j["orientation"] = std::string(to_string(orientation_));
  j["distance"] = distance_;
  j["num_qubits"] = num_qubits();
  j["num_vertices"] = num_vertices_;
  j["width"] = width_;
  j["height"] = height_;
  j["shear"] = shear_;
  j["cut_sizes"] = {cut(0).size(), cut(1).size()};
  return j.dump();
}

}  // namespace toriclab
