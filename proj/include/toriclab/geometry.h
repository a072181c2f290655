#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace toriclab {

enum class Orientation { square, rotated };

std::string_view to_string(Orientation orientation);
Orientation parse_orientation(std::string_view text);

using VertexId = int;
using EdgeId = int;

struct Displacement {
  int dx = 0;
  int dy = 0;

  int manhattan() const noexcept;
  Displacement operator-() const noexcept { return {-dx, -dy}; }
  bool operator==(const Displacement&) const = default;
};

// Crossing parities with the two stored cuts. (0,0) is a contractible cycle.
struct WindingClass {
  std::uint8_t h = 0;
  std::uint8_t v = 0;

  static WindingClass from_bits(unsigned bits) noexcept {
    return {static_cast<std::uint8_t>(bits & 1U), static_cast<std::uint8_t>((bits >> 1) & 1U)};
  }
  unsigned bits() const noexcept { return static_cast<unsigned>(h) | (static_cast<unsigned>(v) << 1); }
  bool trivial() const noexcept { return h == 0 && v == 0; }
  bool diagonal() const noexcept { return h == 1 && v == 1; }
  WindingClass operator^(WindingClass other) const noexcept {
    return {static_cast<std::uint8_t>(h ^ other.h), static_cast<std::uint8_t>(v ^ other.v)};
  }
  bool operator==(const WindingClass&) const = default;
};

std::string_view class_name(WindingClass c);

// Defect graph of a toric code. Defect vertices sit on a periodic square grid with
// fundamental domain [0, width) x [0, height); crossing the top boundary shifts x by
// shear(). Qubits are the graph edges: edge 2v leaves vertex v in +x, edge 2v+1 in +y.
class CodeGeometry {
 public:
  CodeGeometry(Orientation orientation, int distance);

  Orientation orientation() const noexcept { return orientation_; }
  int distance() const noexcept { return distance_; }
  int num_qubits() const noexcept { return 2 * num_vertices_; }
  int num_vertices() const noexcept { return num_vertices_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int shear() const noexcept { return shear_; }

  Displacement coord(VertexId v) const;
  VertexId vertex_at(int x, int y) const noexcept;
  std::array<VertexId, 2> endpoints(EdgeId e) const;
  std::array<EdgeId, 4> incident_edges(VertexId v) const;
  std::array<VertexId, 4> neighbors(VertexId v) const;
  static bool is_horizontal(EdgeId e) noexcept { return (e & 1) == 0; }

  // Bit 0 set if the edge crosses the horizontal-winding cut, bit 1 for the vertical one.
  std::uint8_t cut_mask(EdgeId e) const { return cut_mask_.at(e); }
  const std::uint8_t* cut_masks() const noexcept { return cut_mask_.data(); }
  std::vector<EdgeId> cut(int which) const;

  Displacement minimal_displacement(VertexId u, VertexId v) const;
  int defect_distance(VertexId u, VertexId v) const;
  // Distance by difference class, see difference_class(); unchecked.
  int class_distance(int difference) const noexcept { return class_distance_[difference]; }
  int difference_class(VertexId u, VertexId v) const noexcept;

  std::vector<EdgeId> canonical_path(VertexId u, VertexId v) const;
  // Cut parity of canonical_path(u, v) without materializing it.
  std::uint8_t path_cut_mask(VertexId u, VertexId v) const;

  // Minimum-weight logical generators: 0 winds horizontally, 1 vertically.
  std::vector<EdgeId> logical_generator(int which) const;
  // Edges met by walking dx steps along x and then dy steps along y from start.
  std::vector<EdgeId> trace(VertexId start, Displacement step) const;

  std::string summary_json() const;

 private:
  void check_vertex(VertexId v) const;
  // Writes the integer lattice coefficients (m, k) of a period vector.
  void lattice_coefficients(int px, int py, int& m, int& k) const;
  std::uint8_t winding_of_period(int px, int py) const;
  void build_cuts();
  void build_displacements();

  Orientation orientation_;
  int distance_;
  int width_;
  int height_;
  int shear_;
  int num_vertices_;
  std::vector<std::uint8_t> cut_mask_;
  std::vector<Displacement> class_rep_;
  std::vector<int> class_distance_;
};

}  // namespace toriclab
