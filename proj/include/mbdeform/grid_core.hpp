#pragma once

// Reference geometry and topology of a multi-block structured domain.
//
// Every block is an axis-aligned box of uniform cubic cells. All blocks of a
// domain share one spacing h and sit on a common integer lattice, so a node
// shared by two blocks has one lattice coordinate and one global id. Fields
// are still stored per block (see fields.hpp); the global numbering is what
// keeps paired copies identical.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbdeform/vec3.hpp"

namespace mbdeform {

/// Raised for invalid geometry: bad spacing, overlapping blocks, etc.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Direction : std::uint8_t { XMinus, XPlus, YMinus, YPlus, ZMinus, ZPlus };

constexpr int axis_of(Direction d) { return static_cast<int>(d) / 2; }
constexpr int sign_of(Direction d) { return (static_cast<int>(d) % 2) != 0 ? 1 : -1; }
constexpr Direction make_direction(int axis, int sign) {
  return static_cast<Direction>(2 * axis + (sign > 0 ? 1 : 0));
}
const char* to_string(Direction d);

/// Small bitset over the six axis directions.
class DirectionSet {
 public:
  constexpr DirectionSet() = default;

  constexpr void insert(Direction d) { bits_ |= bit(d); }
  constexpr void erase(Direction d) { bits_ &= static_cast<std::uint8_t>(~bit(d)); }
  constexpr bool contains(Direction d) const { return (bits_ & bit(d)) != 0; }
  constexpr bool has_axis(int axis) const {
    return contains(make_direction(axis, -1)) || contains(make_direction(axis, 1));
  }
  constexpr void erase_axis(int axis) {
    erase(make_direction(axis, -1));
    erase(make_direction(axis, 1));
  }
  int count() const;
  bool empty() const { return bits_ == 0; }
  std::vector<Direction> directions() const;

  friend constexpr bool operator==(DirectionSet, DirectionSet) = default;

 private:
  static constexpr std::uint8_t bit(Direction d) {
    return static_cast<std::uint8_t>(1U << static_cast<unsigned>(d));
  }
  std::uint8_t bits_ = 0;
};

/// One axis-aligned block of cubic cells with nodes indexed 0..cells per axis.
///
/// The origin is snapped to the lattice of spacing h so that reference node
/// positions are (offset + i) * h, reproducible bit-for-bit from any block
/// that shares the node.
class StructuredBlock {
 public:
  StructuredBlock(int id, const Vec3& origin, double spacing, const Index3& cells);

  /// Builds a block covering [origin, origin + extent]; rejects extents that
  /// would need a different spacing per axis.
  static StructuredBlock from_extent(int id, const Vec3& origin, const Vec3& extent,
                                     const Index3& cells);

  int id() const { return id_; }
  double spacing() const { return h_; }
  const Index3& cells() const { return cells_; }
  const Index3& lattice_offset() const { return offset_; }
  Vec3 origin() const;

  int nodes_along(int axis) const { return cells_[static_cast<std::size_t>(axis)] + 1; }
  std::size_t node_count() const;
  std::size_t cell_count() const;
  double volume() const;

  /// Lexicographic node index, i fastest then j then k.
  std::size_t node_index(const Index3& n) const {
    return static_cast<std::size_t>(n.i) +
           static_cast<std::size_t>(cells_.i + 1) *
               (static_cast<std::size_t>(n.j) +
                static_cast<std::size_t>(cells_.j + 1) * static_cast<std::size_t>(n.k));
  }
  Index3 node_at(std::size_t index) const;
  std::size_t cell_index(const Index3& c) const {
    return static_cast<std::size_t>(c.i) +
           static_cast<std::size_t>(cells_.i) *
               (static_cast<std::size_t>(c.j) +
                static_cast<std::size_t>(cells_.j) * static_cast<std::size_t>(c.k));
  }
  Index3 cell_at(std::size_t index) const;

  bool contains_node(const Index3& n) const;
  Vec3 reference_position(const Index3& n) const;
  Vec3 upper_corner() const { return reference_position(cells_); }

 private:
  int id_;
  double h_;
  Index3 cells_;
  Index3 offset_;
};

/// One side of an interface: a block face and the node rectangle on it.
struct PatchSide {
  int block_id = 0;
  Direction face = Direction::XMinus;
  Index3 lo;  ///< inclusive node-index box, flat along the face axis
  Index3 hi;
};

/// Conforming pairing of the coincident nodes of two block faces.
class InterfacePatch {
 public:
  InterfacePatch(PatchSide a, PatchSide b, Index3 a_to_b_shift);

  const PatchSide& side_a() const { return a_; }
  const PatchSide& side_b() const { return b_; }
  int axis() const { return axis_of(a_.face); }

  bool contains_a(const Index3& n) const;
  bool contains_b(const Index3& n) const;
  Index3 to_b(const Index3& a_node) const;
  Index3 to_a(const Index3& b_node) const;
  std::size_t node_count() const;

 private:
  PatchSide a_;
  PatchSide b_;
  Index3 shift_;
};

/// Reference to one stored copy of a node: block position in the domain and
/// local node index.
struct NodeRef {
  std::size_t block = 0;
  std::size_t local = 0;
};

class MultiBlockDomain {
 public:
  explicit MultiBlockDomain(std::vector<StructuredBlock> blocks);

  const std::vector<StructuredBlock>& blocks() const { return blocks_; }
  const StructuredBlock& block(std::size_t position) const { return blocks_.at(position); }
  std::size_t block_count() const { return blocks_.size(); }
  /// Position of the block with the given id; throws if absent.
  std::size_t block_position(int id) const;

  const std::vector<InterfacePatch>& interfaces() const { return interfaces_; }
  double spacing() const { return h_; }
  double volume() const { return volume_; }

  // Lattice view. Lattice coordinates are global integers shared by all blocks.
  std::size_t unique_node_count() const { return lattice_of_.size(); }
  std::size_t global_node(std::size_t block, std::size_t local) const {
    return global_of_[block][local];
  }
  /// First stored copy (lowest block position) of a global node.
  const NodeRef& owner(std::size_t global) const { return refs_[ref_begin_[global]]; }
  /// All stored copies of a global node.
  std::vector<NodeRef> copies(std::size_t global) const;
  std::size_t copy_count(std::size_t global) const {
    return ref_begin_[global + 1] - ref_begin_[global];
  }
  const Index3& lattice_node(std::size_t global) const { return lattice_of_[global]; }
  /// Global id of the node at a lattice coordinate, or -1.
  long find_node(const Index3& lattice) const;
  bool has_cell(const Index3& lattice_cell) const;
  Vec3 lattice_position(const Index3& lattice) const;

  /// Outward normals of the domain boundary at a node (empty in the interior).
  const DirectionSet& boundary_normals(std::size_t global) const { return normals_[global]; }

  /// Connected component (through interfaces) each block belongs to.
  std::size_t component_of(std::size_t block) const { return component_[block]; }
  std::size_t component_count() const { return component_count_; }

 private:
  long dense_node_slot(const Index3& lattice) const;
  long dense_cell_slot(const Index3& lattice_cell) const;
  void detect_interfaces();
  void build_lattice();
  void compute_normals();
  void compute_components();

  std::vector<StructuredBlock> blocks_;
  std::vector<InterfacePatch> interfaces_;
  double h_ = 0.0;
  double volume_ = 0.0;

  Index3 lattice_lo_;
  Index3 lattice_hi_;  // inclusive upper lattice node
  std::vector<long> node_slots_;
  std::vector<char> cell_exists_;

  std::vector<std::vector<std::size_t>> global_of_;
  std::vector<Index3> lattice_of_;
  std::vector<std::size_t> ref_begin_;
  std::vector<NodeRef> refs_;
  std::vector<DirectionSet> normals_;
  std::vector<std::size_t> component_;
  std::size_t component_count_ = 0;
};

/// L-shaped back-step: block 1 = [0,1]x[0,2]x[0,1] with (n,2n,n) cells and
/// block 2 = [1,2]x[0,1]x[0,1] with (n,n,n) cells, joined at x = 1.
MultiBlockDomain build_backstep(int cells_per_unit);

/// Unit cube [0,1]^3 as a single block with n cells per axis.
MultiBlockDomain build_unit_block(int cells_per_unit);

enum class NodeTag {
  Interior,
  BoundaryFace,
  BoundaryEdge,
  BoundaryCorner,
  InterfaceInterior,
  InterfaceEdge,
  InterfaceCorner,
};
const char* to_string(NodeTag tag);

struct NodeClass {
  NodeTag tag = NodeTag::Interior;
  DirectionSet normals;  ///< external normals the tag accounts for
};

/// Per block, per local node.
using NodeClassification = std::vector<std::vector<NodeClass>>;

/// Tags every node of every block.
///
/// A node whose own block face is entirely backed by a neighbouring block is
/// an interface node; the external normals it keeps are the ones tangential
/// to that face. Where a block face is only partly backed (the x = 1 face of
/// the back-step column at y = 1) the external wall wins and the node is a
/// boundary node carrying the geometric normals of the domain there.
NodeClassification classify_nodes(const MultiBlockDomain& domain);

}  // namespace mbdeform
