#include "mbdeform/grid_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mbdeform {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::XMinus: return "-x";
    case Direction::XPlus: return "+x";
    case Direction::YMinus: return "-y";
    case Direction::YPlus: return "+y";
    case Direction::ZMinus: return "-z";
    case Direction::ZPlus: return "+z";
  }
  return "?";
}

int DirectionSet::count() const { return std::popcount(bits_); }

std::vector<Direction> DirectionSet::directions() const {
  std::vector<Direction> out;
  for (int d = 0; d < 6; ++d) {
    if (contains(static_cast<Direction>(d))) out.push_back(static_cast<Direction>(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// StructuredBlock
// ---------------------------------------------------------------------------

StructuredBlock::StructuredBlock(int id, const Vec3& origin, double spacing, const Index3& cells)
    : id_(id), h_(spacing), cells_(cells) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw GeometryError("block " + std::to_string(id) + ": spacing must be positive");
  }
  for (std::size_t a = 0; a < 3; ++a) {
    if (cells[a] < 2) {
      throw GeometryError("block " + std::to_string(id) + ": need at least 2 cells per axis");
    }
    const double units = origin[a] / spacing;
    const double snapped = std::round(units);
    if (std::abs(units - snapped) > 1e-9) {
      throw GeometryError("block " + std::to_string(id) +
                          ": origin is not a multiple of the spacing");
    }
    offset_[a] = static_cast<int>(snapped);
  }
}

StructuredBlock StructuredBlock::from_extent(int id, const Vec3& origin, const Vec3& extent,
                                             const Index3& cells) {
  for (std::size_t a = 0; a < 3; ++a) {
    if (cells[a] < 2) {
      throw GeometryError("block " + std::to_string(id) + ": need at least 2 cells per axis");
    }
  }
  const double h = extent.x / cells.i;
  for (std::size_t a = 1; a < 3; ++a) {
    const double ha = extent[a] / cells[a];
    if (std::abs(ha - h) > 1e-12 * h) {
      throw GeometryError("block " + std::to_string(id) +
                          ": anisotropic spacing is not supported");
    }
  }
  return StructuredBlock(id, origin, h, cells);
}

Vec3 StructuredBlock::origin() const { return reference_position(Index3{0, 0, 0}); }

std::size_t StructuredBlock::node_count() const {
  return static_cast<std::size_t>(cells_.i + 1) * static_cast<std::size_t>(cells_.j + 1) *
         static_cast<std::size_t>(cells_.k + 1);
}

std::size_t StructuredBlock::cell_count() const {
  return static_cast<std::size_t>(cells_.i) * static_cast<std::size_t>(cells_.j) *
         static_cast<std::size_t>(cells_.k);
}

double StructuredBlock::volume() const {
  return h_ * h_ * h_ * static_cast<double>(cell_count());
}

Index3 StructuredBlock::node_at(std::size_t index) const {
  const auto nx = static_cast<std::size_t>(cells_.i + 1);
  const auto ny = static_cast<std::size_t>(cells_.j + 1);
  return Index3{static_cast<int>(index % nx), static_cast<int>((index / nx) % ny),
                static_cast<int>(index / (nx * ny))};
}

Index3 StructuredBlock::cell_at(std::size_t index) const {
  const auto nx = static_cast<std::size_t>(cells_.i);
  const auto ny = static_cast<std::size_t>(cells_.j);
  return Index3{static_cast<int>(index % nx), static_cast<int>((index / nx) % ny),
                static_cast<int>(index / (nx * ny))};
}

bool StructuredBlock::contains_node(const Index3& n) const {
  return n.i >= 0 && n.j >= 0 && n.k >= 0 && n.i <= cells_.i && n.j <= cells_.j &&
         n.k <= cells_.k;
}

Vec3 StructuredBlock::reference_position(const Index3& n) const {
  return Vec3{static_cast<double>(offset_.i + n.i) * h_, static_cast<double>(offset_.j + n.j) * h_,
              static_cast<double>(offset_.k + n.k) * h_};
}

// ---------------------------------------------------------------------------
// InterfacePatch
// ---------------------------------------------------------------------------

namespace {

bool in_box(const Index3& n, const Index3& lo, const Index3& hi) {
  for (std::size_t a = 0; a < 3; ++a) {
    if (n[a] < lo[a] || n[a] > hi[a]) return false;
  }
  return true;
}

Index3 add(const Index3& a, const Index3& b) { return Index3{a.i + b.i, a.j + b.j, a.k + b.k}; }
Index3 sub(const Index3& a, const Index3& b) { return Index3{a.i - b.i, a.j - b.j, a.k - b.k}; }

}  // namespace

InterfacePatch::InterfacePatch(PatchSide a, PatchSide b, Index3 a_to_b_shift)
    : a_(a), b_(b), shift_(a_to_b_shift) {}

bool InterfacePatch::contains_a(const Index3& n) const { return in_box(n, a_.lo, a_.hi); }
bool InterfacePatch::contains_b(const Index3& n) const { return in_box(n, b_.lo, b_.hi); }
Index3 InterfacePatch::to_b(const Index3& a_node) const { return add(a_node, shift_); }
Index3 InterfacePatch::to_a(const Index3& b_node) const { return sub(b_node, shift_); }

std::size_t InterfacePatch::node_count() const {
  std::size_t count = 1;
  for (std::size_t a = 0; a < 3; ++a) count *= static_cast<std::size_t>(a_.hi[a] - a_.lo[a] + 1);
  return count;
}

// ---------------------------------------------------------------------------
// MultiBlockDomain
// ---------------------------------------------------------------------------

MultiBlockDomain::MultiBlockDomain(std::vector<StructuredBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw GeometryError("domain needs at least one block");
  h_ = blocks_.front().spacing();
  for (const auto& b : blocks_) {
    if (b.spacing() != h_) {
      throw GeometryError("block " + std::to_string(b.id()) +
                          ": all blocks must share one spacing");
    }
    volume_ += b.volume();
  }
  for (std::size_t p = 0; p < blocks_.size(); ++p) {
    for (std::size_t q = p + 1; q < blocks_.size(); ++q) {
      if (blocks_[p].id() == blocks_[q].id()) throw GeometryError("duplicate block id");
      // Open boxes must be disjoint.
      bool overlap = true;
      for (std::size_t a = 0; a < 3; ++a) {
        const int lo = std::max(blocks_[p].lattice_offset()[a], blocks_[q].lattice_offset()[a]);
        const int hi = std::min(blocks_[p].lattice_offset()[a] + blocks_[p].cells()[a],
                                blocks_[q].lattice_offset()[a] + blocks_[q].cells()[a]);
        if (hi <= lo) overlap = false;
      }
      if (overlap) {
        throw GeometryError("blocks " + std::to_string(blocks_[p].id()) + " and " +
                            std::to_string(blocks_[q].id()) + " overlap");
      }
    }
  }
  detect_interfaces();
  build_lattice();
  compute_normals();
  compute_components();
}

std::size_t MultiBlockDomain::block_position(int id) const {
  for (std::size_t p = 0; p < blocks_.size(); ++p) {
    if (blocks_[p].id() == id) return p;
  }
  throw GeometryError("no block with id " + std::to_string(id));
}

void MultiBlockDomain::detect_interfaces() {
  for (std::size_t p = 0; p < blocks_.size(); ++p) {
    for (std::size_t q = p + 1; q < blocks_.size(); ++q) {
      const auto& bp = blocks_[p];
      const auto& bq = blocks_[q];
      for (int axis = 0; axis < 3; ++axis) {
        const auto a = static_cast<std::size_t>(axis);
        int sign = 0;
        if (bp.lattice_offset()[a] + bp.cells()[a] == bq.lattice_offset()[a]) sign = 1;
        else if (bq.lattice_offset()[a] + bq.cells()[a] == bp.lattice_offset()[a]) sign = -1;
        if (sign == 0) continue;

        Index3 lo;
        Index3 hi;
        bool area = true;
        for (std::size_t t = 0; t < 3; ++t) {
          if (t == a) continue;
          lo[t] = std::max(bp.lattice_offset()[t], bq.lattice_offset()[t]);
          hi[t] = std::min(bp.lattice_offset()[t] + bp.cells()[t],
                           bq.lattice_offset()[t] + bq.cells()[t]);
          if (hi[t] - lo[t] < 1) area = false;
        }
        if (!area) continue;
        lo[a] = hi[a] = sign > 0 ? bq.lattice_offset()[a] : bp.lattice_offset()[a];

        PatchSide sa{bp.id(), make_direction(axis, sign), sub(lo, bp.lattice_offset()),
                     sub(hi, bp.lattice_offset())};
        PatchSide sb{bq.id(), make_direction(axis, -sign), sub(lo, bq.lattice_offset()),
                     sub(hi, bq.lattice_offset())};
        interfaces_.emplace_back(sa, sb, sub(bp.lattice_offset(), bq.lattice_offset()));
      }
    }
  }
}

long MultiBlockDomain::dense_node_slot(const Index3& n) const {
  long slot = 0;
  long stride = 1;
  for (std::size_t a = 0; a < 3; ++a) {
    if (n[a] < lattice_lo_[a] || n[a] > lattice_hi_[a]) return -1;
    slot += stride * (n[a] - lattice_lo_[a]);
    stride *= lattice_hi_[a] - lattice_lo_[a] + 1;
  }
  return slot;
}

long MultiBlockDomain::dense_cell_slot(const Index3& c) const {
  long slot = 0;
  long stride = 1;
  for (std::size_t a = 0; a < 3; ++a) {
    if (c[a] < lattice_lo_[a] || c[a] >= lattice_hi_[a]) return -1;
    slot += stride * (c[a] - lattice_lo_[a]);
    stride *= lattice_hi_[a] - lattice_lo_[a];
  }
  return slot;
}

void MultiBlockDomain::build_lattice() {
  lattice_lo_ = blocks_.front().lattice_offset();
  lattice_hi_ = add(blocks_.front().lattice_offset(), blocks_.front().cells());
  for (const auto& b : blocks_) {
    for (std::size_t a = 0; a < 3; ++a) {
      lattice_lo_[a] = std::min(lattice_lo_[a], b.lattice_offset()[a]);
      lattice_hi_[a] = std::max(lattice_hi_[a], b.lattice_offset()[a] + b.cells()[a]);
    }
  }
  std::size_t node_slots = 1;
  std::size_t cell_slots = 1;
  for (std::size_t a = 0; a < 3; ++a) {
    node_slots *= static_cast<std::size_t>(lattice_hi_[a] - lattice_lo_[a] + 1);
    cell_slots *= static_cast<std::size_t>(lattice_hi_[a] - lattice_lo_[a]);
  }
  node_slots_.assign(node_slots, -1);
  cell_exists_.assign(cell_slots, 0);

  std::vector<std::vector<NodeRef>> copies;
  global_of_.resize(blocks_.size());
  for (std::size_t p = 0; p < blocks_.size(); ++p) {
    const auto& b = blocks_[p];
    global_of_[p].resize(b.node_count());
    for (std::size_t local = 0; local < b.node_count(); ++local) {
      const Index3 lat = add(b.lattice_offset(), b.node_at(local));
      long& slot = node_slots_[static_cast<std::size_t>(dense_node_slot(lat))];
      if (slot < 0) {
        slot = static_cast<long>(lattice_of_.size());
        lattice_of_.push_back(lat);
        copies.emplace_back();
      }
      global_of_[p][local] = static_cast<std::size_t>(slot);
      copies[static_cast<std::size_t>(slot)].push_back(NodeRef{p, local});
    }
    for (std::size_t c = 0; c < b.cell_count(); ++c) {
      cell_exists_[static_cast<std::size_t>(dense_cell_slot(add(b.lattice_offset(), b.cell_at(c))))] = 1;
    }
  }
  ref_begin_.reserve(copies.size() + 1);
  ref_begin_.push_back(0);
  for (const auto& c : copies) {
    refs_.insert(refs_.end(), c.begin(), c.end());
    ref_begin_.push_back(refs_.size());
  }
}

std::vector<NodeRef> MultiBlockDomain::copies(std::size_t global) const {
  return {refs_.begin() + static_cast<std::ptrdiff_t>(ref_begin_[global]),
          refs_.begin() + static_cast<std::ptrdiff_t>(ref_begin_[global + 1])};
}

long MultiBlockDomain::find_node(const Index3& lattice) const {
  const long slot = dense_node_slot(lattice);
  return slot < 0 ? -1 : node_slots_[static_cast<std::size_t>(slot)];
}

bool MultiBlockDomain::has_cell(const Index3& lattice_cell) const {
  const long slot = dense_cell_slot(lattice_cell);
  return slot >= 0 && cell_exists_[static_cast<std::size_t>(slot)] != 0;
}

Vec3 MultiBlockDomain::lattice_position(const Index3& n) const {
  return Vec3{static_cast<double>(n.i) * h_, static_cast<double>(n.j) * h_,
              static_cast<double>(n.k) * h_};
}

void MultiBlockDomain::compute_normals() {
  // Direction (a, s) is an outward normal at a node when some existing cell
  // on the -s side of the node has no neighbour across the node's a-plane.
  normals_.assign(lattice_of_.size(), DirectionSet{});
  for (std::size_t g = 0; g < lattice_of_.size(); ++g) {
    const Index3& n = lattice_of_[g];
    for (int axis = 0; axis < 3; ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      const auto t1 = (a + 1) % 3;
      const auto t2 = (a + 2) % 3;
      for (int sign : {-1, 1}) {
        bool outward = false;
        for (int d1 = -1; d1 <= 0 && !outward; ++d1) {
          for (int d2 = -1; d2 <= 0 && !outward; ++d2) {
            Index3 inside = n;
            inside[t1] += d1;
            inside[t2] += d2;
            inside[a] += sign > 0 ? -1 : 0;
            Index3 across = inside;
            across[a] += sign;
            outward = has_cell(inside) && !has_cell(across);
          }
        }
        if (outward) normals_[g].insert(make_direction(axis, sign));
      }
    }
  }
}

void MultiBlockDomain::compute_components() {
  std::vector<std::size_t> parent(blocks_.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& patch : interfaces_) {
    parent[find(block_position(patch.side_a().block_id))] =
        find(block_position(patch.side_b().block_id));
  }
  component_.resize(blocks_.size());
  std::vector<long> label(blocks_.size(), -1);
  for (std::size_t p = 0; p < blocks_.size(); ++p) {
    const std::size_t root = find(p);
    if (label[root] < 0) label[root] = static_cast<long>(component_count_++);
    component_[p] = static_cast<std::size_t>(label[root]);
  }
}

// ---------------------------------------------------------------------------
// Builders and classification
// ---------------------------------------------------------------------------

MultiBlockDomain build_backstep(int n) {
  if (n < 2) throw GeometryError("back-step needs at least 2 cells per unit length");
  const double h = 1.0 / n;
  std::vector<StructuredBlock> blocks;
  blocks.emplace_back(1, Vec3{0.0, 0.0, 0.0}, h, Index3{n, 2 * n, n});
  blocks.emplace_back(2, Vec3{n * h, 0.0, 0.0}, h, Index3{n, n, n});
  return MultiBlockDomain(std::move(blocks));
}

MultiBlockDomain build_unit_block(int n) {
  if (n < 2) throw GeometryError("unit block needs at least 2 cells per axis");
  std::vector<StructuredBlock> blocks;
  blocks.emplace_back(1, Vec3{}, 1.0 / n, Index3{n, n, n});
  return MultiBlockDomain(std::move(blocks));
}

const char* to_string(NodeTag tag) {
  switch (tag) {
    case NodeTag::Interior: return "interior";
    case NodeTag::BoundaryFace: return "boundary_face";
    case NodeTag::BoundaryEdge: return "boundary_edge";
    case NodeTag::BoundaryCorner: return "boundary_corner";
    case NodeTag::InterfaceInterior: return "interface_interior";
    case NodeTag::InterfaceEdge: return "interface_edge";
    case NodeTag::InterfaceCorner: return "interface_corner";
  }
  return "?";
}

namespace {

// True when every block cell touching the node on this face has a domain
// cell directly across the face.
bool face_fully_backed(const MultiBlockDomain& domain, const StructuredBlock& b,
                       const Index3& node, int axis, int sign) {
  const auto a = static_cast<std::size_t>(axis);
  const auto t1 = (a + 1) % 3;
  const auto t2 = (a + 2) % 3;
  const Index3 lat = add(b.lattice_offset(), node);
  for (int d1 = -1; d1 <= 0; ++d1) {
    for (int d2 = -1; d2 <= 0; ++d2) {
      const int c1 = node[t1] + d1;
      const int c2 = node[t2] + d2;
      if (c1 < 0 || c1 >= b.cells()[t1] || c2 < 0 || c2 >= b.cells()[t2]) continue;
      Index3 across = lat;
      across[t1] += d1;
      across[t2] += d2;
      across[a] += sign > 0 ? 0 : -1;
      if (!domain.has_cell(across)) return false;
    }
  }
  return true;
}

NodeTag tag_for(bool interface, int normal_count) {
  if (interface) {
    if (normal_count == 0) return NodeTag::InterfaceInterior;
    if (normal_count == 1) return NodeTag::InterfaceEdge;
    return NodeTag::InterfaceCorner;
  }
  switch (normal_count) {
    case 0: return NodeTag::Interior;
    case 1: return NodeTag::BoundaryFace;
    case 2: return NodeTag::BoundaryEdge;
    default: return NodeTag::BoundaryCorner;
  }
}

}  // namespace

NodeClassification classify_nodes(const MultiBlockDomain& domain) {
  NodeClassification out(domain.block_count());
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    const auto& b = domain.block(p);
    out[p].resize(b.node_count());
    for (std::size_t local = 0; local < b.node_count(); ++local) {
      const Index3 node = b.node_at(local);
      DirectionSet normals = domain.boundary_normals(domain.global_node(p, local));
      bool interface = false;
      for (int axis = 0; axis < 3; ++axis) {
        const auto a = static_cast<std::size_t>(axis);
        for (int sign : {-1, 1}) {
          const bool on_face = sign < 0 ? node[a] == 0 : node[a] == b.cells()[a];
          if (on_face && face_fully_backed(domain, b, node, axis, sign)) {
            interface = true;
            normals.erase_axis(axis);
          }
        }
      }
      out[p][local] = NodeClass{tag_for(interface, normals.count()), normals};
    }
  }
  return out;
}

}  // namespace mbdeform
