#pragma once

// Per-block node-indexed storage. Nodes shared by two blocks are stored once
// per block; writers go through the global numbering so the copies agree.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mbdeform/grid_core.hpp"

namespace mbdeform {

template <class T>
class BlockField {
 public:
  BlockField() = default;

  BlockField(const MultiBlockDomain& domain, const T& init) {
    data_.reserve(domain.block_count());
    for (const auto& b : domain.blocks()) data_.emplace_back(b.node_count(), init);
  }

  /// Samples fn(reference position) at every node of every block.
  template <class Fn>
  static BlockField sample(const MultiBlockDomain& domain, Fn&& fn) {
    BlockField out(domain, T{});
    for (std::size_t p = 0; p < domain.block_count(); ++p) {
      const auto& b = domain.block(p);
      for (std::size_t n = 0; n < b.node_count(); ++n) {
        out.data_[p][n] = fn(b.reference_position(b.node_at(n)));
      }
    }
    return out;
  }

  /// Spreads one value per global node to every stored copy.
  static BlockField from_global(const MultiBlockDomain& domain, const std::vector<T>& values) {
    if (values.size() != domain.unique_node_count()) {
      throw std::invalid_argument("global vector size does not match the domain");
    }
    BlockField out(domain, T{});
    for (std::size_t p = 0; p < domain.block_count(); ++p) {
      for (std::size_t n = 0; n < out.data_[p].size(); ++n) {
        out.data_[p][n] = values[domain.global_node(p, n)];
      }
    }
    return out;
  }

  /// One value per global node, read from the owning copy.
  std::vector<T> to_global(const MultiBlockDomain& domain) const {
    std::vector<T> out(domain.unique_node_count());
    for (std::size_t g = 0; g < out.size(); ++g) {
      const NodeRef& r = domain.owner(g);
      out[g] = data_[r.block][r.local];
    }
    return out;
  }

  bool matches(const MultiBlockDomain& domain) const {
    if (data_.size() != domain.block_count()) return false;
    for (std::size_t p = 0; p < data_.size(); ++p) {
      if (data_[p].size() != domain.block(p).node_count()) return false;
    }
    return true;
  }

  std::size_t block_count() const { return data_.size(); }
  std::vector<T>& block(std::size_t p) { return data_[p]; }
  const std::vector<T>& block(std::size_t p) const { return data_[p]; }
  T& at(std::size_t p, std::size_t local) { return data_[p][local]; }
  const T& at(std::size_t p, std::size_t local) const { return data_[p][local]; }
  T& at(const NodeRef& r) { return data_[r.block][r.local]; }
  const T& at(const NodeRef& r) const { return data_[r.block][r.local]; }

 private:
  std::vector<std::vector<T>> data_;
};

using ScalarField = BlockField<double>;
using VectorField = BlockField<Vec3>;

/// Per block, per cell (lexicographic cell index).
using CellField = std::vector<std::vector<double>>;

/// Which half of the computation a field or grid belongs to: deformation
/// pseudo-time t in step 1, artificial time l in step 2.
enum class Phase { Step1, Step2 };

struct PhaseTime {
  Phase phase = Phase::Step1;
  double value = 0.0;

  friend bool operator==(const PhaseTime&, const PhaseTime&) = default;
};

/// Node positions of the moving grid.
struct GridCoordinates {
  VectorField positions;
  PhaseTime stamp;
};

/// The reference lattice, i.e. the identity map.
GridCoordinates identity_coordinates(const MultiBlockDomain& domain);

}  // namespace mbdeform
