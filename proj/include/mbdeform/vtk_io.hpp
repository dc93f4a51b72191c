#pragma once

// Legacy ASCII VTK structured grids, one file per block.
//
// The title line carries the block metadata needed to re-slice a file
// without the run configuration:
//   mbdeform block=<id> h=<h> origin=<x> <y> <z> stamp=<t=.. | l=..>

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbdeform/deform.hpp"

namespace mbdeform {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VtkGrid {
  std::string title;
  Index3 dims;  ///< nodes per axis
  std::vector<Vec3> points;
  std::map<std::string, std::vector<double>> scalars;  ///< POINT_DATA arrays

  std::size_t point_index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims.i) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims.j) * static_cast<std::size_t>(k));
  }
};

/// Block metadata parsed back from a title line.
struct VtkBlockInfo {
  int block_id = 0;
  double spacing = 0.0;
  Vec3 origin;
  std::string stamp;
};

void write_vtk(const std::filesystem::path& path, const VtkGrid& grid);
VtkGrid read_vtk(const std::filesystem::path& path);
VtkBlockInfo parse_block_info(const std::string& title);

/// Path of the file for one block: <stem>_b<id>.vtk.
std::filesystem::path block_file(const std::filesystem::path& stem, int block_id);

/// The whole grid of one block, with `monitor` and `omega` point data when given.
VtkGrid block_grid(const MultiBlockDomain& domain, std::size_t block, const GridCoordinates& phi,
                   const ScalarField* monitor = nullptr, const ScalarField* omega = nullptr);

/// The k-plane of a grid whose reference z is nearest z0, as a 2D grid.
VtkGrid slice_grid(const VtkGrid& grid, double z0);

/// The node sub-block with reference z <= z0 (cutaway view).
VtkGrid cutaway_grid(const VtkGrid& grid, double z0);

/// Writes <stem>_b<id>.vtk for every block; returns the paths.
std::vector<std::filesystem::path> export_vtk(const MultiBlockDomain& domain,
                                              const GridCoordinates& phi,
                                              const std::filesystem::path& stem,
                                              const ScalarField* monitor = nullptr,
                                              const ScalarField* omega = nullptr);

/// Writes the z0 slice of every block as <stem>_b<id>.vtk.
std::vector<std::filesystem::path> export_slice(const MultiBlockDomain& domain,
                                                const GridCoordinates& phi, double z0,
                                                const std::filesystem::path& stem);

/// Writes the z <= z0 part of every block as <stem>_b<id>.vtk.
std::vector<std::filesystem::path> export_cutaway(const MultiBlockDomain& domain,
                                                  const GridCoordinates& phi, double z0,
                                                  const std::filesystem::path& stem,
                                                  const ScalarField* monitor = nullptr);

}  // namespace mbdeform
