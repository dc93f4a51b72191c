#include "mbdeform/vtk_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mbdeform {

namespace fs = std::filesystem;

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string block_title(const MultiBlockDomain& domain, std::size_t block, const PhaseTime& stamp) {
  const auto& b = domain.block(block);
  const Vec3 o = b.origin();
  return "mbdeform block=" + std::to_string(b.id()) + " h=" + number(b.spacing()) +
         " origin=" + number(o.x) + " " + number(o.y) + " " + number(o.z) +
         " stamp=" + format_stamp(stamp);
}

int nearest_plane(const VtkGrid& grid, double z0) {
  const VtkBlockInfo info = parse_block_info(grid.title);
  const long k = std::lround((z0 - info.origin.z) / info.spacing);
  if (k < 0 || k >= grid.dims.k) {
    throw std::invalid_argument("z = " + number(z0) + " is outside block " +
                                std::to_string(info.block_id));
  }
  return static_cast<int>(k);
}

VtkGrid k_range(const VtkGrid& grid, int k_lo, int k_hi) {
  VtkGrid out;
  out.title = grid.title;
  out.dims = Index3{grid.dims.i, grid.dims.j, k_hi - k_lo + 1};
  for (const auto& [name, values] : grid.scalars) out.scalars[name];
  for (int k = k_lo; k <= k_hi; ++k) {
    for (int j = 0; j < grid.dims.j; ++j) {
      for (int i = 0; i < grid.dims.i; ++i) {
        const std::size_t src = grid.point_index(i, j, k);
        out.points.push_back(grid.points[src]);
        for (const auto& [name, values] : grid.scalars) out.scalars[name].push_back(values[src]);
      }
    }
  }
  return out;
}

}  // namespace

fs::path block_file(const fs::path& stem, int block_id) {
  return fs::path(stem.string() + "_b" + std::to_string(block_id) + ".vtk");
}

void write_vtk(const fs::path& path, const VtkGrid& grid) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string() + ": " + std::strerror(errno));
  out << "# vtk DataFile Version 3.0\n"
      << grid.title << "\n"
      << "ASCII\n"
      << "DATASET STRUCTURED_GRID\n"
      << "DIMENSIONS " << grid.dims.i << " " << grid.dims.j << " " << grid.dims.k << "\n"
      << "POINTS " << grid.points.size() << " double\n";
  for (const Vec3& p : grid.points) {
    out << number(p.x) << " " << number(p.y) << " " << number(p.z) << "\n";
  }
  if (!grid.scalars.empty()) {
    out << "POINT_DATA " << grid.points.size() << "\n";
    for (const auto& [name, values] : grid.scalars) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << number(v) << "\n";
    }
  }
  if (!out) throw IoError("write to " + path.string() + " failed");
}

VtkGrid read_vtk(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string() + ": " + std::strerror(errno));
  auto fail = [&](const std::string& what) { return IoError(path.string() + ": " + what); };

  VtkGrid grid;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# vtk DataFile", 0) != 0) {
    throw fail("not a legacy VTK file");
  }
  std::getline(in, grid.title);
  std::string token;
  in >> token;
  if (token != "ASCII") throw fail("only ASCII files are supported");
  in >> token >> token;
  if (token != "STRUCTURED_GRID") throw fail("expected DATASET STRUCTURED_GRID");
  in >> token >> grid.dims.i >> grid.dims.j >> grid.dims.k;
  if (token != "DIMENSIONS") throw fail("expected DIMENSIONS");
  std::size_t count = 0;
  in >> token >> count >> token;
  if (!in || count != static_cast<std::size_t>(grid.dims.i) * grid.dims.j * grid.dims.k) {
    throw fail("point count does not match DIMENSIONS");
  }
  grid.points.resize(count);
  for (Vec3& p : grid.points) in >> p.x >> p.y >> p.z;
  if (!in) throw fail("truncated POINTS section");

  while (in >> token) {
    if (token == "POINT_DATA") {
      in >> token;
    } else if (token == "SCALARS") {
      std::string name;
      in >> name >> token >> token;  // type, components
      in >> token >> token;          // LOOKUP_TABLE default
      std::vector<double> values(count);
      for (double& v : values) in >> v;
      if (!in) throw fail("truncated SCALARS " + name);
      grid.scalars[name] = std::move(values);
    } else {
      throw fail("unexpected token '" + token + "'");
    }
  }
  return grid;
}

VtkBlockInfo parse_block_info(const std::string& title) {
  std::istringstream in(title);
  std::string token;
  in >> token;
  if (token != "mbdeform") throw IoError("title line carries no block metadata: " + title);
  VtkBlockInfo info;
  bool have_block = false;
  bool have_h = false;
  bool have_origin = false;
  while (in >> token) {
    if (token.rfind("block=", 0) == 0) {
      info.block_id = std::stoi(token.substr(6));
      have_block = true;
    } else if (token.rfind("h=", 0) == 0) {
      info.spacing = std::stod(token.substr(2));
      have_h = true;
    } else if (token.rfind("origin=", 0) == 0) {
      info.origin.x = std::stod(token.substr(7));
      in >> info.origin.y >> info.origin.z;
      have_origin = static_cast<bool>(in);
    } else if (token.rfind("stamp=", 0) == 0) {
      info.stamp = token.substr(6);
    }
  }
  if (!have_block || !have_h || !have_origin || !(info.spacing > 0.0)) {
    throw IoError("incomplete block metadata: " + title);
  }
  return info;
}

VtkGrid block_grid(const MultiBlockDomain& domain, std::size_t block, const GridCoordinates& phi,
                   const ScalarField* monitor, const ScalarField* omega) {
  const auto& b = domain.block(block);
  VtkGrid grid;
  grid.title = block_title(domain, block, phi.stamp);
  grid.dims = Index3{b.nodes_along(0), b.nodes_along(1), b.nodes_along(2)};
  grid.points = phi.positions.block(block);
  if (monitor != nullptr) grid.scalars["monitor"] = monitor->block(block);
  if (omega != nullptr) grid.scalars["omega"] = omega->block(block);
  return grid;
}

VtkGrid slice_grid(const VtkGrid& grid, double z0) {
  const int k = nearest_plane(grid, z0);
  return k_range(grid, k, k);
}

VtkGrid cutaway_grid(const VtkGrid& grid, double z0) {
  const int k = nearest_plane(grid, z0);
  return k_range(grid, 0, k);
}

std::vector<fs::path> export_vtk(const MultiBlockDomain& domain, const GridCoordinates& phi,
                                 const fs::path& stem, const ScalarField* monitor,
                                 const ScalarField* omega) {
  std::vector<fs::path> written;
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    written.push_back(block_file(stem, domain.block(p).id()));
    write_vtk(written.back(), block_grid(domain, p, phi, monitor, omega));
  }
  return written;
}

std::vector<fs::path> export_slice(const MultiBlockDomain& domain, const GridCoordinates& phi,
                                   double z0, const fs::path& stem) {
  std::vector<fs::path> written;
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    written.push_back(block_file(stem, domain.block(p).id()));
    write_vtk(written.back(), slice_grid(block_grid(domain, p, phi), z0));
  }
  return written;
}

std::vector<fs::path> export_cutaway(const MultiBlockDomain& domain, const GridCoordinates& phi,
                                     double z0, const fs::path& stem, const ScalarField* monitor) {
  std::vector<fs::path> written;
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    written.push_back(block_file(stem, domain.block(p).id()));
    write_vtk(written.back(), cutaway_grid(block_grid(domain, p, phi, monitor), z0));
  }
  return written;
}

}  // namespace mbdeform
