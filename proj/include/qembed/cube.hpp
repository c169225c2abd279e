#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qembed {

inline constexpr double kBohrPerAngstrom = 1.8897261246257702;

struct CubeAtom {
  int number = 0;
  double charge = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

/**
 * @brief Scalar field on a parallelepiped voxel grid (Bohr units).
 *
 * Point (i, j, k) sits at origin + i axes.row(0) + j axes.row(1) + k axes.row(2);
 * values are stored with k fastest.
 */
struct DensityGrid {
  std::string comment1;
  std::string comment2;
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Matrix3d axes = Eigen::Matrix3d::Zero();
  std::array<int, 3> dims{0, 0, 0};
  std::vector<double> values;
  std::vector<CubeAtom> atoms;

  std::size_t size() const { return values.size(); }
  double voxel_volume() const { return std::abs(axes.determinant()); }
  double integral() const;
  Eigen::Vector3d point(int i, int j, int k) const;
  void validate() const;
};

struct CubeReadOptions {
  /// Square the values (orbital amplitudes -> densities). Also triggered by
  /// a negative atom count, which marks an orbital cube.
  bool square_values = false;
};

DensityGrid read_cube(std::istream& in, const CubeReadOptions& opts = {});
DensityGrid load_cube(const std::string& path, const CubeReadOptions& opts = {});
void write_cube(std::ostream& out, const DensityGrid& g);
void save_cube(const std::string& path, const DensityGrid& g);

/// Throws ValidationError unless origins, axes and dims agree to `tol` Bohr.
void check_same_grid(const DensityGrid& a, const DensityGrid& b, double tol = 1e-8);

}  // namespace qembed
