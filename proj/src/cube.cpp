#include "qembed/cube.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qembed/errors.hpp"

namespace qembed {

double DensityGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * voxel_volume();
}

Eigen::Vector3d DensityGrid::point(int i, int j, int k) const {
  return origin + i * axes.row(0).transpose() + j * axes.row(1).transpose() +
         k * axes.row(2).transpose();
}

void DensityGrid::validate() const {
  for (int d : dims)
    if (d <= 0) throw ValidationError("grid dimensions must be positive");
  if (!(voxel_volume() > 0)) throw ValidationError("grid voxel volume is zero");
  if (values.size() != static_cast<std::size_t>(dims[0]) * dims[1] * dims[2])
    throw ValidationError("grid value count does not match dimensions");
}

namespace {

std::istringstream next_line(std::istream& in, int& lineno, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(std::string("missing ") + what, lineno + 1);
  ++lineno;
  return std::istringstream(line);
}

}  // namespace

DensityGrid read_cube(std::istream& in, const CubeReadOptions& opts) {
  DensityGrid g;
  int lineno = 0;
  std::string line;
  if (!std::getline(in, g.comment1)) throw ParseError("empty cube file", 1);
  ++lineno;
  if (!std::getline(in, g.comment2)) throw ParseError("missing second comment line", 2);
  ++lineno;

  int natoms = 0;
  {
    auto ls = next_line(in, lineno, "atom count line");
    if (!(ls >> natoms >> g.origin(0) >> g.origin(1) >> g.origin(2)))
      throw ParseError("malformed atom count / origin line", lineno);
  }
  bool angstrom = false;
  for (int a = 0; a < 3; ++a) {
    auto ls = next_line(in, lineno, "axis line");
    int n = 0;
    if (!(ls >> n >> g.axes(a, 0) >> g.axes(a, 1) >> g.axes(a, 2)))
      throw ParseError("malformed axis line", lineno);
    if (n == 0) throw ParseError("axis point count is zero", lineno);
    if (n < 0) angstrom = true;
    g.dims[a] = std::abs(n);
  }
  if (angstrom) {
    g.axes *= kBohrPerAngstrom;
    g.origin *= kBohrPerAngstrom;
  }
  const bool orbital_cube = natoms < 0;
  for (int a = 0; a < std::abs(natoms); ++a) {
    auto ls = next_line(in, lineno, "atom line");
    CubeAtom atom;
    if (!(ls >> atom.number >> atom.charge >> atom.position(0) >> atom.position(1) >>
          atom.position(2)))
      throw ParseError("malformed atom line", lineno);
    if (angstrom) atom.position *= kBohrPerAngstrom;
    g.atoms.push_back(atom);
  }
  if (orbital_cube) {
    // Orbital index record: count followed by that many ids.
    auto ls = next_line(in, lineno, "orbital index line");
    int m = 0;
    if (!(ls >> m) || m < 1) throw ParseError("malformed orbital index line", lineno);
    int id = 0;
    for (int i = 0; i < m; ++i)
      if (!(ls >> id)) throw ParseError("orbital index line too short", lineno);
    if (m != 1) throw ParseError("multi-orbital cubes are not supported", lineno);
  }
  const std::size_t expected = static_cast<std::size_t>(g.dims[0]) * g.dims[1] * g.dims[2];
  g.values.reserve(expected);
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t pos = 0;
      g.values.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("invalid value '" + tok + "'", 0);
    }
  }
  if (g.values.size() != expected)
    throw ParseError("cube holds " + std::to_string(g.values.size()) + " values, header implies " +
                         std::to_string(expected),
                     0);
  if (orbital_cube || opts.square_values)
    for (double& v : g.values) v *= v;
  g.validate();
  return g;
}

DensityGrid load_cube(const std::string& path, const CubeReadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cube file '" + path + "'");
  try {
    return read_cube(in, opts);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_cube(std::ostream& out, const DensityGrid& g) {
  g.validate();
  out << g.comment1 << '\n' << g.comment2 << '\n';
  out << std::scientific << std::setprecision(12);
  out << std::setw(5) << g.atoms.size() << ' ' << g.origin(0) << ' ' << g.origin(1) << ' '
      << g.origin(2) << '\n';
  for (int a = 0; a < 3; ++a)
    out << std::setw(5) << g.dims[a] << ' ' << g.axes(a, 0) << ' ' << g.axes(a, 1) << ' '
        << g.axes(a, 2) << '\n';
  for (const auto& at : g.atoms)
    out << std::setw(5) << at.number << ' ' << at.charge << ' ' << at.position(0) << ' '
        << at.position(1) << ' ' << at.position(2) << '\n';
  out << std::setprecision(16);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    out << g.values[i];
    out << (((i + 1) % 6 == 0 || (i + 1) % g.dims[2] == 0) ? '\n' : ' ');
  }
}

void save_cube(const std::string& path, const DensityGrid& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write cube file '" + path + "'");
  write_cube(out, g);
}

void check_same_grid(const DensityGrid& a, const DensityGrid& b, double tol) {
  if (a.dims != b.dims) throw ValidationError("grids have different dimensions");
  if ((a.origin - b.origin).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("grids have different origins");
  if ((a.axes - b.axes).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("grids have different voxel axes");
  if (a.values.size() != b.values.size()) throw ValidationError("grid value counts differ");
}

}  // namespace qembed
