#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>

#include "esav/error.hpp"

namespace esav {

/// Point samples on the periodic grid, nx rows (x index) by ny columns (y index), row-major.
using Field = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Half-spectrum coefficients of a real field: nx rows by ny/2+1 columns (non-negative ky only).
using SpectralField = Eigen::Array<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Uniform periodic grid on [0,lx) x [0,ly).
struct Grid {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;

  Grid() = default;
  Grid(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_) { validate(); }

  /// Square 2*pi-periodic box with n points per side.
  static Grid square(int n, double length = 2.0 * std::numbers::pi) { return Grid(n, n, length, length); }

  void validate() const {
    if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0)
      throw InvalidArgument("grid sizes must be even and >= 4, got " + std::to_string(nx) + "x" +
                            std::to_string(ny));
    if (!(std::isfinite(lx) && std::isfinite(ly) && lx > 0.0 && ly > 0.0))
      throw InvalidArgument("grid extents must be finite and positive");
  }

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  double cell_area() const { return hx() * hy(); }
  Eigen::Index size() const { return Eigen::Index(nx) * ny; }
  int spectral_cols() const { return ny / 2 + 1; }

  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }

  /// Signed integer frequency of index i on an n-point axis, in (-n/2, n/2].
  static int wrap(int i, int n) { return i <= n / 2 ? i : i - n; }

  double kx(int i) const { return 2.0 * std::numbers::pi * wrap(i, nx) / lx; }
  double ky(int j) const { return 2.0 * std::numbers::pi * wrap(j, ny) / ly; }

  bool operator==(const Grid& other) const {
    return nx == other.nx && ny == other.ny && lx == other.lx && ly == other.ly;
  }

  Field zeros() const { return Field::Zero(nx, ny); }
  Field constant(double value) const { return Field::Constant(nx, ny, value); }

  /// Samples fn(x, y) at the grid nodes.
  template <typename Fn>
  Field sample(Fn&& fn) const {
    Field f(nx, ny);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) f(i, j) = fn(x(i), y(j));
    return f;
  }

  template <typename Derived>
  void check_shape(const Eigen::ArrayBase<Derived>& f, const char* what = "field") const {
    if (f.rows() != nx || f.cols() != ny)
      throw InvalidArgument(std::string(what) + " shape " + std::to_string(f.rows()) + "x" +
                            std::to_string(f.cols()) + " does not match grid " + std::to_string(nx) +
                            "x" + std::to_string(ny));
  }

  void check_spectral_shape(const SpectralField& f) const {
    if (f.rows() != nx || f.cols() != spectral_cols())
      throw InvalidArgument("spectral field shape does not match grid");
  }
};

}  // namespace esav
