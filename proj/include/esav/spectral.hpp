#pragma once

#include <fftw3.h>

#include <memory>
#include <utility>

#include "esav/grid.hpp"

namespace esav {

/// Real Fourier symbol over the half spectrum. Symbols must be even in k (s(k) = s(-k)), which
/// holds for every operator built from |k|^2; the half spectrum then determines the full operator.
class Multiplier {
 public:
  using Symbol = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Multiplier() = default;
  Multiplier(const Grid& grid, Symbol symbol);

  /// Evaluates fn(kx, ky) at every retained wavenumber pair.
  template <typename Fn>
  static Multiplier from_function(const Grid& grid, Fn&& fn) {
    Symbol s(grid.nx, grid.spectral_cols());
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 0; j < grid.spectral_cols(); ++j) s(i, j) = fn(grid.kx(i), grid.ky(j));
    return Multiplier(grid, std::move(s));
  }

  static Multiplier identity(const Grid& grid);
  static Multiplier constant(const Grid& grid, double value);
  /// |k|^2, the symbol of -Laplacian.
  static Multiplier wavenumber_squared(const Grid& grid);
  /// -|k|^2.
  static Multiplier laplacian(const Grid& grid);

  const Grid& grid() const { return grid_; }
  const Symbol& symbol() const { return symbol_; }
  double operator()(int i, int j) const { return symbol_(i, j); }

  Multiplier operator*(const Multiplier& other) const;
  Multiplier operator+(const Multiplier& other) const;
  Multiplier operator*(double scale) const;
  friend Multiplier operator*(double scale, const Multiplier& m) { return m * scale; }

 private:
  Grid grid_;
  Symbol symbol_;
};

/// FFTW-backed real-to-complex transform pair owning its plans and scratch.
/// Forward is unnormalized; backward carries the 1/(nx*ny) factor.
/// Not shareable between threads; create one per execution context.
class Fourier {
 public:
  explicit Fourier(const Grid& grid);
  ~Fourier();
  Fourier(const Fourier& other) : Fourier(other.grid_) {}
  Fourier& operator=(const Fourier&) = delete;
  Fourier(Fourier&&) noexcept;
  Fourier& operator=(Fourier&&) noexcept;

  const Grid& grid() const { return grid_; }

  SpectralField forward(const Field& f);
  void forward(const Field& f, SpectralField& out);
  Field backward(const SpectralField& coeffs);
  void backward(const SpectralField& coeffs, Field& out);

 private:
  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
};

/// backward(symbol .* forward(f)).
Field apply_multiplier(Fourier& fft, const Multiplier& m, const Field& f);

/// Solves (a I + b Op(m)) u = rhs by pointwise division in coefficient space.
/// Throws SingularOperator naming the first wavenumber where a + b*symbol vanishes.
Field solve_shifted(Fourier& fft, const Multiplier& m, double a, double b, const Field& rhs);

/// Coefficient-space variant of solve_shifted; divides in place.
void divide_shifted(const Multiplier& m, double a, double b, SpectralField& coeffs);

/// Spectral gradient. Odd-order symbols vanish on the Nyquist row/column.
std::pair<Field, Field> gradient(Fourier& fft, const Field& f);
std::pair<Field, Field> gradient_from_coefficients(Fourier& fft, const SpectralField& coeffs);
/// Coefficients of div(fx, fy).
SpectralField divergence_coefficients(Fourier& fft, const Field& fx, const Field& fy);
/// Coefficients of div(rho grad psi) given the coefficients of psi.
SpectralField div_rho_grad_coefficients(Fourier& fft, const Field& rho, const SpectralField& psi);
Field divergence(Fourier& fft, const Field& fx, const Field& fy);

/// div(rho grad f): gradient spectrally, product in physical space, divergence spectrally.
Field var_coeff_div_grad(Fourier& fft, const Field& rho, const Field& f);

/// |grad f|^2 sampled pointwise.
Field gradient_norm_squared(Fourier& fft, const Field& f);

/// Rectangle rule hx*hy*sum(f).
double integral(const Grid& grid, const Field& f);
double inner(const Grid& grid, const Field& f, const Field& g);
/// Discrete L2 norm sqrt(hx*hy*sum f^2).
double l2_norm(const Grid& grid, const Field& f);

/// inner(f, g) evaluated from the coefficients of f and g by Parseval.
double spectral_inner(const Grid& grid, const SpectralField& a, const SpectralField& b);

/// inner(f, Op(m) f) evaluated from coefficients by Parseval.
double quadratic_form(const Multiplier& m, const SpectralField& coeffs);

}  // namespace esav
