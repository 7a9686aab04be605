#include "esav/spectral.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace esav {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans are made on allocator-aligned buffers; new-array execution needs the same alignment.
bool aligned(const void* p) { return fftw_alignment_of(reinterpret_cast<double*>(const_cast<void*>(p))) == 0; }

void check_multiplier_grid(const Multiplier& m, const Grid& grid) {
  if (!(m.grid() == grid)) throw InvalidArgument("multiplier grid does not match field grid");
}

}  // namespace

Multiplier::Multiplier(const Grid& grid, Symbol symbol) : grid_(grid), symbol_(std::move(symbol)) {
  if (symbol_.rows() != grid_.nx || symbol_.cols() != grid_.spectral_cols())
    throw InvalidArgument("multiplier symbol shape does not match grid half spectrum");
  if (!symbol_.allFinite()) throw InvalidArgument("multiplier symbol must be finite");
}

Multiplier Multiplier::identity(const Grid& grid) { return constant(grid, 1.0); }

Multiplier Multiplier::constant(const Grid& grid, double value) {
  return Multiplier(grid, Symbol::Constant(grid.nx, grid.spectral_cols(), value));
}

Multiplier Multiplier::wavenumber_squared(const Grid& grid) {
  return from_function(grid, [](double kx, double ky) { return kx * kx + ky * ky; });
}

Multiplier Multiplier::laplacian(const Grid& grid) { return wavenumber_squared(grid) * -1.0; }

Multiplier Multiplier::operator*(const Multiplier& other) const {
  check_multiplier_grid(other, grid_);
  return Multiplier(grid_, symbol_ * other.symbol_);
}

Multiplier Multiplier::operator+(const Multiplier& other) const {
  check_multiplier_grid(other, grid_);
  return Multiplier(grid_, symbol_ + other.symbol_);
}

Multiplier Multiplier::operator*(double scale) const { return Multiplier(grid_, symbol_ * scale); }

struct Fourier::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  SpectralField scratch;  // c2r destroys its input
  Field real_scratch;     // used only when a caller's buffer is not SIMD aligned

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

Fourier::Fourier(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  grid_.validate();
  plans_->real_scratch.resize(grid_.nx, grid_.ny);
  plans_->scratch.resize(grid_.nx, grid_.spectral_cols());
  auto* cplx = reinterpret_cast<fftw_complex*>(plans_->scratch.data());
  double* real = plans_->real_scratch.data();
  if (!aligned(real) || !aligned(cplx)) throw InvalidArgument("allocator returned unaligned FFT scratch");
  // FFTW_ESTIMATE keeps the plan (and hence roundoff) identical from run to run.
  const unsigned flags = FFTW_ESTIMATE;
  std::lock_guard lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c_2d(grid_.nx, grid_.ny, real, cplx, flags);
  plans_->c2r = fftw_plan_dft_c2r_2d(grid_.nx, grid_.ny, cplx, real, flags);
  if (!plans_->r2c || !plans_->c2r) throw InvalidArgument("FFTW plan creation failed");
}

Fourier::~Fourier() = default;
Fourier::Fourier(Fourier&&) noexcept = default;
Fourier& Fourier::operator=(Fourier&&) noexcept = default;

void Fourier::forward(const Field& f, SpectralField& out) {
  grid_.check_shape(f);
  out.resize(grid_.nx, grid_.spectral_cols());
  const double* in = f.data();
  if (!aligned(in)) {
    plans_->real_scratch = f;
    in = plans_->real_scratch.data();
  }
  if (!aligned(out.data())) {
    fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(plans_->scratch.data()));
    out = plans_->scratch;
    return;
  }
  // r2c does not modify its input
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out.data()));
}

SpectralField Fourier::forward(const Field& f) {
  SpectralField out;
  forward(f, out);
  return out;
}

void Fourier::backward(const SpectralField& coeffs, Field& out) {
  grid_.check_spectral_shape(coeffs);
  out.resize(grid_.nx, grid_.ny);
  plans_->scratch = coeffs;
  if (aligned(out.data())) {
    fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(plans_->scratch.data()), out.data());
  } else {
    fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(plans_->scratch.data()),
                         plans_->real_scratch.data());
    out = plans_->real_scratch;
  }
  out *= 1.0 / static_cast<double>(grid_.size());
}

Field Fourier::backward(const SpectralField& coeffs) {
  Field out;
  backward(coeffs, out);
  return out;
}

Field apply_multiplier(Fourier& fft, const Multiplier& m, const Field& f) {
  check_multiplier_grid(m, fft.grid());
  SpectralField c = fft.forward(f);
  c *= m.symbol().cast<std::complex<double>>();
  return fft.backward(c);
}

void divide_shifted(const Multiplier& m, double a, double b, SpectralField& coeffs) {
  const Grid& grid = m.grid();
  grid.check_spectral_shape(coeffs);
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.spectral_cols(); ++j) {
      const double den = a + b * m(i, j);
      if (den == 0.0 || !std::isfinite(den)) {
        std::ostringstream msg;
        msg << "shifted operator " << a << " + " << b << "*symbol is singular at wavenumber (kx, ky) = ("
            << grid.kx(i) << ", " << grid.ky(j) << ")";
        throw SingularOperator(msg.str(), grid.kx(i), grid.ky(j));
      }
      coeffs(i, j) /= den;
    }
  }
}

Field solve_shifted(Fourier& fft, const Multiplier& m, double a, double b, const Field& rhs) {
  check_multiplier_grid(m, fft.grid());
  SpectralField c = fft.forward(rhs);
  divide_shifted(m, a, b, c);
  return fft.backward(c);
}

namespace {

// i*k with the Nyquist entry dropped, on the full (x) and half (y) axes.
double odd_kx(const Grid& g, int i) { return i == g.nx / 2 ? 0.0 : g.kx(i); }
double odd_ky(const Grid& g, int j) { return j == g.ny / 2 ? 0.0 : g.ky(j); }

}  // namespace

std::pair<Field, Field> gradient_from_coefficients(Fourier& fft, const SpectralField& c) {
  const Grid& g = fft.grid();
  g.check_spectral_shape(c);
  SpectralField cx(c.rows(), c.cols()), cy(c.rows(), c.cols());
  const std::complex<double> I(0.0, 1.0);
  for (int i = 0; i < g.nx; ++i) {
    const double kx = odd_kx(g, i);
    for (int j = 0; j < g.spectral_cols(); ++j) {
      cx(i, j) = I * kx * c(i, j);
      cy(i, j) = I * odd_ky(g, j) * c(i, j);
    }
  }
  return {fft.backward(cx), fft.backward(cy)};
}

std::pair<Field, Field> gradient(Fourier& fft, const Field& f) {
  return gradient_from_coefficients(fft, fft.forward(f));
}

SpectralField divergence_coefficients(Fourier& fft, const Field& fx, const Field& fy) {
  const Grid& g = fft.grid();
  SpectralField cx = fft.forward(fx);
  const SpectralField cy = fft.forward(fy);
  const std::complex<double> I(0.0, 1.0);
  for (int i = 0; i < g.nx; ++i) {
    const double kx = odd_kx(g, i);
    for (int j = 0; j < g.spectral_cols(); ++j) cx(i, j) = I * (kx * cx(i, j) + odd_ky(g, j) * cy(i, j));
  }
  return cx;
}

Field divergence(Fourier& fft, const Field& fx, const Field& fy) {
  return fft.backward(divergence_coefficients(fft, fx, fy));
}

SpectralField div_rho_grad_coefficients(Fourier& fft, const Field& rho, const SpectralField& psi) {
  fft.grid().check_shape(rho, "coefficient");
  auto [px, py] = gradient_from_coefficients(fft, psi);
  px *= rho;
  py *= rho;
  return divergence_coefficients(fft, px, py);
}

Field var_coeff_div_grad(Fourier& fft, const Field& rho, const Field& f) {
  return fft.backward(div_rho_grad_coefficients(fft, rho, fft.forward(f)));
}

Field gradient_norm_squared(Fourier& fft, const Field& f) {
  auto [fx, fy] = gradient(fft, f);
  return fx.square() + fy.square();
}

double integral(const Grid& grid, const Field& f) {
  grid.check_shape(f);
  return grid.cell_area() * f.sum();
}

double inner(const Grid& grid, const Field& f, const Field& g) {
  grid.check_shape(f);
  grid.check_shape(g);
  return grid.cell_area() * (f * g).sum();
}

double l2_norm(const Grid& grid, const Field& f) { return std::sqrt(inner(grid, f, f)); }

double spectral_inner(const Grid& g, const SpectralField& a, const SpectralField& b) {
  g.check_spectral_shape(a);
  g.check_spectral_shape(b);
  const int last = g.spectral_cols() - 1;
  double sum = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j <= last; ++j) {
      const double weight = (j == 0 || j == last) ? 1.0 : 2.0;
      sum += weight * (a(i, j).real() * b(i, j).real() + a(i, j).imag() * b(i, j).imag());
    }
  }
  return g.cell_area() * sum / static_cast<double>(g.size());
}

double quadratic_form(const Multiplier& m, const SpectralField& coeffs) {
  const Grid& g = m.grid();
  g.check_spectral_shape(coeffs);
  const int last = g.spectral_cols() - 1;
  double sum = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j <= last; ++j) {
      // interior ky columns stand for the conjugate pair (ky, -ky)
      const double weight = (j == 0 || j == last) ? 1.0 : 2.0;
      sum += weight * m(i, j) * std::norm(coeffs(i, j));
    }
  }
  return g.cell_area() * sum / static_cast<double>(g.size());
}

}  // namespace esav
