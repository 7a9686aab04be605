#include "esav/surfactant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace esav {

namespace {

using cplx = std::complex<double>;

double exp_checked(double argument, StepDiagnostics& diag) {
  diag.max_exponent_arg = std::max(diag.max_exponent_arg, std::abs(argument));
  if (!std::isfinite(argument) || argument > kMaxExponent) {
    std::ostringstream msg;
    msg << "auxiliary exponent " << argument << " exceeds " << kMaxExponent;
    throw OverflowGuard(msg.str(), argument);
  }
  return std::exp(argument);
}

/// L2 norm of a field from its half-spectrum coefficients.
double spectral_norm(const Multiplier& identity, const SpectralField& c) {
  return std::sqrt(std::max(0.0, quadratic_form(identity, c)));
}

}  // namespace

SurfactantFlow::SurfactantFlow(const SurfactantSpec& spec, const Grid& grid)
    : spec_(spec), grid_(grid), fft_(grid), k2_(Multiplier::wavenumber_squared(grid)),
      l_phi_(l_phi_symbol(spec, grid)), l_rho_(l_rho_symbol(spec, grid)) {
  spec_.validate();
}

SurfactantState make_surfactant_state(SurfactantFlow& flow, Field phi0, Field rho0) {
  const Grid& grid = flow.grid();
  grid.check_shape(phi0, "initial phi");
  grid.check_shape(rho0, "initial rho");
  if (!phi0.allFinite() || !rho0.allFinite()) throw InvalidArgument("initial fields must be finite");
  SurfactantState state;
  state.s_r = e_f(grid, phi0);
  state.s_q = e_g(flow.spec(), grid, rho0);
  state.phi = std::move(phi0);
  state.rho = std::move(rho0);
  return state;
}

double ledger_identity_residual(const Grid& grid, const Field& grad2_old, const Field& grad2_new,
                                const Field& rho_old, const Field& rho_new) {
  const double a = inner(grid, grad2_old, rho_new - rho_old);
  const double b = inner(grid, grad2_new - grad2_old, rho_new);
  const double c = inner(grid, grad2_new, rho_new);
  const double d = inner(grid, grad2_old, rho_old);
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  const double diff = std::abs((a + b) - (c - d));
  return scale > 0.0 ? diff / scale : diff;
}

StepResult<SurfactantState> surfactant_step(SurfactantFlow& flow, const SurfactantState& state, double dt,
                                            const InnerSolverConfig& solver) {
  if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidArgument("time step must be finite and positive");
  if (!(solver.tol > 0.0) || solver.max_iters < 1) throw InvalidArgument("invalid inner solver settings");
  const SurfactantSpec& spec = flow.spec();
  const Grid& grid = flow.grid();
  Fourier& fft = flow.fourier();
  const auto k2 = flow.k2().symbol().cast<cplx>();

  StepResult<SurfactantState> out;
  StepDiagnostics& diag = out.diagnostics;
  SurfactantState& next = out.state;

  // Step I: rho
  const Field d = exp_checked(state.s_q - e_g(spec, grid, state.rho), diag) * surfactant_g_prime(spec, state.rho);
  const SpectralField phi_hat = fft.forward(state.phi);
  const Field grad2_old = [&] {
    auto [gx, gy] = gradient_from_coefficients(fft, phi_hat);
    return Field(gx.square() + gy.square());
  }();
  SpectralField rho_hat = fft.forward(state.rho);
  rho_hat -= (dt * spec.mobility_rho) * (k2 * fft.forward(spec.weight_g() * d - spec.theta * grad2_old));
  divide_shifted(flow.k2() * flow.l_rho(), 1.0, dt * spec.mobility_rho, rho_hat);
  ++diag.linear_solves_performed;
  next.rho = fft.backward(rho_hat);
  next.s_q = state.s_q + inner(grid, d, next.rho - state.rho);

  // Step II: phi, variable-coefficient coupling lagged one fixed-point iterate
  const Field b = exp_checked(state.s_r - e_f(grid, state.phi), diag) * surfactant_f_prime(state.phi);
  const double coef = dt * spec.mobility_phi;
  SpectralField base = phi_hat;
  base -= (coef * spec.weight_f()) * (k2 * fft.forward(b));
  const Multiplier denominator_symbol = flow.k2() * flow.l_phi();
  const Multiplier identity = Multiplier::identity(grid);

  SpectralField iterate = phi_hat;
  SpectralField update;
  double last_update = 0.0;
  int iters = 0;
  bool converged = false;
  while (iters < solver.max_iters) {
    SpectralField coupling = div_rho_grad_coefficients(fft, next.rho, phi_hat + iterate);
    SpectralField candidate = base - (coef * spec.theta) * (k2 * coupling);
    divide_shifted(denominator_symbol, 1.0, coef, candidate);
    ++iters;
    update = candidate - iterate;
    const double norm = spectral_norm(identity, candidate);
    last_update = spectral_norm(identity, update);
    if (norm > 0.0) last_update /= norm;
    iterate = std::move(candidate);
    if (last_update < solver.tol) {
      converged = true;
      break;
    }
  }
  diag.inner_solver_iterations = iters;
  diag.inner_final_update = last_update;
  diag.linear_solves_performed += iters;
  if (!converged) {
    std::ostringstream msg;
    msg << "surfactant phi solve did not converge in " << iters << " iterations (last relative update "
        << last_update << ")";
    throw IterationLimit(msg.str(), iters, last_update);
  }
  next.phi = fft.backward(iterate);
  next.s_r = state.s_r + inner(grid, b, next.phi - state.phi);
  next.step_index = state.step_index + 1;

  const Field grad2_new = [&] {
    auto [gx, gy] = gradient_from_coefficients(fft, iterate);
    return Field(gx.square() + gy.square());
  }();
  diag.ledger_identity_residual = ledger_identity_residual(grid, grad2_old, grad2_new, state.rho, next.rho);

  const double quadratic = 0.5 * quadratic_form(flow.l_phi(), iterate) + 0.5 * quadratic_form(flow.l_rho(), rho_hat);
  const double coupling = -spec.theta * inner(grid, grad2_new, next.rho);
  diag.original_energy = quadratic + coupling + spec.weight_f() * e_f(grid, next.phi) +
                         spec.weight_g() * e_g(spec, grid, next.rho);
  diag.modified_energy = quadratic + coupling + spec.weight_f() * next.s_r + spec.weight_g() * next.s_q;
  diag.mass = integral(grid, next.phi);
  diag.mass_rho = integral(grid, next.rho);
  return out;
}

double modified_energy(SurfactantFlow& flow, const SurfactantState& state) {
  const SurfactantSpec& spec = flow.spec();
  const Grid& grid = flow.grid();
  Fourier& fft = flow.fourier();
  const double quadratic = 0.5 * quadratic_form(flow.l_phi(), fft.forward(state.phi)) +
                           0.5 * quadratic_form(flow.l_rho(), fft.forward(state.rho));
  const double coupling = -spec.theta * inner(grid, gradient_norm_squared(fft, state.phi), state.rho);
  return quadratic + coupling + spec.weight_f() * state.s_r + spec.weight_g() * state.s_q;
}

}  // namespace esav
