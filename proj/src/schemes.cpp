#include "esav/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace esav {

namespace {

using cplx = std::complex<double>;

void check_dt(double dt) {
  if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidArgument("time step must be finite and positive");
}

/// Coefficients of phi + coef * G b, transforming once when G is a constant.
SpectralField rhs_coefficients(GradientFlow& flow, const Field& phi, const Field& b, double coef) {
  Fourier& fft = flow.fourier();
  const auto& g = flow.g().symbol();
  if ((g == g(0, 0)).all()) return fft.forward(phi + (coef * g(0, 0)) * b);
  SpectralField c = fft.forward(phi);
  c += coef * (g.cast<cplx>() * fft.forward(b));
  return c;
}

double guarded_exp(double argument, StepDiagnostics* diag) {
  if (diag) diag->max_exponent_arg = std::max(diag->max_exponent_arg, std::abs(argument));
  if (!std::isfinite(argument) || argument > kMaxExponent) {
    std::ostringstream msg;
    msg << "auxiliary exponent s - E1/C = " << argument << " exceeds " << kMaxExponent
        << "; increase the constant C";
    throw OverflowGuard(msg.str(), argument);
  }
  return std::exp(argument);
}

void fill_energies(GradientFlow& flow, const SpectralField& coeffs, const Field& phi, double aux_energy,
                   StepDiagnostics& diag) {
  const double quadratic = 0.5 * quadratic_form(flow.l(), coeffs);
  diag.original_energy = quadratic + flow.e1(phi);
  diag.modified_energy = quadratic + aux_energy;
  diag.mass = integral(flow.grid(), phi);
}

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

/// ||lhs - rhs|| / (||phi^{n+1} - phi^n|| + ||phi^n||) for field equations.
double field_residual(const Grid& grid, const Field& residual, const Field& before, const Field& after) {
  return relative(l2_norm(grid, residual), l2_norm(grid, after - before) + l2_norm(grid, before));
}

}  // namespace

GradientFlow::GradientFlow(const ModelSpec& model, const Grid& grid)
    : model_(model), grid_(grid), fft_(grid), l_(l_symbol(model, grid)), g_(g_symbol(model, grid)),
      gl_(g_ * l_) {
  model_.validate();
}

Field GradientFlow::nonlinear_force(const Field& phi) const {
  if (model_.kind == ModelKind::LinearTest) return Field::Zero(phi.rows(), phi.cols());
  return model_.nonlinear_scale() * f_prime(model_, phi);
}

void GradientFlow::solve(double tau, SpectralField& coeffs) {
  grid_.check_spectral_shape(coeffs);
  auto it = std::find_if(inverse_cache_.begin(), inverse_cache_.end(),
                         [tau](const auto& entry) { return entry.first == tau; });
  if (it == inverse_cache_.end()) {
    SpectralField ones = SpectralField::Ones(grid_.nx, grid_.spectral_cols());
    divide_shifted(gl_, 1.0, -tau, ones);
    if (inverse_cache_.size() >= 4) inverse_cache_.erase(inverse_cache_.begin());
    inverse_cache_.emplace_back(tau, ones.real());
    it = std::prev(inverse_cache_.end());
  }
  coeffs *= it->second.cast<cplx>();
}

double default_esav_constant(double e1_initial) { return std::max(1.0, std::abs(e1_initial)); }

EsavState make_esav_state(GradientFlow& flow, Field phi0, std::optional<double> c_scale) {
  flow.grid().check_shape(phi0, "initial field");
  if (!phi0.allFinite()) throw InvalidArgument("initial field must be finite");
  const double e1_0 = flow.e1(phi0);
  const double c = c_scale.value_or(default_esav_constant(e1_0));
  if (!(std::isfinite(c) && c > 0.0)) throw InvalidArgument("E-SAV constant C must be positive");
  EsavState state;
  state.phi = std::move(phi0);
  state.c_scale = c;
  state.s = e1_0 / c;
  return state;
}

SavState make_sav_state(GradientFlow& flow, Field phi0, double c_shift) {
  flow.grid().check_shape(phi0, "initial field");
  if (!phi0.allFinite()) throw InvalidArgument("initial field must be finite");
  if (!(std::isfinite(c_shift) && c_shift >= 0.0)) throw InvalidArgument("SAV constant C must be >= 0");
  const double radicand = flow.e1(phi0) + c_shift;
  if (!(radicand > 0.0)) throw InvalidShift("E1(phi0) + C must be positive for the SAV variable");
  SavState state;
  state.phi = std::move(phi0);
  state.c_shift = c_shift;
  state.r = std::sqrt(radicand);
  return state;
}

Field bratio(const EsavState& state, GradientFlow& flow, const Field& phi_eval, double s_eval,
             StepDiagnostics* diag) {
  const double argument = s_eval - flow.e1(phi_eval) / state.c_scale;
  return guarded_exp(argument, diag) * flow.nonlinear_force(phi_eval);
}

StepResult<EsavState> esav_step_first(GradientFlow& flow, const EsavState& state, double dt) {
  check_dt(dt);
  StepResult<EsavState> out;
  StepDiagnostics& diag = out.diagnostics;
  const Field b = bratio(state, flow, state.phi, state.s, &diag);

  SpectralField c = rhs_coefficients(flow, state.phi, b, dt);
  flow.solve(dt, c);
  ++diag.linear_solves_performed;

  EsavState& next = out.state;
  next.phi = flow.fourier().backward(c);
  next.s = state.s + inner(flow.grid(), b, next.phi - state.phi) / state.c_scale;
  next.c_scale = state.c_scale;
  next.step_index = state.step_index + 1;
  fill_energies(flow, c, next.phi, next.c_scale * next.s, diag);
  return out;
}

CnPredictor esav_cn_bootstrap(GradientFlow& flow, const EsavState& state0, double dt) {
  check_dt(dt);
  const Field force = flow.nonlinear_force(state0.phi);
  SpectralField c = rhs_coefficients(flow, state0.phi, force, 0.5 * dt);
  flow.solve(0.5 * dt, c);
  CnPredictor p;
  p.phi_half = flow.fourier().backward(c);
  p.s_half = flow.e1(p.phi_half) / state0.c_scale;
  return p;
}

namespace {

/// Extrapolated b~ for a Crank-Nicolson E-SAV step; phi_eval receives phi~^{n+1/2}.
Field esav_cn_force(GradientFlow& flow, const EsavState& state, const std::optional<CnPredictor>& predictor,
                    StepDiagnostics* diag) {
  if (state.step_index == 0 || !state.phi_prev || !state.s_prev) {
    if (!predictor) throw InvalidArgument("first Crank-Nicolson step requires a bootstrap predictor");
    return bratio(state, flow, predictor->phi_half, predictor->s_half, diag);
  }
  const Field phi_tilde = 1.5 * state.phi - 0.5 * *state.phi_prev;
  const double e = flow.e1(phi_tilde) / state.c_scale;
  // r^n e^{-e} (3/2 - 1/2 r^{n-1}/r^n): the sign lives in the bracket, which cannot underflow
  const double shape = *state.s_prev - state.s;
  const double bracket = 1.5 - 0.5 * std::exp(std::min(shape, kMaxExponent));
  const double ratio = bracket > 0.0 ? guarded_exp(state.s - e, diag) * bracket : bracket;
  if (!(bracket > 0.0)) {
    std::ostringstream msg;
    msg << "extrapolated auxiliary ratio 3/2 r^n - 1/2 r^{n-1} = " << ratio << " is not positive";
    throw ExtrapolationDegenerate(msg.str(), ratio);
  }
  return ratio * flow.nonlinear_force(phi_tilde);
}

}  // namespace

StepResult<EsavState> esav_step_cn(GradientFlow& flow, const EsavState& state, double dt,
                                   const std::optional<CnPredictor>& predictor) {
  check_dt(dt);
  StepResult<EsavState> out;
  StepDiagnostics& diag = out.diagnostics;

  std::optional<CnPredictor> boot = predictor;
  if (state.step_index == 0 && !boot) {
    boot = esav_cn_bootstrap(flow, state, dt);
    ++diag.linear_solves_performed;
  }
  const Field b = esav_cn_force(flow, state, boot, &diag);

  // (I - dt/2 GL) phi^{n+1} = (I + dt/2 GL) phi^n + dt G b
  Fourier& fft = flow.fourier();
  SpectralField c = fft.forward(state.phi);
  c += (0.5 * dt) * (flow.gl().symbol().cast<cplx>() * c);
  c += dt * (flow.g().symbol().cast<cplx>() * fft.forward(b));
  flow.solve(0.5 * dt, c);
  ++diag.linear_solves_performed;

  EsavState& next = out.state;
  next.phi = fft.backward(c);
  next.s = state.s + inner(flow.grid(), b, next.phi - state.phi) / state.c_scale;
  next.phi_prev = state.phi;
  next.s_prev = state.s;
  next.c_scale = state.c_scale;
  next.step_index = state.step_index + 1;
  fill_energies(flow, c, next.phi, next.c_scale * next.s, diag);
  return out;
}

namespace {

Field sav_force(GradientFlow& flow, const Field& phi_eval, double c_shift) {
  const double radicand = flow.e1(phi_eval) + c_shift;
  if (!(radicand > 0.0)) {
    std::ostringstream msg;
    msg << "E1 + C = " << radicand << " is not positive; increase the SAV constant C";
    throw InvalidShift(msg.str());
  }
  return flow.nonlinear_force(phi_eval) / std::sqrt(radicand);
}

/// Resolves X = (b, phi^{n+1}) from phi^{n+1} = u1 + X u2; returns phi^{n+1} coefficients.
/// Inner products with b are taken in coefficient space, so only phi^{n+1} is transformed back.
SpectralField sav_combine(GradientFlow& flow, const SpectralField& b_hat, const SpectralField& c1,
                          const SpectralField& c2, Field& phi_next) {
  const Grid& grid = flow.grid();
  const double pivot = 1.0 - spectral_inner(grid, b_hat, c2);
  if (pivot == 0.0 || !std::isfinite(pivot)) throw DegenerateReduction("SAV 1x1 reduction has a zero pivot");
  const double x = spectral_inner(grid, b_hat, c1) / pivot;
  SpectralField c = c1 + x * c2;
  phi_next = flow.fourier().backward(c);
  return c;
}

}  // namespace

StepResult<SavState> sav_step_first(GradientFlow& flow, const SavState& state, double dt) {
  check_dt(dt);
  StepResult<SavState> out;
  StepDiagnostics& diag = out.diagnostics;
  const Grid& grid = flow.grid();
  Fourier& fft = flow.fourier();
  const Field b = sav_force(flow, state.phi, state.c_shift);

  // (I - dt GL) phi^{n+1} = phi^n + dt (r^n - 1/2 (b, phi^n)) G b + dt/2 (b, phi^{n+1}) G b
  const SpectralField b_hat = fft.forward(b);
  const SpectralField gb = flow.g().symbol().cast<cplx>() * b_hat;
  SpectralField c1 = fft.forward(state.phi);
  c1 += (dt * (state.r - 0.5 * inner(grid, b, state.phi))) * gb;
  flow.solve(dt, c1);
  SpectralField c2 = (0.5 * dt) * gb;
  flow.solve(dt, c2);
  diag.linear_solves_performed += 2;

  SavState& next = out.state;
  const SpectralField c = sav_combine(flow, b_hat, c1, c2, next.phi);
  next.r = state.r + 0.5 * inner(grid, b, next.phi - state.phi);
  next.c_shift = state.c_shift;
  next.step_index = state.step_index + 1;
  fill_energies(flow, c, next.phi, next.r * next.r, diag);
  return out;
}

CnPredictor sav_cn_bootstrap(GradientFlow& flow, const SavState& state0, double dt) {
  check_dt(dt);
  const Field force = flow.nonlinear_force(state0.phi);
  SpectralField c = rhs_coefficients(flow, state0.phi, force, 0.5 * dt);
  flow.solve(0.5 * dt, c);
  CnPredictor p;
  p.phi_half = flow.fourier().backward(c);
  const double radicand = flow.e1(p.phi_half) + state0.c_shift;
  p.s_half = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
  return p;
}

StepResult<SavState> sav_step_cn(GradientFlow& flow, const SavState& state, double dt,
                                 const std::optional<CnPredictor>& predictor) {
  check_dt(dt);
  StepResult<SavState> out;
  StepDiagnostics& diag = out.diagnostics;
  const Grid& grid = flow.grid();
  Fourier& fft = flow.fourier();

  Field b;
  if (state.step_index == 0 || !state.phi_prev) {
    std::optional<CnPredictor> boot = predictor;
    if (!boot) {
      boot = sav_cn_bootstrap(flow, state, dt);
      ++diag.linear_solves_performed;
    }
    b = sav_force(flow, boot->phi_half, state.c_shift);
  } else {
    b = sav_force(flow, 1.5 * state.phi - 0.5 * *state.phi_prev, state.c_shift);
  }

  // (I - dt/2 GL) phi^{n+1} = (I + dt/2 GL) phi^n + dt (r^n - 1/4 (b, phi^n)) G b + dt/4 (b, phi^{n+1}) G b
  const SpectralField b_hat = fft.forward(b);
  const SpectralField gb = flow.g().symbol().cast<cplx>() * b_hat;
  SpectralField c1 = fft.forward(state.phi);
  c1 += (0.5 * dt) * (flow.gl().symbol().cast<cplx>() * c1);
  c1 += (dt * (state.r - 0.25 * inner(grid, b, state.phi))) * gb;
  flow.solve(0.5 * dt, c1);
  SpectralField c2 = (0.25 * dt) * gb;
  flow.solve(0.5 * dt, c2);
  diag.linear_solves_performed += 2;

  SavState& next = out.state;
  const SpectralField c = sav_combine(flow, b_hat, c1, c2, next.phi);
  next.r = state.r + 0.5 * inner(grid, b, next.phi - state.phi);
  next.phi_prev = state.phi;
  next.r_prev = state.r;
  next.c_shift = state.c_shift;
  next.step_index = state.step_index + 1;
  fill_energies(flow, c, next.phi, next.r * next.r, diag);
  return out;
}

double modified_energy(GradientFlow& flow, const EsavState& state) {
  return 0.5 * inner(flow.grid(), state.phi, apply_multiplier(flow.fourier(), flow.l(), state.phi)) +
         state.c_scale * state.s;
}

double modified_energy(GradientFlow& flow, const SavState& state) {
  return 0.5 * inner(flow.grid(), state.phi, apply_multiplier(flow.fourier(), flow.l(), state.phi)) +
         state.r * state.r;
}

double esav_first_residual(GradientFlow& flow, const EsavState& before, const EsavState& after, double dt) {
  const Grid& grid = flow.grid();
  Fourier& fft = flow.fourier();
  const Field b = bratio(before, flow, before.phi, before.s);
  const Field mu = apply_multiplier(fft, flow.l(), after.phi) + b;
  const Field res = (after.phi - before.phi) - dt * apply_multiplier(fft, flow.g(), mu);
  const double aux = std::abs((after.s - before.s) - inner(grid, b, after.phi - before.phi) / before.c_scale);
  return std::max(field_residual(grid, res, before.phi, after.phi),
                  relative(aux, std::abs(after.s) + std::abs(before.s)));
}

double esav_cn_residual(GradientFlow& flow, const EsavState& before, const EsavState& after, double dt,
                        const std::optional<CnPredictor>& predictor) {
  const Grid& grid = flow.grid();
  Fourier& fft = flow.fourier();
  std::optional<CnPredictor> boot = predictor;
  if (before.step_index == 0 && !boot) boot = esav_cn_bootstrap(flow, before, dt);
  const Field b = esav_cn_force(flow, before, boot, nullptr);
  const Field mu = apply_multiplier(fft, flow.l(), 0.5 * (after.phi + before.phi)) + b;
  const Field res = (after.phi - before.phi) - dt * apply_multiplier(fft, flow.g(), mu);
  const double aux = std::abs((after.s - before.s) - inner(grid, b, after.phi - before.phi) / before.c_scale);
  return std::max(field_residual(grid, res, before.phi, after.phi),
                  relative(aux, std::abs(after.s) + std::abs(before.s)));
}

double sav_first_residual(GradientFlow& flow, const SavState& before, const SavState& after, double dt) {
  const Grid& grid = flow.grid();
  Fourier& fft = flow.fourier();
  const Field b = sav_force(flow, before.phi, before.c_shift);
  const Field mu = apply_multiplier(fft, flow.l(), after.phi) + after.r * b;
  const Field res = (after.phi - before.phi) - dt * apply_multiplier(fft, flow.g(), mu);
  const double aux = std::abs((after.r - before.r) - 0.5 * inner(grid, b, after.phi - before.phi));
  return std::max(field_residual(grid, res, before.phi, after.phi), relative(aux, std::abs(after.r)));
}

double sav_cn_residual(GradientFlow& flow, const SavState& before, const SavState& after, double dt,
                       const std::optional<CnPredictor>& predictor) {
  const Grid& grid = flow.grid();
  Fourier& fft = flow.fourier();
  Field b;
  if (before.step_index == 0 || !before.phi_prev) {
    const CnPredictor boot = predictor ? *predictor : sav_cn_bootstrap(flow, before, dt);
    b = sav_force(flow, boot.phi_half, before.c_shift);
  } else {
    b = sav_force(flow, 1.5 * before.phi - 0.5 * *before.phi_prev, before.c_shift);
  }
  const Field mu =
      apply_multiplier(fft, flow.l(), 0.5 * (after.phi + before.phi)) + (0.5 * (after.r + before.r)) * b;
  const Field res = (after.phi - before.phi) - dt * apply_multiplier(fft, flow.g(), mu);
  const double aux = std::abs((after.r - before.r) - 0.5 * inner(grid, b, after.phi - before.phi));
  return std::max(field_residual(grid, res, before.phi, after.phi), relative(aux, std::abs(after.r)));
}

}  // namespace esav
