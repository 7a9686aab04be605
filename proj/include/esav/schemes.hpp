#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "esav/models.hpp"

namespace esav {

/// Largest |s - E1/C| accepted before exponentiating.
inline constexpr double kMaxExponent = 700.0;

struct StepDiagnostics {
  double original_energy = 0.0;
  double modified_energy = 0.0;
  double mass = 0.0;
  double mass_rho = 0.0;  // surfactant only
  int inner_solver_iterations = 0;
  int linear_solves_performed = 0;
  double max_exponent_arg = 0.0;
  double inner_final_update = 0.0;           // surfactant only
  double ledger_identity_residual = 0.0;     // surfactant only
};

/// phi^n with the log-space auxiliary variable s = ln r^n of r = exp(E1/C).
struct EsavState {
  Field phi;
  double s = 0.0;
  std::optional<Field> phi_prev;
  std::optional<double> s_prev;
  long step_index = 0;
  double c_scale = 1.0;

  double r() const { return std::exp(s); }
};

/// phi^n with the classical auxiliary variable r = sqrt(E1 + C).
struct SavState {
  Field phi;
  double r = 0.0;
  std::optional<Field> phi_prev;
  std::optional<double> r_prev;
  long step_index = 0;
  double c_shift = 1.0;
};

template <typename State>
struct StepResult {
  State state;
  StepDiagnostics diagnostics;
};

/// Half-step predictor for the first Crank-Nicolson step.
struct CnPredictor {
  Field phi_half;
  double s_half = 0.0;  // E1(phi_half)/C, or r_half for the classical scheme
};

/// Transform context plus operator symbols of one scalar gradient flow on one grid.
class GradientFlow {
 public:
  GradientFlow(const ModelSpec& model, const Grid& grid);

  const ModelSpec& model() const { return model_; }
  const Grid& grid() const { return grid_; }
  const Multiplier& l() const { return l_; }
  const Multiplier& g() const { return g_; }
  /// Symbol of G*L (entrywise <= 0).
  const Multiplier& gl() const { return gl_; }
  Fourier& fourier() { return fft_; }

  double e1(const Field& phi) const { return esav::e1(model_, grid_, phi); }
  /// lambda F'(phi).
  Field nonlinear_force(const Field& phi) const;

  /// Applies (I - tau GL)^{-1} in place. Reciprocal symbols are cached per tau.
  void solve(double tau, SpectralField& coeffs);

 private:
  ModelSpec model_;
  Grid grid_;
  Fourier fft_;
  Multiplier l_, g_, gl_;
  std::vector<std::pair<double, Multiplier::Symbol>> inverse_cache_;
};

/// C = max(1, |E1(phi0)|).
double default_esav_constant(double e1_initial);

EsavState make_esav_state(GradientFlow& flow, Field phi0, std::optional<double> c_scale = std::nullopt);
SavState make_sav_state(GradientFlow& flow, Field phi0, double c_shift = 1.0);

/// exp(s_eval - E1(phi_eval)/C) * lambda F'(phi_eval), with the exponent formed as one difference.
/// Records |exponent| into diag; throws OverflowGuard above kMaxExponent.
Field bratio(const EsavState& state, GradientFlow& flow, const Field& phi_eval, double s_eval,
             StepDiagnostics* diag = nullptr);

StepResult<EsavState> esav_step_first(GradientFlow& flow, const EsavState& state, double dt);

/// Predictor phi~^{1/2} from (I - dt/2 GL) phi~ = phi^0 + dt/2 G lambda F'(phi^0); s~ = E1(phi~)/C.
CnPredictor esav_cn_bootstrap(GradientFlow& flow, const EsavState& state0, double dt);

/// Crank-Nicolson step. At step_index 0 a predictor is required (bootstrapped when absent).
StepResult<EsavState> esav_step_cn(GradientFlow& flow, const EsavState& state, double dt,
                                   const std::optional<CnPredictor>& predictor = std::nullopt);

StepResult<SavState> sav_step_first(GradientFlow& flow, const SavState& state, double dt);

/// Predictor for the classical scheme: same half step, r~ unused.
CnPredictor sav_cn_bootstrap(GradientFlow& flow, const SavState& state0, double dt);
StepResult<SavState> sav_step_cn(GradientFlow& flow, const SavState& state, double dt,
                                 const std::optional<CnPredictor>& predictor = std::nullopt);

/// 1/2 (phi, L phi) + C s.
double modified_energy(GradientFlow& flow, const EsavState& state);
/// 1/2 (phi, L phi) + r^2.
double modified_energy(GradientFlow& flow, const SavState& state);

/// Relative residual of the discrete equations satisfied by (before -> after). Used by tests to
/// certify the solves: field equation residual over ||phi^{n+1} - phi^n|| + ||phi^n||, and the
/// auxiliary update residual over |aux|.
double esav_first_residual(GradientFlow& flow, const EsavState& before, const EsavState& after, double dt);
double esav_cn_residual(GradientFlow& flow, const EsavState& before, const EsavState& after, double dt,
                        const std::optional<CnPredictor>& predictor = std::nullopt);
double sav_first_residual(GradientFlow& flow, const SavState& before, const SavState& after, double dt);
double sav_cn_residual(GradientFlow& flow, const SavState& before, const SavState& after, double dt,
                       const std::optional<CnPredictor>& predictor = std::nullopt);

}  // namespace esav
