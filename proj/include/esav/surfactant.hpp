#pragma once

#include "esav/schemes.hpp"

namespace esav {

/// Fluid phase phi and surfactant concentration rho with s_r = ln r (for int F) and s_q = ln q
/// (for int G).
struct SurfactantState {
  Field phi;
  Field rho;
  double s_r = 0.0;
  double s_q = 0.0;
  long step_index = 0;
};

/// Fixed-point iteration for the variable-coefficient phi solve.
struct InnerSolverConfig {
  double tol = 1e-11;
  int max_iters = 200;
};

class SurfactantFlow {
 public:
  SurfactantFlow(const SurfactantSpec& spec, const Grid& grid);

  const SurfactantSpec& spec() const { return spec_; }
  const Grid& grid() const { return grid_; }
  Fourier& fourier() { return fft_; }
  const Multiplier& k2() const { return k2_; }
  const Multiplier& l_phi() const { return l_phi_; }
  const Multiplier& l_rho() const { return l_rho_; }

 private:
  SurfactantSpec spec_;
  Grid grid_;
  Fourier fft_;
  Multiplier k2_, l_phi_, l_rho_;
};

SurfactantState make_surfactant_state(SurfactantFlow& flow, Field phi0, Field rho0);

/// Two-step decoupled first-order step.
///  Step I:  (rho^{n+1}-rho^n)/dt = M_rho lap mu_rho,
///           mu_rho = -beta lap rho^{n+1} + w_G d^n - theta |grad phi^n|^2,   d^n = e^{s_q - E_G(rho^n)} G'(rho^n)
///  Step II: (phi^{n+1}-phi^n)/dt = M_phi lap mu_phi,
///           mu_phi = -lap phi^{n+1} + alpha lap^2 phi^{n+1} + w_F b^n + theta div(rho^{n+1} grad(phi^{n+1}+phi^n))
/// followed by s_q += (d^n, rho^{n+1}-rho^n) and s_r += (b^n, phi^{n+1}-phi^n).
/// w_F = 1/(4 eps^2), w_G = 1/(4 eta^2).
StepResult<SurfactantState> surfactant_step(SurfactantFlow& flow, const SurfactantState& state, double dt,
                                            const InnerSolverConfig& solver = {});

/// 1/2||grad phi||^2 + alpha/2||lap phi||^2 + beta/2||grad rho||^2 - theta(|grad phi|^2, rho)
///   + w_F s_r + w_G s_q.
double modified_energy(SurfactantFlow& flow, const SurfactantState& state);

/// |(a, r1 - r0) + (b - a, r1) - [(b, r1) - (a, r0)]| / max term, with a = |grad phi^n|^2,
/// b = |grad phi^{n+1}|^2.
double ledger_identity_residual(const Grid& grid, const Field& grad2_old, const Field& grad2_new,
                                const Field& rho_old, const Field& rho_new);

}  // namespace esav
