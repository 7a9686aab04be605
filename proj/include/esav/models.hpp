#pragma once

#include <string>
#include <string_view>

#include "esav/spectral.hpp"

namespace esav {

enum class ModelKind { AllenCahn, CahnHilliard, PhaseFieldCrystal, LinearTest };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// A scalar gradient flow  phi_t = G (L phi + lambda F'(phi))  with energy
/// 1/2 (phi, L phi) + lambda * int F(phi).
///
///   Allen-Cahn        L = |k|^2          G = -M        F = 1/4 (phi^2-1)^2    lambda = 1/eps^2
///   Cahn-Hilliard     L = eps |k|^2      G = -M |k|^2  F = 1/4 (phi^2-1)^2    lambda = 1/eps
///   phase-field cryst L = (1-|k|^2)^2    G = -M |k|^2  F = phi^4/4 - eps/2 phi^2   lambda = 1
///   linear test       L = |k|^2          G = -M        F = 0                  lambda = 0
///
/// The crystal model folds the -eps phi^2/2 part of the Swift-Hohenberg kernel into F so that L
/// stays non-negative.
struct ModelSpec {
  ModelKind kind = ModelKind::AllenCahn;
  double mobility = 1.0;
  double epsilon = 0.1;      // interface width (Allen-Cahn, Cahn-Hilliard)
  double pfc_epsilon = 0.25; // bifurcation constant (phase-field crystal)

  static ModelSpec allen_cahn(double epsilon, double mobility);
  static ModelSpec cahn_hilliard(double epsilon, double mobility);
  static ModelSpec phase_field_crystal(double pfc_epsilon, double mobility = 1.0);
  static ModelSpec linear_test(double mobility);

  void validate() const;
  /// Coefficient lambda multiplying int F in the nonlinear energy.
  double nonlinear_scale() const;
  /// True when G annihilates the zero mode (mass is conserved).
  bool conserves_mass() const { return kind == ModelKind::CahnHilliard || kind == ModelKind::PhaseFieldCrystal; }
};

/// Binary fluid-surfactant system, energy
///   int 1/2|grad phi|^2 + alpha/2 (lap phi)^2 + beta/2 |grad rho|^2 - theta rho |grad phi|^2
///     + 1/(4 eps^2) F(phi) + 1/(4 eta^2) G(rho),   F = (phi^2-1)^2,  G = rho^2 (rho-rho_s)^2.
struct SurfactantSpec {
  double mobility_phi = 2.5e-4;
  double mobility_rho = 2.5e-4;
  double alpha = 2.5e-4;
  double beta = 1.0;
  double theta = 0.3;
  double epsilon = 0.05;
  double eta = 0.08;
  double rho_s = 1.0;

  void validate() const;
  double weight_f() const { return 1.0 / (4.0 * epsilon * epsilon); }
  double weight_g() const { return 1.0 / (4.0 * eta * eta); }
};

Field f_value(const ModelSpec& model, const Field& phi);
Field f_prime(const ModelSpec& model, const Field& phi);

/// Surfactant potentials F(phi) = (phi^2-1)^2 and G(rho) = rho^2 (rho-rho_s)^2.
Field surfactant_f(const Field& phi);
Field surfactant_f_prime(const Field& phi);
Field surfactant_g(const SurfactantSpec& spec, const Field& rho);
Field surfactant_g_prime(const SurfactantSpec& spec, const Field& rho);

Multiplier l_symbol(const ModelSpec& model, const Grid& grid);
Multiplier g_symbol(const ModelSpec& model, const Grid& grid);

/// Surfactant operators: L_phi = |k|^2 + alpha |k|^4, G_phi = -M_phi |k|^2,
/// L_rho = beta |k|^2, G_rho = -M_rho |k|^2.
Multiplier l_phi_symbol(const SurfactantSpec& spec, const Grid& grid);
Multiplier g_phi_symbol(const SurfactantSpec& spec, const Grid& grid);
Multiplier l_rho_symbol(const SurfactantSpec& spec, const Grid& grid);
Multiplier g_rho_symbol(const SurfactantSpec& spec, const Grid& grid);

/// lambda * int F(phi).
double e1(const ModelSpec& model, const Grid& grid, const Field& phi);
/// Unscaled surfactant functionals int F(phi) and int G(rho).
double e_f(const Grid& grid, const Field& phi);
double e_g(const SurfactantSpec& spec, const Grid& grid, const Field& rho);

/// 1/2 (phi, L phi) + e1(phi).
double original_energy(Fourier& fft, const ModelSpec& model, const Field& phi);
double original_energy(Fourier& fft, const SurfactantSpec& spec, const Field& phi, const Field& rho);

/// Chemical potential L phi + lambda F'(phi).
Field chemical_potential(Fourier& fft, const ModelSpec& model, const Field& phi);

}  // namespace esav
