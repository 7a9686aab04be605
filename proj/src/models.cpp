#include "esav/models.hpp"

#include <cmath>

namespace esav {

namespace {

void require_positive(double value, const char* name) {
  if (!(std::isfinite(value) && value > 0.0))
    throw InvalidArgument(std::string(name) + " must be finite and positive");
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::AllenCahn: return "allen-cahn";
    case ModelKind::CahnHilliard: return "cahn-hilliard";
    case ModelKind::PhaseFieldCrystal: return "pfc";
    case ModelKind::LinearTest: return "linear-test";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "allen-cahn") return ModelKind::AllenCahn;
  if (name == "cahn-hilliard") return ModelKind::CahnHilliard;
  if (name == "pfc") return ModelKind::PhaseFieldCrystal;
  if (name == "linear-test") return ModelKind::LinearTest;
  throw InvalidArgument("unknown model '" + std::string(name) + "'");
}

ModelSpec ModelSpec::allen_cahn(double epsilon, double mobility) {
  ModelSpec m{ModelKind::AllenCahn, mobility, epsilon, 0.25};
  m.validate();
  return m;
}

ModelSpec ModelSpec::cahn_hilliard(double epsilon, double mobility) {
  ModelSpec m{ModelKind::CahnHilliard, mobility, epsilon, 0.25};
  m.validate();
  return m;
}

ModelSpec ModelSpec::phase_field_crystal(double pfc_epsilon, double mobility) {
  ModelSpec m{ModelKind::PhaseFieldCrystal, mobility, 0.1, pfc_epsilon};
  m.validate();
  return m;
}

ModelSpec ModelSpec::linear_test(double mobility) {
  ModelSpec m{ModelKind::LinearTest, mobility, 0.1, 0.25};
  m.validate();
  return m;
}

void ModelSpec::validate() const {
  require_positive(mobility, "mobility");
  if (kind == ModelKind::AllenCahn || kind == ModelKind::CahnHilliard) require_positive(epsilon, "epsilon");
  if (kind == ModelKind::PhaseFieldCrystal) require_positive(pfc_epsilon, "pfc_epsilon");
}

double ModelSpec::nonlinear_scale() const {
  switch (kind) {
    case ModelKind::AllenCahn: return 1.0 / (epsilon * epsilon);
    case ModelKind::CahnHilliard: return 1.0 / epsilon;
    case ModelKind::PhaseFieldCrystal: return 1.0;
    case ModelKind::LinearTest: return 0.0;
  }
  return 0.0;
}

void SurfactantSpec::validate() const {
  require_positive(mobility_phi, "mobility_phi");
  require_positive(mobility_rho, "mobility_rho");
  require_positive(alpha, "alpha");
  require_positive(beta, "beta");
  require_positive(theta, "theta");
  require_positive(epsilon, "epsilon");
  require_positive(eta, "eta");
  require_positive(rho_s, "rho_s");
}

Field f_value(const ModelSpec& model, const Field& phi) {
  switch (model.kind) {
    case ModelKind::AllenCahn:
    case ModelKind::CahnHilliard: return 0.25 * (phi.square() - 1.0).square();
    case ModelKind::PhaseFieldCrystal: return 0.25 * phi.square().square() - 0.5 * model.pfc_epsilon * phi.square();
    case ModelKind::LinearTest: return Field::Zero(phi.rows(), phi.cols());
  }
  return {};
}

Field f_prime(const ModelSpec& model, const Field& phi) {
  switch (model.kind) {
    case ModelKind::AllenCahn:
    case ModelKind::CahnHilliard: return phi.cube() - phi;
    case ModelKind::PhaseFieldCrystal: return phi.cube() - model.pfc_epsilon * phi;
    case ModelKind::LinearTest: return Field::Zero(phi.rows(), phi.cols());
  }
  return {};
}

Field surfactant_f(const Field& phi) { return (phi.square() - 1.0).square(); }

Field surfactant_f_prime(const Field& phi) { return 4.0 * phi * (phi.square() - 1.0); }

Field surfactant_g(const SurfactantSpec& spec, const Field& rho) {
  return rho.square() * (rho - spec.rho_s).square();
}

Field surfactant_g_prime(const SurfactantSpec& spec, const Field& rho) {
  const Field shifted = rho - spec.rho_s;
  return 2.0 * rho * shifted.square() + 2.0 * rho.square() * shifted;
}

Multiplier l_symbol(const ModelSpec& model, const Grid& grid) {
  switch (model.kind) {
    case ModelKind::AllenCahn:
    case ModelKind::LinearTest: return Multiplier::wavenumber_squared(grid);
    case ModelKind::CahnHilliard: return Multiplier::wavenumber_squared(grid) * model.epsilon;
    case ModelKind::PhaseFieldCrystal:
      return Multiplier::from_function(grid, [](double kx, double ky) {
        const double s = 1.0 - (kx * kx + ky * ky);
        return s * s;
      });
  }
  return {};
}

Multiplier g_symbol(const ModelSpec& model, const Grid& grid) {
  switch (model.kind) {
    case ModelKind::AllenCahn:
    case ModelKind::LinearTest: return Multiplier::constant(grid, -model.mobility);
    case ModelKind::CahnHilliard:
    case ModelKind::PhaseFieldCrystal: return Multiplier::wavenumber_squared(grid) * -model.mobility;
  }
  return {};
}

Multiplier l_phi_symbol(const SurfactantSpec& spec, const Grid& grid) {
  return Multiplier::from_function(grid, [&](double kx, double ky) {
    const double k2 = kx * kx + ky * ky;
    return k2 + spec.alpha * k2 * k2;
  });
}

Multiplier g_phi_symbol(const SurfactantSpec& spec, const Grid& grid) {
  return Multiplier::wavenumber_squared(grid) * -spec.mobility_phi;
}

Multiplier l_rho_symbol(const SurfactantSpec& spec, const Grid& grid) {
  return Multiplier::wavenumber_squared(grid) * spec.beta;
}

Multiplier g_rho_symbol(const SurfactantSpec& spec, const Grid& grid) {
  return Multiplier::wavenumber_squared(grid) * -spec.mobility_rho;
}

double e1(const ModelSpec& model, const Grid& grid, const Field& phi) {
  if (model.kind == ModelKind::LinearTest) return 0.0;
  return model.nonlinear_scale() * integral(grid, f_value(model, phi));
}

double e_f(const Grid& grid, const Field& phi) { return integral(grid, surfactant_f(phi)); }

double e_g(const SurfactantSpec& spec, const Grid& grid, const Field& rho) {
  return integral(grid, surfactant_g(spec, rho));
}

double original_energy(Fourier& fft, const ModelSpec& model, const Field& phi) {
  const Grid& grid = fft.grid();
  const SpectralField c = fft.forward(phi);
  return 0.5 * quadratic_form(l_symbol(model, grid), c) + e1(model, grid, phi);
}

double original_energy(Fourier& fft, const SurfactantSpec& spec, const Field& phi, const Field& rho) {
  const Grid& grid = fft.grid();
  const SpectralField cp = fft.forward(phi);
  const SpectralField cr = fft.forward(rho);
  const double quadratic = 0.5 * quadratic_form(l_phi_symbol(spec, grid), cp) +
                           0.5 * quadratic_form(l_rho_symbol(spec, grid), cr);
  const double coupling = -spec.theta * inner(grid, gradient_norm_squared(fft, phi), rho);
  return quadratic + coupling + spec.weight_f() * e_f(grid, phi) + spec.weight_g() * e_g(spec, grid, rho);
}

Field chemical_potential(Fourier& fft, const ModelSpec& model, const Field& phi) {
  Field mu = apply_multiplier(fft, l_symbol(model, fft.grid()), phi);
  if (model.kind != ModelKind::LinearTest) mu += model.nonlinear_scale() * f_prime(model, phi);
  return mu;
}

}  // namespace esav
