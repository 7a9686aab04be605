#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "esav/initial_conditions.hpp"
#include "esav/schemes.hpp"
#include "support.hpp"

using namespace esav;
using esav::testing::max_abs;
using esav::testing::random_field;

namespace {

const Grid kGrid = Grid::square(32);

Field sin_x(const Grid& g) {
  return g.sample([](double x, double) { return std::sin(x); });
}

Field start_field(const ModelSpec& model, const Grid& g, std::uint64_t seed, double amplitude) {
  if (model.kind == ModelKind::PhaseFieldCrystal) return 0.07 + 0.07 * random_field(g, seed);
  return amplitude * random_field(g, seed);
}

// runs n steps of the chosen scheme and checks the modified energy after every step
template <typename State, typename Step>
State march(GradientFlow& flow, State st, double dt, int n, Step step, double* worst = nullptr,
            bool allow_degenerate = false, int* degenerate = nullptr) {
  double e = modified_energy(flow, st);
  for (int i = 0; i < n; ++i) {
    std::optional<decltype(step(flow, st, dt))> maybe;
    try {
      maybe = step(flow, st, dt);
    } catch (const ExtrapolationDegenerate&) {
      // the extrapolated ratio may turn negative for rough data at huge steps; never for the others
      if (!allow_degenerate) throw;
      if (degenerate) ++*degenerate;
      return st;
    }
    auto& r = *maybe;
    const double e_new = r.diagnostics.modified_energy;
    if (worst) *worst = std::max(*worst, (e_new - e) / (1 + std::abs(e)));
    e = e_new;
    st = std::move(r.state);
  }
  return st;
}

auto esav1 = [](GradientFlow& f, const EsavState& s, double dt) { return esav_step_first(f, s, dt); };
auto esavcn = [](GradientFlow& f, const EsavState& s, double dt) { return esav_step_cn(f, s, dt); };
auto sav1 = [](GradientFlow& f, const SavState& s, double dt) { return sav_step_first(f, s, dt); };
auto savcn = [](GradientFlow& f, const SavState& s, double dt) { return sav_step_cn(f, s, dt); };

}  // namespace

TEST(Bratio, UnitRatioAtStart) {
  GradientFlow flow(ModelSpec::allen_cahn(0.1, 1.0), Grid::square(128));
  const auto st = make_esav_state(flow, sine_product(flow.grid()));
  EXPECT_EQ(st.c_scale * st.s, flow.e1(st.phi));
  StepDiagnostics d;
  const Field b = bratio(st, flow, st.phi, st.s, &d);
  EXPECT_LE(max_abs(b - flow.nonlinear_force(st.phi)), 1e-12 * max_abs(b));
  EXPECT_LE(d.max_exponent_arg, 1e-15);
}

TEST(Bratio, ExponentAfterOneStepIsSmall) {
  GradientFlow flow(ModelSpec::allen_cahn(0.1, 1.0), Grid::square(128));
  const auto st = make_esav_state(flow, sine_product(flow.grid()));
  const auto r = esav_step_first(flow, st, 1.6e-4);
  StepDiagnostics d;
  bratio(r.state, flow, r.state.phi, r.state.s, &d);
  EXPECT_GT(d.max_exponent_arg, 0.0);
  EXPECT_LT(d.max_exponent_arg, 1e-1);
}

TEST(Bratio, WellBottomGivesZero) {
  GradientFlow flow(ModelSpec::allen_cahn(0.1, 1.0), kGrid);
  const auto st = make_esav_state(flow, kGrid.constant(1.0));
  EXPECT_EQ(max_abs(bratio(st, flow, st.phi, st.s)), 0.0);
}

TEST(Bratio, OverflowGuard) {
  GradientFlow flow(ModelSpec::allen_cahn(0.1, 1.0), kGrid);
  auto st = make_esav_state(flow, sine_product(kGrid));
  st.s += 800;
  try {
    bratio(st, flow, st.phi, st.s);
    FAIL() << "expected OverflowGuard";
  } catch (const OverflowGuard& e) {
    EXPECT_GT(e.argument(), 700);
    EXPECT_NE(std::string(e.what()).find("C"), std::string::npos);
  }
  EXPECT_THROW(esav_step_first(flow, st, 1e-3), OverflowGuard);
}

TEST(EsavConstant, Default) {
  EXPECT_EQ(default_esav_constant(0.3), 1.0);
  EXPECT_EQ(default_esav_constant(-250.0), 250.0);
  GradientFlow flow(ModelSpec::allen_cahn(0.1, 1.0), kGrid);
  EXPECT_THROW(make_esav_state(flow, sine_product(kGrid), -1.0), InvalidArgument);
}

TEST(FixedPoints, WellBottom) {
  GradientFlow flow(ModelSpec::allen_cahn(0.1, 1.0), kGrid);
  const Field one = kGrid.constant(1.0);
  auto e = make_esav_state(flow, one);
  auto r1 = esav_step_first(flow, e, 0.1);
  EXPECT_LE(max_abs(r1.state.phi - one), 1e-15);
  EXPECT_EQ(r1.state.s, e.s);

  const auto boot = esav_cn_bootstrap(flow, e, 0.1);
  EXPECT_LE(max_abs(boot.phi_half - one), 1e-15);
  EXPECT_EQ(boot.s_half, 0.0);
  auto c1 = esav_step_cn(flow, e, 0.1, boot);
  auto c2 = esav_step_cn(flow, c1.state, 0.1);
  EXPECT_LE(max_abs(c2.state.phi - one), 1e-15);
  EXPECT_EQ(c2.state.s, e.s);

  auto s = make_sav_state(flow, one, 1.0);
  auto q1 = sav_step_first(flow, s, 0.1);
  EXPECT_LE(max_abs(q1.state.phi - one), 1e-15);
  EXPECT_EQ(q1.state.r, s.r);
  auto q2 = sav_step_cn(flow, sav_step_cn(flow, s, 0.1).state, 0.1);
  EXPECT_LE(max_abs(q2.state.phi - one), 1e-15);
  EXPECT_EQ(q2.state.r, s.r);
}

TEST(LinearTest, FirstOrderAmplification) {
  const double m = 0.7, dt = 0.05;
  GradientFlow flow(ModelSpec::linear_test(m), kGrid);
  const auto st = make_esav_state(flow, sin_x(kGrid));
  const auto r = esav_step_first(flow, st, dt);
  EXPECT_LE(max_abs(r.state.phi - sin_x(kGrid) / (1 + dt * m)), 1e-15);
  // |k|^2 = 2 mode
  const Field two = kGrid.sample([](double x, double y) { return std::sin(x) * std::cos(y); });
  EXPECT_LE(max_abs(esav_step_first(flow, make_esav_state(flow, two), dt).state.phi - two / (1 + 2 * dt * m)), 1e-15);
}

TEST(LinearTest, CrankNicolsonAmplification) {
  const double m = 0.7, dt = 0.05, a = dt * m / 2;
  GradientFlow flow(ModelSpec::linear_test(m), kGrid);
  const auto st = make_esav_state(flow, sin_x(kGrid));
  const auto boot = esav_cn_bootstrap(flow, st, dt);
  EXPECT_LE(max_abs(boot.phi_half - sin_x(kGrid) / (1 + a)), 1e-15);
  EsavState cur = st;
  for (int n = 1; n <= 10; ++n) {
    cur = esav_step_cn(flow, cur, dt).state;
    EXPECT_LE(max_abs(cur.phi - std::pow((1 - a) / (1 + a), n) * sin_x(kGrid)), 1e-14);
  }
}

TEST(LinearTest, SavMatchesEsav) {
  GradientFlow flow(ModelSpec::linear_test(1.0), kGrid);
  const Field phi0 = random_field(kGrid, 9);
  auto e = make_esav_state(flow, phi0);
  auto s = make_sav_state(flow, phi0, 1.0);
  auto ec = e;
  auto sc = s;
  for (int n = 0; n < 20; ++n) {
    e = esav_step_first(flow, e, 0.01).state;
    s = sav_step_first(flow, s, 0.01).state;
    ec = esav_step_cn(flow, ec, 0.01).state;
    sc = sav_step_cn(flow, sc, 0.01).state;
  }
  EXPECT_LE(max_abs(e.phi - s.phi), 1e-14);
  EXPECT_LE(max_abs(ec.phi - sc.phi), 1e-14);
}

TEST(Residuals, AllSchemesSolveTheirEquations) {
  for (const auto& model : {ModelSpec::allen_cahn(0.1, 1.0), ModelSpec::cahn_hilliard(0.1, 0.1),
                            ModelSpec::phase_field_crystal(0.25)}) {
    const Grid g = model.kind == ModelKind::PhaseFieldCrystal ? Grid(32, 32, 40.0, 40.0) : kGrid;
    GradientFlow flow(model, g);
    const Field phi0 = start_field(model, g, 4, 0.5);
    const double dt = 1e-3;
    auto e = make_esav_state(flow, phi0);
    auto s = make_sav_state(flow, phi0, 1.0 + std::abs(flow.e1(phi0)));
    auto ec = e;
    auto sc = s;
    for (int n = 0; n < 5; ++n) {
      auto e1 = esav_step_first(flow, e, dt);
      EXPECT_LE(esav_first_residual(flow, e, e1.state, dt), 1e-12) << to_string(model.kind);
      e = e1.state;
      auto s1 = sav_step_first(flow, s, dt);
      EXPECT_LE(sav_first_residual(flow, s, s1.state, dt), 1e-10) << to_string(model.kind);
      s = s1.state;
      auto ec1 = esav_step_cn(flow, ec, dt);
      EXPECT_LE(esav_cn_residual(flow, ec, ec1.state, dt), 1e-10) << to_string(model.kind);
      ec = ec1.state;
      auto sc1 = sav_step_cn(flow, sc, dt);
      EXPECT_LE(sav_cn_residual(flow, sc, sc1.state, dt), 1e-10) << to_string(model.kind);
      sc = sc1.state;
    }
  }
}

TEST(SolveCounts, OneForEsavTwoForSav) {
  GradientFlow flow(ModelSpec::allen_cahn(0.1, 1.0), kGrid);
  const Field phi0 = sine_product(kGrid);
  auto e = make_esav_state(flow, phi0);
  auto s = make_sav_state(flow, phi0, 1.0);
  EXPECT_EQ(esav_step_first(flow, e, 1e-3).diagnostics.linear_solves_performed, 1);
  EXPECT_EQ(sav_step_first(flow, s, 1e-3).diagnostics.linear_solves_performed, 2);
  // the first Crank-Nicolson step also pays for its predictor
  auto c0 = esav_step_cn(flow, e, 1e-3);
  EXPECT_EQ(c0.diagnostics.linear_solves_performed, 2);
  EXPECT_EQ(esav_step_cn(flow, c0.state, 1e-3).diagnostics.linear_solves_performed, 1);
  auto q0 = sav_step_cn(flow, s, 1e-3);
  EXPECT_EQ(q0.diagnostics.linear_solves_performed, 3);
  EXPECT_EQ(sav_step_cn(flow, q0.state, 1e-3).diagnostics.linear_solves_performed, 2);
}

TEST(Errors, ExtrapolationDegenerate) {
  GradientFlow flow(ModelSpec::allen_cahn(0.1, 1.0), kGrid);
  auto st = esav_step_cn(flow, make_esav_state(flow, sine_product(kGrid)), 1e-3).state;
  st.s_prev = st.s + 2.0;  // 3/2 - 1/2 e^2 < 0
  try {
    esav_step_cn(flow, st, 1e-3);
    FAIL() << "expected ExtrapolationDegenerate";
  } catch (const ExtrapolationDegenerate& e) {
    EXPECT_LT(e.ratio(), 0.0);
  }
}

TEST(Errors, InvalidShift) {
  // the crystal energy is negative near a uniform state with eps > 0
  const Grid g(32, 32, 40.0, 40.0);
  GradientFlow flow(ModelSpec::phase_field_crystal(0.25), g);
  const Field phi0 = g.constant(0.3);
  ASSERT_LT(flow.e1(phi0), 0.0);
  EXPECT_THROW(make_sav_state(flow, phi0, 0.0), InvalidShift);
  // E-SAV has no lower-bound requirement
  EXPECT_NO_THROW(esav_step_first(flow, make_esav_state(flow, phi0), 0.1));
}

TEST(Errors, BadTimeStep) {
  GradientFlow flow(ModelSpec::allen_cahn(0.1, 1.0), kGrid);
  const auto st = make_esav_state(flow, sine_product(kGrid));
  EXPECT_THROW(esav_step_first(flow, st, 0.0), InvalidArgument);
  EXPECT_THROW(esav_step_first(flow, st, -1.0), InvalidArgument);
  EXPECT_THROW(esav_step_first(flow, st, std::nan("")), InvalidArgument);
}

TEST(ModifiedEnergy, EqualsOriginalAtStart) {
  GradientFlow flow(ModelSpec::allen_cahn(0.1, 1.0), Grid::square(128));
  const auto st = make_esav_state(flow, sine_product(flow.grid()));
  const double orig = original_energy(flow.fourier(), flow.model(), st.phi);
  EXPECT_NEAR(modified_energy(flow, st), orig, 1e-13 * std::abs(orig));
  EXPECT_EQ(modified_energy(flow, make_esav_state(flow, flow.grid().constant(1.0))), 0.0);
}

// unconditional decay over the step sizes of the stability sweep
TEST(SchemeProperties, ModifiedEnergyNeverIncreases) {
  for (const auto& model : {ModelSpec::allen_cahn(0.05, 1.0), ModelSpec::cahn_hilliard(0.05, 1.0),
                            ModelSpec::phase_field_crystal(0.25)}) {
    const Grid g = model.kind == ModelKind::PhaseFieldCrystal ? Grid(32, 32, 40.0, 40.0) : kGrid;
    GradientFlow flow(model, g);
    const Field phi0 = start_field(model, g, 8, 0.8);
    for (double dt : {1e-3, 1e-2, 0.1, 1.0, 2.0}) {
      double worst = -1;
      int degenerate = 0;
      march(flow, make_esav_state(flow, phi0), dt, 20, esav1, &worst);
      march(flow, make_esav_state(flow, phi0), dt, 20, esavcn, &worst, true, &degenerate);
      march(flow, make_sav_state(flow, phi0, 100.0 + std::abs(flow.e1(phi0))), dt, 20, sav1, &worst);
      march(flow, make_sav_state(flow, phi0, 100.0 + std::abs(flow.e1(phi0))), dt, 20, savcn, &worst);
      EXPECT_LE(worst, 1e-8) << to_string(model.kind) << " dt=" << dt;
      if (dt <= 1e-3) EXPECT_EQ(degenerate, 0) << to_string(model.kind);
    }
  }
}

TEST(SchemeProperties, MassConserved) {
  for (const auto& model : {ModelSpec::cahn_hilliard(0.05, 1.0), ModelSpec::phase_field_crystal(0.25)}) {
    const Grid g = model.kind == ModelKind::PhaseFieldCrystal ? Grid(32, 32, 40.0, 40.0) : kGrid;
    GradientFlow flow(model, g);
    const Field phi0 = 0.2 + 0.5 * random_field(g, 12);
    const double m0 = integral(g, phi0), tol = 1e-12 * (1 + std::abs(m0));
    EXPECT_NEAR(integral(g, march(flow, make_esav_state(flow, phi0), 0.1, 50, esav1).phi), m0, tol);
    EXPECT_NEAR(integral(g, march(flow, make_esav_state(flow, phi0), 0.1, 50, esavcn, nullptr, true).phi), m0, tol);
    EXPECT_NEAR(integral(g, march(flow, make_sav_state(flow, phi0, 1e3), 0.1, 50, sav1).phi), m0, tol);
    EXPECT_NEAR(integral(g, march(flow, make_sav_state(flow, phi0, 1e3), 0.1, 50, savcn).phi), m0, tol);
  }
}

TEST(SchemeProperties, AuxiliaryStaysFinite) {
  GradientFlow flow(ModelSpec::allen_cahn(0.02, 1.0), kGrid);
  auto st = make_esav_state(flow, random_field(kGrid, 77));
  for (int n = 0; n < 100; ++n) {
    st = esav_step_first(flow, st, 1.0).state;
    ASSERT_TRUE(std::isfinite(st.s));
    ASSERT_GT(st.r(), 0.0);
  }
}
