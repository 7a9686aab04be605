#include "esav/initial_conditions.hpp"

#include <cmath>
#include <numbers>

namespace esav {

Field uniform_field(const Grid& grid, SplitMix64& rng) {
  Field f(grid.nx, grid.ny);
  for (Eigen::Index k = 0; k < f.size(); ++k) f.data()[k] = rng.uniform();
  return f;
}

Field sine_product(const Grid& grid, double amplitude) {
  return grid.sample([amplitude](double x, double y) { return amplitude * std::sin(x) * std::sin(y); });
}

Field two_bubbles(const Grid& grid, double epsilon, double radius, double x1, double y1, double x2, double y2) {
  if (!(epsilon > 0.0)) throw InvalidArgument("bubble width must be positive");
  const double w = std::sqrt(2.0) * epsilon;
  return grid.sample([=](double x, double y) {
    const double d1 = std::hypot(x - x1, y - y1);
    const double d2 = std::hypot(x - x2, y - y2);
    return 1.0 - std::tanh((d1 - radius) / w) - std::tanh((d2 - radius) / w);
  });
}

Field crystallites(const Grid& grid, const std::vector<CrystalPatch>& patches, const CrystalLattice& lattice) {
  const double s3 = std::sqrt(3.0);
  const double half = 0.5 * lattice.side;
  return grid.sample([&](double x, double y) {
    for (const auto& p : patches) {
      if (std::abs(x - p.cx) > half || std::abs(y - p.cy) > half) continue;
      const double xl = x * std::sin(p.theta) + y * std::cos(p.theta);
      const double yl = -x * std::cos(p.theta) + y * std::sin(p.theta);
      return lattice.mean + lattice.amplitude * (std::cos(lattice.q / s3 * yl) * std::cos(lattice.q * xl) -
                                                 0.5 * std::cos(2.0 * lattice.q / s3 * yl));
    }
    return lattice.mean;
  });
}

std::vector<CrystalPatch> default_crystal_patches() {
  constexpr double pi = std::numbers::pi;
  return {{150.0, 150.0, pi / 4.0}, {200.0, 250.0, 0.0}, {250.0, 150.0, -pi / 4.0}};
}

const std::vector<std::string>& initial_condition_ids() {
  static const std::vector<std::string> ids = {"sine-product",   "two-bubbles",      "random-spinodal",
                                               "crystallites",   "random-crystal",   "surfactant-modes",
                                               "surfactant-random"};
  return ids;
}

InitialData initial_condition(std::string_view id, const Grid& grid, std::uint64_t seed, double epsilon) {
  grid.validate();
  InitialData out;
  if (id == "sine-product") {
    out.phi = sine_product(grid);
  } else if (id == "two-bubbles") {
    out.phi = two_bubbles(grid, epsilon);
  } else if (id == "random-spinodal") {
    SplitMix64 rng(seed);
    out.phi = 0.25 + 0.4 * uniform_field(grid, rng);
  } else if (id == "crystallites") {
    out.phi = crystallites(grid, default_crystal_patches());
  } else if (id == "random-crystal") {
    SplitMix64 rng(seed);
    Field u = uniform_field(grid, rng);
    u -= u.mean();
    out.phi = 0.07 + 0.07 * u;
  } else if (id == "surfactant-modes") {
    out.phi = grid.sample([](double x, double y) { return 0.3 * std::cos(3.0 * x) + 0.5 * std::cos(y); });
    out.rho = grid.sample([](double x, double y) { return 0.2 * std::cos(2.0 * x) + 0.25 * std::sin(y); });
  } else if (id == "surfactant-random") {
    SplitMix64 rng(seed);
    out.phi = 0.001 * uniform_field(grid, rng);
    out.rho = 0.2 + 0.001 * uniform_field(grid, rng);
  } else {
    throw InvalidArgument("unknown initial condition '" + std::string(id) + "'");
  }
  return out;
}

}  // namespace esav
