#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esav/grid.hpp"

namespace esav {

/// splitmix64: state += golden gamma, then two xor-shift-multiply rounds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [-1, 1) from the top 53 bits.
  double uniform() { return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0; }

 private:
  std::uint64_t state_;
};

/// One uniform [-1,1) draw per node, filled row-major.
Field uniform_field(const Grid& grid, SplitMix64& rng);

/// amplitude * sin(x) sin(y).
Field sine_product(const Grid& grid, double amplitude = 0.05);

/// 1 + sum_i -tanh((|x - c_i| - radius) / (sqrt(2) eps)) for the two given centers.
Field two_bubbles(const Grid& grid, double epsilon, double radius = 0.19, double x1 = 0.3, double y1 = 0.5,
                  double x2 = 0.7, double y2 = 0.5);

struct CrystalPatch {
  double cx, cy, theta;
};

struct CrystalLattice {
  double mean = 0.285;
  double amplitude = 0.446;
  double q = 0.66;
  double side = 40.0;
};

/// mean + A (cos(q y_l / sqrt3) cos(q x_l) - 1/2 cos(2 q y_l / sqrt3)) inside each square patch, with
/// x_l = x sin(theta) + y cos(theta), y_l = -x cos(theta) + y sin(theta); mean elsewhere.
Field crystallites(const Grid& grid, const std::vector<CrystalPatch>& patches, const CrystalLattice& lattice = {});

/// The three patches at (150,150), (200,250), (250,150) with theta = pi/4, 0, -pi/4.
std::vector<CrystalPatch> default_crystal_patches();

struct InitialData {
  Field phi;
  std::optional<Field> rho;
};

/// Named initial data. Ids:
///   sine-product      0.05 sin x sin y
///   two-bubbles       two tanh bubbles, width parameter `epsilon`
///   random-spinodal   0.25 + 0.4 u
///   crystallites      three rotated crystal patches in a uniform liquid
///   random-crystal    0.07 + 0.07 u, u shifted to exactly zero grid mean
///   surfactant-modes  phi = 0.3 cos 3x + 0.5 cos y, rho = 0.2 cos 2x + 0.25 sin y
///   surfactant-random phi = 0.001 u, rho = 0.2 + 0.001 u (phi drawn first)
InitialData initial_condition(std::string_view id, const Grid& grid, std::uint64_t seed, double epsilon = 0.01);

const std::vector<std::string>& initial_condition_ids();

}  // namespace esav
