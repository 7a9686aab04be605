#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>

#include "esav/io.hpp"
#include "support.hpp"

using namespace esav;

namespace {

std::string temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("esav_io_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Snapshot, BitExactRoundTrip) {
  const Grid g(8, 6, 2.5, 1.0 / 3.0);
  Field f = esav::testing::random_field(g, 4);
  f(0, 0) = -0.0;
  f(1, 1) = std::numeric_limits<double>::denorm_min();
  f(2, 2) = 1e300;
  const std::string path = temp_dir("snap") + "/a.snap";
  write_snapshot(path, g, 0.1, f);
  const Snapshot s = read_snapshot(path);
  EXPECT_EQ(s.grid, g);
  EXPECT_EQ(s.time, 0.1);
  ASSERT_EQ(s.values.rows(), 8);
  ASSERT_EQ(s.values.cols(), 6);
  EXPECT_EQ(std::memcmp(s.values.data(), f.data(), sizeof(double) * f.size()), 0);
}

TEST(Snapshot, Layout) {
  const Grid g(4, 4, 1.0, 2.0);
  Field f = g.zeros();
  f(0, 1) = 1.0;  // second value in row-major order
  const std::string path = temp_dir("layout") + "/b.snap";
  write_snapshot(path, g, 5.6, f);
  const std::string bytes = slurp(path);
  const std::string header = "ESAVSNAP v1 4 4 1 2 5.5999999999999996\n";
  ASSERT_EQ(bytes.substr(0, header.size()), header);
  ASSERT_EQ(bytes.size(), header.size() + 16 * 8);
  // 1.0 = 0x3FF0000000000000, little-endian
  const std::string one = bytes.substr(header.size() + 8, 8);
  EXPECT_EQ(static_cast<unsigned char>(one[7]), 0x3F);
  EXPECT_EQ(static_cast<unsigned char>(one[6]), 0xF0);
  for (int k = 0; k < 6; ++k) EXPECT_EQ(one[k], 0);
}

TEST(Snapshot, RejectsDamagedFiles) {
  const std::string dir = temp_dir("damaged");
  const Grid g(4, 4, 1.0, 1.0);
  write_snapshot(dir + "/ok.snap", g, 0.0, g.constant(2.0));
  std::string bytes = slurp(dir + "/ok.snap");
  std::ofstream(dir + "/short.snap", std::ios::binary) << bytes.substr(0, bytes.size() - 3);
  EXPECT_THROW(read_snapshot(dir + "/short.snap"), IoError);
  std::ofstream(dir + "/magic.snap", std::ios::binary) << "NOTASNAP v1 4 4 1 1 0\n";
  EXPECT_THROW(read_snapshot(dir + "/magic.snap"), IoError);
  std::ofstream(dir + "/grid.snap", std::ios::binary) << "ESAVSNAP v1 3 4 1 1 0\n";
  EXPECT_THROW(read_snapshot(dir + "/grid.snap"), IoError);
  EXPECT_THROW(read_snapshot(dir + "/missing.snap"), IoError);
  EXPECT_THROW(write_snapshot(dir + "/x.snap", g, 0.0, Field::Zero(4, 2)), InvalidArgument);
  EXPECT_THROW(write_snapshot(dir + "/no/such/dir/x.snap", g, 0.0, g.zeros()), IoError);
}

TEST(TraceCsv, HeadersAndRoundTrip) {
  const std::string dir = temp_dir("trace");
  TraceRow r;
  r.t = 0.1;
  r.original_energy = 1.0 / 3.0;
  r.modified_energy = -2e-300;
  r.s_r = 0.7;
  r.s_q = 0.9;
  r.mass = 1e-17;
  r.mass_rho = 3.0;
  r.inner_iters = 12;
  r.solves = 13;
  write_trace_csv(dir + "/one.csv", {r}, false);
  write_trace_csv(dir + "/two.csv", {r, r}, true);
  EXPECT_EQ(slurp(dir + "/one.csv").substr(0, 48), "t,E_original,E_modified,s_r,mass,inner_iters,sol");
  EXPECT_EQ(slurp(dir + "/two.csv").rfind("t,E_original,E_modified,s_r,s_q,mass,mass_rho,inner_iters,solves\n", 0), 0u);
  const auto back = read_trace_csv(dir + "/two.csv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].original_energy, r.original_energy);
  EXPECT_EQ(back[1].modified_energy, r.modified_energy);
  EXPECT_EQ(back[1].s_q, r.s_q);
  EXPECT_EQ(back[1].mass_rho, r.mass_rho);
  EXPECT_EQ(back[1].solves, 13);
  const auto one = read_trace_csv(dir + "/one.csv");
  EXPECT_EQ(one[0].s_q, 0.0);
  EXPECT_EQ(one[0].mass, r.mass);
}

TEST(ConvergenceCsv, RatesAndHeader) {
  std::vector<ConvergenceRow> rows(3);
  rows[0].dt = 0.4;
  rows[1].dt = 0.2;
  rows[2].dt = 0.1;
  rows[0].error_phi = 8e-2;
  rows[1].error_phi = 2e-2;
  rows[2].error_phi = 5e-3;
  fill_rates(rows);
  EXPECT_FALSE(rows[0].rate_phi.has_value());
  EXPECT_NEAR(*rows[1].rate_phi, 2.0, 1e-14);
  EXPECT_NEAR(*rows[2].rate_phi, 2.0, 1e-14);
  EXPECT_FALSE(rows[1].rate_rho.has_value());
  const std::string one = convergence_csv(rows, false);
  EXPECT_EQ(one.substr(0, one.find('\n')), "dt,error_phi,rate_phi");
  EXPECT_EQ(one.substr(one.find('\n') + 1, one.find('\n', one.find('\n') + 1) - one.find('\n') - 1),
            "0.40000000000000002,0.080000000000000002,");
  for (auto& r : rows) r.error_rho = r.error_phi / 2;
  fill_rates(rows);
  EXPECT_NEAR(*rows[2].rate_rho, 2.0, 1e-14);
  const std::string two = convergence_csv(rows, true);
  EXPECT_EQ(two.substr(0, two.find('\n')), "dt,error_phi,error_rho,rate_phi,rate_rho");
}

TEST(Format, RoundTripsDoubles) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -123456.789, std::numeric_limits<double>::max()})
    EXPECT_EQ(std::stod(format_double(v)), v);
}
