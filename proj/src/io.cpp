#include "esav/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace esav {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void check_written(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (size_t i = 0; i < rows.size(); ++i) {
    rows[i].rate_phi.reset();
    rows[i].rate_rho.reset();
    if (i == 0) continue;
    const double ldt = std::log(rows[i - 1].dt / rows[i].dt);
    rows[i].rate_phi = std::log(rows[i - 1].error_phi / rows[i].error_phi) / ldt;
    if (rows[i].error_rho && rows[i - 1].error_rho)
      rows[i].rate_rho = std::log(*rows[i - 1].error_rho / *rows[i].error_rho) / ldt;
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows, bool two_fields) {
  auto out = open_out(path);
  out << (two_fields ? "t,E_original,E_modified,s_r,s_q,mass,mass_rho,inner_iters,solves\n"
                     : "t,E_original,E_modified,s_r,mass,inner_iters,solves\n");
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.original_energy) << ',' << format_double(r.modified_energy)
        << ',' << format_double(r.s_r);
    if (two_fields) out << ',' << format_double(r.s_q);
    out << ',' << format_double(r.mass);
    if (two_fields) out << ',' << format_double(r.mass_rho);
    out << ',' << r.inner_iters << ',' << r.solves << '\n';
  }
  check_written(out, path);
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty trace file '" + path + "'");
  const bool two = split(line, ',').size() == 9;
  std::vector<TraceRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != (two ? 9u : 7u))
      throw IoError(path + ":" + std::to_string(lineno) + ": wrong number of columns");
    try {
      TraceRow r;
      size_t k = 0;
      r.t = std::stod(f[k++]);
      r.original_energy = std::stod(f[k++]);
      r.modified_energy = std::stod(f[k++]);
      r.s_r = std::stod(f[k++]);
      if (two) r.s_q = std::stod(f[k++]);
      r.mass = std::stod(f[k++]);
      if (two) r.mass_rho = std::stod(f[k++]);
      r.inner_iters = std::stoi(f[k++]);
      r.solves = std::stoi(f[k++]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw IoError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows, bool two_fields) {
  std::ostringstream out;
  out << (two_fields ? "dt,error_phi,error_rho,rate_phi,rate_rho\n" : "dt,error_phi,rate_phi\n");
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rows) {
    out << format_double(r.dt) << ',' << format_double(r.error_phi);
    if (two_fields) out << ',' << opt(r.error_rho);
    out << ',' << opt(r.rate_phi);
    if (two_fields) out << ',' << opt(r.rate_rho);
    out << '\n';
  }
  return out.str();
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows, bool two_fields) {
  write_text(path, convergence_csv(rows, two_fields));
}

void write_snapshot(const std::string& path, const Grid& grid, double time, const Field& values) {
  grid.check_shape(values, "snapshot");
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "ESAVSNAP v1 " << grid.nx << ' ' << grid.ny << ' ' << format_double(grid.lx) << ' '
      << format_double(grid.ly) << ' ' << format_double(time) << '\n';
  std::vector<unsigned char> bytes(static_cast<size_t>(values.size()) * 8);
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const auto bits = std::bit_cast<std::uint64_t>(values.data()[k]);
    for (int b = 0; b < 8; ++b) bytes[8 * k + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  check_written(out, path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw IoError("missing snapshot header in '" + path + "'");
  std::istringstream hs(header);
  std::string magic, version;
  Snapshot s;
  hs >> magic >> version >> s.grid.nx >> s.grid.ny >> s.grid.lx >> s.grid.ly >> s.time;
  if (!hs || magic != "ESAVSNAP" || version != "v1") throw IoError("bad snapshot header in '" + path + "'");
  try {
    s.grid.validate();
  } catch (const InvalidArgument& e) {
    throw IoError("bad snapshot grid in '" + path + "': " + e.what());
  }
  std::vector<unsigned char> bytes(static_cast<size_t>(s.grid.size()) * 8);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) throw IoError("truncated snapshot '" + path + "'");
  s.values.resize(s.grid.nx, s.grid.ny);
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(bytes[8 * k + b]) << (8 * b);
    s.values.data()[k] = std::bit_cast<double>(bits);
  }
  return s;
}

void write_text(const std::string& path, const std::string& contents) {
  auto out = open_out(path);
  out << contents;
  check_written(out, path);
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec || !std::filesystem::is_directory(path)) throw IoError("cannot create directory '" + path + "'");
}

}  // namespace esav
