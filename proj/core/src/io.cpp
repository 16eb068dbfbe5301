#include "modspace/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "binary dumps assume a little-endian host");

namespace modspace {

namespace {

struct DumpHeader {
  std::uint32_t N, n, n_xi, m;
  double L;
};

void write_header(std::ofstream& os, const DumpHeader& h) {
  os.write(reinterpret_cast<const char*>(&h.N), 4);
  os.write(reinterpret_cast<const char*>(&h.n), 4);
  os.write(reinterpret_cast<const char*>(&h.n_xi), 4);
  os.write(reinterpret_cast<const char*>(&h.m), 4);
  os.write(reinterpret_cast<const char*>(&h.L), 8);
}

DumpHeader read_header(std::ifstream& is) {
  DumpHeader h{};
  is.read(reinterpret_cast<char*>(&h.N), 4);
  is.read(reinterpret_cast<char*>(&h.n), 4);
  is.read(reinterpret_cast<char*>(&h.n_xi), 4);
  is.read(reinterpret_cast<char*>(&h.m), 4);
  is.read(reinterpret_cast<char*>(&h.L), 8);
  if (!is) throw std::runtime_error("field dump: truncated header");
  return h;
}

void write_payload(std::ofstream& os, const std::vector<Complex>& data) {
  for (const Complex& z : data) {
    const double re = z.real(), im = z.imag();
    os.write(reinterpret_cast<const char*>(&re), 8);
    os.write(reinterpret_cast<const char*>(&im), 8);
  }
}

void read_payload(std::ifstream& is, std::vector<Complex>& data) {
  for (Complex& z : data) {
    double re, im;
    is.read(reinterpret_cast<char*>(&re), 8);
    is.read(reinterpret_cast<char*>(&im), 8);
    z = Complex(re, im);
  }
  if (!is) throw std::runtime_error("field dump: truncated payload");
}

}  // namespace

void write_field(const std::string& path, const SpinorField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  write_header(os, {static_cast<std::uint32_t>(f.grid().dim()),
                    static_cast<std::uint32_t>(f.grid().n()), 0u,
                    static_cast<std::uint32_t>(f.components()),
                    f.grid().half_width()});
  write_payload(os, f.data());
}

void write_field(const std::string& path, const PhaseSpaceField& F) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  write_header(os, {static_cast<std::uint32_t>(F.grid().dim()),
                    static_cast<std::uint32_t>(F.grid().n()),
                    static_cast<std::uint32_t>(F.grid().n()),
                    static_cast<std::uint32_t>(F.components()),
                    F.grid().half_width()});
  write_payload(os, F.data());
}

SpinorField read_spinor_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_spinor_field: cannot open " + path);
  const DumpHeader h = read_header(is);
  if (h.n_xi != 0)
    throw std::runtime_error("read_spinor_field: dump is phase-space data");
  Grid g(static_cast<int>(h.N), static_cast<int>(h.n), h.L);
  SpinorField f(g, static_cast<int>(h.m));
  read_payload(is, f.data());
  return f;
}

PhaseSpaceField read_phase_space_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::runtime_error("read_phase_space_field: cannot open " + path);
  const DumpHeader h = read_header(is);
  if (h.n_xi != h.n)
    throw std::runtime_error(
        "read_phase_space_field: dump is not full-resolution phase-space "
        "data");
  Grid g(static_cast<int>(h.N), static_cast<int>(h.n), h.L);
  PhaseSpaceField F(g, static_cast<int>(h.m));
  read_payload(is, F.data());
  return F;
}

std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace modspace
