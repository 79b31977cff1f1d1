#include "mplab/field_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace mplab {

namespace {

void write_header(std::ofstream& os, const char* kind, const Grid3& g) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "MPLAB1 %s %d %.17g\n", kind, g.n(), g.half_width());
  os << buf;
}

void write_doubles(std::ofstream& os, const double* data, std::size_t count) {
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

struct Header {
  std::string kind;
  int n;
  double L;
};

Header read_header(std::ifstream& is, const std::string& path) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("checkpoint truncated: " + path);
  std::istringstream ss(line);
  std::string magic;
  Header h;
  ss >> magic >> h.kind >> h.n >> h.L;
  if (!ss || magic != "MPLAB1") throw std::runtime_error("not an MPLAB1 checkpoint: " + path);
  return h;
}

void read_doubles(std::ifstream& is, double* data, std::size_t count, const std::string& path) {
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double))
    throw std::runtime_error("checkpoint truncated: " + path);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  return is;
}

} // namespace

void save_field(const ScalarField& f, const std::string& path) {
  auto os = open_out(path);
  write_header(os, "scalar", f.grid());
  write_doubles(os, f.values().data(), f.values().size());
}

void save_field(const VectorField& f, const std::string& path) {
  auto os = open_out(path);
  write_header(os, "vector", f.grid());
  write_doubles(os, f.values().data(), f.values().size());
}

void save_field(const SpinorField& f, const std::string& path) {
  auto os = open_out(path);
  write_header(os, "spinor", f.grid());
  // complex<double> is laid out re,im — matches the interleaved format
  write_doubles(os, reinterpret_cast<const double*>(f.values().data()), 2 * f.values().size());
}

ScalarField load_scalar_field(const std::string& path) {
  auto is = open_in(path);
  Header h = read_header(is, path);
  if (h.kind != "scalar") throw std::runtime_error("checkpoint kind mismatch: " + path);
  ScalarField f(Grid3(h.n, h.L));
  read_doubles(is, f.values().data(), f.values().size(), path);
  return f;
}

VectorField load_vector_field(const std::string& path) {
  auto is = open_in(path);
  Header h = read_header(is, path);
  if (h.kind != "vector") throw std::runtime_error("checkpoint kind mismatch: " + path);
  VectorField f(Grid3(h.n, h.L));
  read_doubles(is, f.values().data(), f.values().size(), path);
  return f;
}

SpinorField load_spinor_field(const std::string& path) {
  auto is = open_in(path);
  Header h = read_header(is, path);
  if (h.kind != "spinor") throw std::runtime_error("checkpoint kind mismatch: " + path);
  SpinorField f(Grid3(h.n, h.L));
  read_doubles(is, reinterpret_cast<double*>(f.values().data()), 2 * f.values().size(), path);
  return f;
}

} // namespace mplab
