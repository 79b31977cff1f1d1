#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mplab/lab.hpp"

namespace mplab::lab {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
} // namespace

Scenario Scenario::from_string(const std::string& text) {
  Scenario s;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("scenario line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("scenario line " + std::to_string(lineno) + ": empty key");
    s.entries_[key] = value;
  }
  return s;
}

Scenario Scenario::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read scenario file " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return from_string(buf.str());
}

bool Scenario::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string Scenario::get(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Scenario::number(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return std::stod(it->second);
}

int Scenario::integer(const std::string& key, int fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return std::stoi(it->second);
}

std::vector<double> Scenario::list(const std::string& key, std::vector<double> fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<double> out;
  std::istringstream is(it->second);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::runtime_error("scenario key '" + key + "': empty list");
  return out;
}

void Scenario::set(const std::string& key, const std::string& value) { entries_[key] = value; }

std::uint64_t Scenario::seed() const {
  return static_cast<std::uint64_t>(std::stoull(get("seed", "20240901")));
}

bool ExperimentResult::all_pass() const {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

} // namespace mplab::lab

namespace mplab {

namespace {
// windowed random trig series; window keeps a few boundary layers at zero
double window(double r, double rw) {
  if (r >= rw) return 0.0;
  const double t = r / rw;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}
} // namespace

ScalarField random_smooth_scalar(const Grid3& g, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int modes = 2;
  std::vector<double> c;
  for (int i = 0; i < 3 * modes * 2; ++i) c.push_back(u(rng));
  const double L = g.half_width();
  const double rw = L - 4.0 * g.spacing();
  return ScalarField::sample(g, [&, c](double x, double y, double z) {
    double v = 0.0;
    int q = 0;
    const double xs[3] = {x, y, z};
    for (int axis = 0; axis < 3; ++axis)
      for (int m = 1; m <= modes; ++m) {
        v += c[q++] * std::sin(M_PI * m * (xs[axis] + L) / L);
        v += c[q++] * std::cos(M_PI * m * (xs[axis] + L) / L);
      }
    const double r = std::sqrt(x * x + y * y + z * z);
    return amplitude * v * window(r, rw);
  });
}

VectorField random_interior_vector(const Grid3& g, std::uint64_t seed, double amplitude) {
  VectorField out(g);
  for (int comp = 0; comp < 3; ++comp) {
    ScalarField f = random_smooth_scalar(g, seed + 1000 * (comp + 1), amplitude);
    for (std::size_t i = 0; i < g.node_count(); ++i) out.comp(i, comp) = f[i];
  }
  return out;
}

} // namespace mplab
