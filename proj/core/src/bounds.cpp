#include "mplab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace mplab {

double weyl_value(const ScalarField& V, OperatorKind kind) {
  const double c = (kind == OperatorKind::Pauli ? 2.0 : 1.0) / (15.0 * M_PI * M_PI);
  return -c * lp_norm_power(V, 2.5);
}

TwoTermBound lieb_thirring_rhs(const ScalarField& V, const VectorField& B, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("lieb_thirring_rhs: h must be > 0");
  TwoTermBound out;
  out.term_potential = lp_norm_power(V, 2.5) / (h * h * h);
  const double b2 = field_energy(B, 1.0);
  out.term_field = std::pow(b2 / (h * h), 0.75) * std::pow(lp_norm_power(V, 4.0), 0.25);
  out.value = -(out.term_potential + out.term_field);
  return out;
}

TwoTermBound stability_lower(const ScalarField& V, double beta, double h) {
  if (!(beta > 0.0) || !(h > 0.0))
    throw std::invalid_argument("stability_lower: beta and h must be > 0");
  TwoTermBound out;
  out.term_potential = lp_norm_power(V, 2.5);
  const double kappa = beta * h;
  out.term_field = std::isinf(kappa) ? 0.0 : lp_norm_power(V, 4.0) / (kappa * kappa * kappa);
  out.value = -(out.term_potential + out.term_field);
  return out;
}

std::vector<double> oscillator_levels(double B, int count) {
  if (B < 0.0) throw std::invalid_argument("oscillator_levels: B must be >= 0");
  if (count < 1) throw std::invalid_argument("oscillator_levels: count must be >= 1");
  const double root = std::sqrt(1.0 + B * B);
  // e >= (n1+n2)(root - B) + root + n3 + 1/2, and root - B > 0, so a finite
  // enumeration box suffices once we know a cap on the count-th level
  std::vector<double> levels;
  double cap = root + 0.5;
  for (;;) {
    levels.clear();
    const int s_max = static_cast<int>((cap - root - 0.5) / (root - B)) + 1;
    const int n3_max = static_cast<int>(cap - root - 0.5) + 1;
    for (int s = 0; s <= s_max; ++s)
      for (int n1 = 0; n1 <= s; ++n1) {
        const int n2 = s - n1;
        const double base = (s + 1) * root + (n1 - n2) * B + 0.5;
        if (base > cap) continue;
        for (int n3 = 0; n3 <= n3_max; ++n3) {
          const double e = base + n3;
          if (e <= cap) levels.push_back(e);
        }
      }
    if (static_cast<int>(levels.size()) >= count) break;
    cap *= 2.0;
  }
  std::sort(levels.begin(), levels.end());
  levels.resize(count);
  return levels;
}

bool oscillator_closed_form_valid(double B) {
  // e(0,1,0) < 5/2 and the next candidates at or above it
  return B >= 0.0 && B < 4.0 / 3.0;
}

double oscillator_negative_sum(double B) {
  if (oscillator_closed_form_valid(B)) return 3.0 * std::sqrt(1.0 + B * B) - 4.0 - B;
  double sum = 0.0;
  int count = 64;
  for (;;) {
    auto levels = oscillator_levels(B, count);
    if (levels.back() >= 2.5) {
      sum = 0.0;
      for (double e : levels)
        if (e < 2.5) sum += e - 2.5;
      return sum;
    }
    count *= 2;
  }
}

BoundReport check_lt_constant(const std::vector<LtSample>& samples) {
  BoundReport rep;
  rep.name = "magnetic_lieb_thirring";
  double cmax = 0.0;
  for (const auto& s : samples) {
    const double structural = s.int_v52 / (s.h * s.h * s.h) +
                              std::pow(s.int_b2 / (s.h * s.h), 0.75) * std::pow(s.int_v4, 0.25);
    if (s.trace >= 0.0 || structural <= 0.0) {
      rep.per_sample_slack.push_back(0.0); // trivially satisfied sample
      continue;
    }
    const double c = -s.trace / structural;
    cmax = std::max(cmax, c);
    rep.per_sample_slack.push_back(c);
  }
  rep.empirical_constant = cmax;
  rep.lhs = 0.0;
  rep.rhs = 0.0;
  for (const auto& s : samples) rep.lhs = std::min(rep.lhs, s.trace);
  rep.satisfied = std::isfinite(cmax);
  return rep;
}

void write_bound_csv(const std::vector<BoundReport>& reports, std::ostream& os) {
  os << "name,lhs,rhs,empirical_C,satisfied\n";
  char buf[256];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%d\n", r.name.c_str(), r.lhs, r.rhs,
                  r.empirical_constant, r.satisfied ? 1 : 0);
    os << buf;
  }
}

} // namespace mplab
