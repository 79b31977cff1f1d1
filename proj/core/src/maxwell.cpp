#include "mplab/maxwell.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "mplab/differential.hpp"

namespace mplab {

namespace {

VectorField weighted_curl_curl(const VectorField& A) {
  // W^{-1} C^T W C A : the exact derivative field of the trapezoid-rule
  // field energy, equal to curl(curl A) in the interior
  const Grid3& g = A.grid();
  VectorField cA = curl(A);
  const int n = g.n();
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = g.index(i, j, k);
        const double w = g.weight(i, j, k);
        for (int c = 0; c < 3; ++c) cA.comp(idx, c) *= w;
      }
  VectorField out = curl_transpose(cA);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = g.index(i, j, k);
        const double w = g.weight(i, j, k);
        for (int c = 0; c < 3; ++c) out.comp(idx, c) /= w;
      }
  return out;
}

} // namespace

double weighted_norm(const VectorField& v) {
  const Grid3& g = v.grid();
  const int n = g.n();
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = g.index(i, j, k);
        double q = 0.0;
        for (int c = 0; c < 3; ++c) q += v.comp(idx, c) * v.comp(idx, c);
        s += g.weight(i, j, k) * q;
      }
  return std::sqrt(s);
}

EnergyReport total_energy(OperatorKind kind, double beta, double h, const ScalarField& V,
                          const std::optional<VectorField>& A,
                          const EigenSolveOptions& opts) {
  if (!(beta > 0.0)) throw std::invalid_argument("total_energy: beta must be > 0 (or +inf)");
  EnergyReport rep;
  rep.beta = beta;
  rep.h = h;
  rep.kappa = beta * h;
  const bool magnetic = A.has_value() && std::isfinite(beta);
  HamiltonianSpec spec(kind, h, V, magnetic ? A : std::nullopt);
  auto [ns, pr] = negative_spectrum_full(spec, opts);
  (void)pr;
  rep.trace_negative = ns.sum_negative;
  rep.field_energy = magnetic ? field_energy(curl(*A), beta) : 0.0;
  rep.total = rep.trace_negative + rep.field_energy;
  rep.states = ns.count;
  rep.converged = ns.converged;
  rep.boundary_ambiguous = ns.boundary_ambiguous;
  return rep;
}

GradientResult energy_gradient(OperatorKind kind, double beta, double h,
                               const ScalarField& V, const VectorField& A,
                               const EigenSolveOptions& opts) {
  if (!std::isfinite(beta)) throw std::invalid_argument("energy_gradient: beta must be finite");
  HamiltonianSpec spec(kind, h, V, A);
  auto [ns, pr] = negative_spectrum_full(spec, opts);
  GradientResult out{VectorField(A.grid()), VectorField(A.grid()), true};
  out.reliable = ns.converged && !ns.boundary_ambiguous;
  out.current = current(pr, spec);
  VectorField g = weighted_curl_curl(A);
  g *= 2.0 * beta;
  VectorField cur = out.current;
  cur *= kCurrentNormalization;
  g -= cur;
  out.gradient = g;
  return out;
}

VectorField coulomb_project(const VectorField& A, double tol, int max_iter) {
  const Grid3& g = A.grid();
  const std::size_t nn = g.node_count();

  auto remove_mean = [nn](ScalarField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < nn; ++i) m += f[i];
    m /= static_cast<double>(nn);
    for (std::size_t i = 0; i < nn; ++i) f[i] -= m;
  };

  ScalarField b = gradient_transpose(A);
  remove_mean(b);
  double bnorm = 0.0;
  for (std::size_t i = 0; i < nn; ++i) bnorm += b[i] * b[i];
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) return A;

  auto op = [&](const ScalarField& x) {
    ScalarField y = gradient_transpose(gradient(x));
    remove_mean(y);
    return y;
  };

  ScalarField x(g), r = b, p = b;
  double rs = bnorm * bnorm;
  for (int it = 0; it < max_iter; ++it) {
    ScalarField Ap = op(p);
    double pAp = 0.0;
    for (std::size_t i = 0; i < nn; ++i) pAp += p[i] * Ap[i];
    if (pAp <= 0.0) break;
    const double alpha = rs / pAp;
    for (std::size_t i = 0; i < nn; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    double rs2 = 0.0;
    for (std::size_t i = 0; i < nn; ++i) rs2 += r[i] * r[i];
    if (std::sqrt(rs2) <= tol * bnorm) break;
    const double betacg = rs2 / rs;
    rs = rs2;
    for (std::size_t i = 0; i < nn; ++i) p[i] = r[i] + betacg * p[i];
  }

  VectorField out = A;
  out -= gradient(x);
  return out;
}

std::pair<VectorField, SpinorField> gauge_transform(const VectorField& A,
                                                    const ScalarField& eta,
                                                    const SpinorField& psi, double h) {
  require_same_grid(A.grid(), eta.grid(), "gauge_transform");
  require_same_grid(A.grid(), psi.grid(), "gauge_transform");
  VectorField Ap = A;
  Ap += gauge_gradient(eta);
  SpinorField psip = psi;
  for (std::size_t i = 0; i < A.grid().node_count(); ++i) {
    const complexd phase = std::polar(1.0, eta[i] / h);
    psip.comp(i, 0) *= phase;
    psip.comp(i, 1) *= phase;
  }
  return {Ap, psip};
}

MinimizeResult minimize_energy(OperatorKind kind, double beta, double h,
                               const ScalarField& V, const VectorField& seed,
                               const MinimizerConfig& config) {
  if (!std::isfinite(beta)) throw std::invalid_argument("minimize_energy: beta must be finite");
  MinimizeResult res{seed, {}, {}, false};
  VectorField A = config.coulomb_projection ? coulomb_project(seed) : seed;

  EigenSolveOptions eo = config.eigen;
  SpectralProjector warm;
  bool have_warm = false;

  auto evaluate = [&](const VectorField& cand, EnergyReport& rep, SpectralProjector& pr) {
    HamiltonianSpec spec(kind, h, V, cand);
    EigenSolveOptions local = eo;
    if (have_warm) local.warm_start = &warm;
    auto [ns, p] = negative_spectrum_full(spec, local);
    rep.beta = beta;
    rep.h = h;
    rep.kappa = beta * h;
    rep.trace_negative = ns.sum_negative;
    rep.field_energy = field_energy(curl(cand), beta);
    rep.total = rep.trace_negative + rep.field_energy;
    rep.states = ns.count;
    rep.converged = ns.converged;
    rep.boundary_ambiguous = ns.boundary_ambiguous;
    pr = std::move(p);
  };

  EnergyReport cur;
  SpectralProjector pr;
  evaluate(A, cur, pr);
  warm = pr;
  have_warm = true;

  res.A = A;
  res.report = cur;

  double step = config.initial_step;
  VectorField prevA(A.grid());
  VectorField prevG(A.grid());
  bool have_prev = false;

  for (int iter = 0; iter < config.max_iters; ++iter) {
    HamiltonianSpec spec(kind, h, V, A);
    VectorField J = current(pr, spec);
    VectorField grad = weighted_curl_curl(A);
    grad *= 2.0 * beta;
    VectorField scaled = J;
    scaled *= kCurrentNormalization;
    grad -= scaled;

    const double gnorm = weighted_norm(grad);
    std::string flags = cur.boundary_ambiguous ? "ambiguous" : "";
    res.log.push_back({iter, cur.total, cur.trace_negative, cur.field_energy, step, gnorm, flags});
    if (gnorm <= config.grad_tol) break;

    // Barzilai-Borwein step guess, clamped, then energy-decrease backtracking
    if (have_prev) {
      double sy = 0.0, yy = 0.0;
      const Grid3& g = A.grid();
      for (int k = 0; k < g.n(); ++k)
        for (int j = 0; j < g.n(); ++j)
          for (int i = 0; i < g.n(); ++i) {
            const std::size_t idx = g.index(i, j, k);
            const double w = g.weight(i, j, k);
            for (int c = 0; c < 3; ++c) {
              const double s = A.comp(idx, c) - prevA.comp(idx, c);
              const double y = grad.comp(idx, c) - prevG.comp(idx, c);
              sy += w * s * y;
              yy += w * y * y;
            }
          }
      if (sy > 0.0 && yy > 0.0) step = std::min(std::max(sy / yy, 1e-6), 1e3);
    }
    prevA = A;
    prevG = grad;
    have_prev = true;

    bool accepted = false;
    for (int bt = 0; bt < config.max_backtracks; ++bt) {
      VectorField trial = A;
      VectorField delta = grad;
      delta *= step;
      trial -= delta;
      if (config.coulomb_projection) trial = coulomb_project(trial);
      EnergyReport trialRep;
      SpectralProjector trialPr;
      evaluate(trial, trialRep, trialPr);
      if (trialRep.total < cur.total) {
        A = trial;
        cur = trialRep;
        pr = std::move(trialPr);
        warm = pr;
        accepted = true;
        if (cur.total < res.report.total) {
          res.A = A;
          res.report = cur;
        }
        break;
      }
      step *= config.backtrack_factor;
    }
    if (!accepted) break; // no descent direction at line-search resolution
    if (iter == config.max_iters - 1) res.hit_iteration_cap = true;
  }
  return res;
}

void write_minimizer_csv(const std::vector<MinimizerStep>& log, std::ostream& os) {
  os << "iter,total,trace_negative,field_energy,step,grad_norm,flags\n";
  char buf[256];
  for (const auto& s : log) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", s.iter, s.total,
                  s.trace_negative, s.field_energy, s.step, s.grad_norm, s.flags.c_str());
    os << buf;
  }
}

} // namespace mplab
