#include "mplab/lobpcg.hpp"

#include <complex>
#include <cstdio>
#include <cstdlib>
#include <random>

namespace mplab {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

// SVQB orthonormalization; drops near-dependent columns. The same right
// transform is applied to the coupled block (typically H*S) so the pair
// stays consistent without extra operator applications.
void svqb(MatrixXcd& S, MatrixXcd* coupled) {
  if (S.cols() == 0) return;
  MatrixXcd G = S.adjoint() * S;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(G);
  const VectorXd& d = es.eigenvalues();
  const double cutoff = std::max(d(d.size() - 1), 0.0) * 1e-12;
  int keep = 0;
  for (int i = 0; i < d.size(); ++i)
    if (d(i) > cutoff) ++keep;
  MatrixXcd T(G.rows(), keep);
  int col = 0;
  for (int i = 0; i < d.size(); ++i)
    if (d(i) > cutoff) T.col(col++) = es.eigenvectors().col(i) / std::sqrt(d(i));
  S = S * T;
  if (coupled) *coupled = (*coupled) * T;
}

void project_out(const MatrixXcd& Q, MatrixXcd& X) {
  if (Q.cols() == 0 || X.cols() == 0) return;
  X -= Q * (Q.adjoint() * X);
}

} // namespace

LobpcgReport lobpcg_lowest(const BlockOperator& H, std::size_t dim, int nev,
                           const LobpcgOptions& opts, const BlockOperator* precond,
                           const Eigen::MatrixXcd* locked,
                           const Eigen::MatrixXcd* warm_start) {
  MatrixXcd Qext = locked ? *locked : MatrixXcd(dim, 0);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXcd X(dim, nev);
  int seeded = 0;
  if (warm_start && warm_start->rows() == static_cast<Eigen::Index>(dim)) {
    seeded = std::min<int>(nev, static_cast<int>(warm_start->cols()));
    X.leftCols(seeded) = warm_start->leftCols(seeded);
  }
  for (int c = seeded; c < nev; ++c)
    for (std::size_t i = 0; i < dim; ++i) X(i, c) = cd(gauss(rng), gauss(rng));

  project_out(Qext, X);
  svqb(X, nullptr);
  svqb(X, nullptr);
  while (X.cols() < nev) {
    MatrixXcd extra(dim, nev - X.cols());
    for (int c = 0; c < extra.cols(); ++c)
      for (std::size_t i = 0; i < dim; ++i) extra(i, c) = cd(gauss(rng), gauss(rng));
    project_out(Qext, extra);
    project_out(X, extra);
    MatrixXcd joined(dim, X.cols() + extra.cols());
    joined << X, extra;
    X = joined;
    svqb(X, nullptr);
  }

  MatrixXcd HX(dim, nev);
  H(X, HX);
  {
    MatrixXcd T = X.adjoint() * HX;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es((T + T.adjoint()) / 2.0);
    X = X * es.eigenvectors();
    HX = HX * es.eigenvectors();
  }

  // columns converged at full tolerance below the guard level migrate into
  // this internal locked set and leave the working block
  MatrixXcd Lk(dim, 0);
  std::vector<double> lk_vals, lk_res;

  MatrixXcd P(dim, 0), HP(dim, 0);
  VectorXd lambda(nev), resnorm(nev);

  LobpcgReport rep;
  double best_worst = std::numeric_limits<double>::infinity();
  int since_improvement = 0;
  const bool trace = std::getenv("MPLAB_LOBPCG_TRACE") != nullptr;

  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    rep.iterations = iter;
    const int b = static_cast<int>(X.cols());
    lambda.resize(b);
    resnorm.resize(b);
    for (int c = 0; c < b; ++c) lambda(c) = std::real(X.col(c).dot(HX.col(c)));

    MatrixXcd R = HX;
    for (int c = 0; c < b; ++c) R.col(c) -= lambda(c) * X.col(c);
    for (int c = 0; c < b; ++c) resnorm(c) = R.col(c).norm();

    auto full_bound = [&](int c) {
      return std::max(opts.tol * std::abs(lambda(c)) + opts.tol, opts.floor_resid);
    };
    auto bound = [&](int c) {
      if (lambda(c) < opts.guard_level) return full_bound(c);
      const double guard = std::max(opts.guard_tol * (std::abs(lambda(c)) + 1.0),
                                    0.25 * std::max(lambda(c) - opts.guard_level, 0.0));
      return std::max(std::max(full_bound(c), guard), opts.floor_resid);
    };

    bool all = true;
    double worst_resid = 0.0;
    for (int c = 0; c < b; ++c) {
      worst_resid = std::max(worst_resid, resnorm(c));
      if (resnorm(c) > bound(c)) all = false;
    }
    if (worst_resid < 0.99 * best_worst) {
      best_worst = worst_resid;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    if (trace && iter % 10 == 0)
      std::fprintf(stderr, "[lobpcg] it=%d b=%d locked=%d resid=%.3e since=%d\n", iter, b,
                   static_cast<int>(Lk.cols()), worst_resid, since_improvement);

    if (all || iter == opts.max_iterations || since_improvement > opts.stagnation_window) {
      rep.converged = all;
      break;
    }

    // hard-lock the converged ascending prefix (guards are never locked)
    int lockable = 0;
    while (lockable < b && lambda(lockable) < opts.guard_level &&
           resnorm(lockable) <= full_bound(lockable))
      ++lockable;
    if (lockable > 0 && lockable < b) {
      MatrixXcd grown(dim, Lk.cols() + lockable);
      grown << Lk, X.leftCols(lockable);
      Lk = grown;
      for (int c = 0; c < lockable; ++c) {
        lk_vals.push_back(lambda(c));
        lk_res.push_back(resnorm(c));
      }
      X = X.rightCols(b - lockable).eval();
      HX = HX.rightCols(b - lockable).eval();
      R = R.rightCols(b - lockable).eval();
      lambda = lambda.tail(b - lockable).eval();
      resnorm = resnorm.tail(b - lockable).eval();
      P.resize(dim, 0); // restart the implicit CG directions
      HP.resize(dim, 0);
    }
    const int ba = static_cast<int>(X.cols());

    // search directions only for the columns that still miss their bound
    std::vector<int> active;
    for (int c = 0; c < ba; ++c) {
      const double bd = (lambda(c) < opts.guard_level)
                            ? full_bound(c)
                            : std::max({full_bound(c),
                                        opts.guard_tol * (std::abs(lambda(c)) + 1.0),
                                        0.25 * std::max(lambda(c) - opts.guard_level, 0.0)});
      if (resnorm(c) > bd) active.push_back(c);
    }
    if (active.empty()) active.push_back(ba - 1);
    MatrixXcd Ract(dim, active.size());
    for (std::size_t t = 0; t < active.size(); ++t) Ract.col(t) = R.col(active[t]);

    MatrixXcd W(dim, Ract.cols());
    if (precond)
      (*precond)(Ract, W);
    else
      W = Ract;
    project_out(Qext, W);
    project_out(Lk, W);
    project_out(X, W);
    project_out(P, W);
    svqb(W, nullptr);

    MatrixXcd HW(dim, W.cols());
    H(W, HW);

    const int m = ba + static_cast<int>(W.cols()) + static_cast<int>(P.cols());
    MatrixXcd S(dim, m), HS(dim, m);
    S << X, W, P;
    HS << HX, HW, HP;

    MatrixXcd T = S.adjoint() * HS;
    MatrixXcd G = S.adjoint() * S;
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXcd> es(
        (T + T.adjoint()) / 2.0, (G + G.adjoint()) / 2.0);
    MatrixXcd Y = es.eigenvectors().leftCols(ba);

    MatrixXcd Yp = Y;
    Yp.topRows(ba).setZero(); // implicit CG direction: drop the X contribution
    P = S * Yp;
    HP = HS * Yp;
    svqb(P, &HP);

    X = S * Y;
    HX = HS * Y;
  }

  // assemble locked + active, ascending (locked prefixes are always lowest)
  const int total = static_cast<int>(Lk.cols() + X.cols());
  rep.eigenvalues.resize(total);
  rep.residuals.resize(total);
  rep.eigenvectors.resize(dim, total);
  for (int c = 0; c < Lk.cols(); ++c) {
    rep.eigenvalues(c) = lk_vals[c];
    rep.residuals(c) = lk_res[c];
    rep.eigenvectors.col(c) = Lk.col(c);
  }
  for (int c = 0; c < X.cols(); ++c) {
    const int t = static_cast<int>(Lk.cols()) + c;
    rep.eigenvalues(t) = lambda(c);
    rep.residuals(t) = resnorm(c);
    rep.eigenvectors.col(t) = X.col(c);
  }
  return rep;
}

} // namespace mplab
