#include "wcsb/generator.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/IterativeSolvers>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wcsb/errors.hpp"
#include "wcsb/linear_operator.hpp"
#include "wcsb/truncated_space.hpp"

namespace wcsb {

namespace {

void check_levels(const ChaosKernel& g, int i, int n) {
  if (n < i) throw std::invalid_argument("truncation level below the first level");
  for (const auto& [m, lv] : g.levels()) {
    if (!lv.empty() && (m < i || m > n)) throw std::invalid_argument("g has support outside levels i..n");
  }
}

std::vector<Tuple> support(const ChaosKernel& g) {
  std::vector<Tuple> s;
  for (const auto& [m, lv] : g.levels()) {
    for (const auto& [t, v] : lv) {
      if (v != 0.0) s.push_back(t);
    }
  }
  return s;
}

// (-L0 - P A P) u with the projection onto levels i..n.
ChaosKernel truncated_operator(const ChaosKernel& u, int i, int n, const Vec& w) {
  ChaosKernel out = apply_multiplier(Multiplier::L0(), u);
  out.scale(-1.0);
  ChaosKernel a = apply_interaction(Sign::kPlus, u, w);
  a.axpy(1.0, apply_interaction(Sign::kMinus, u, w));
  out.axpy(-1.0, a.levels_between(i, n));
  out.drop_zeros();
  return out;
}

}  // namespace

ChaosKernel solve_ansatz_d2(const ChaosKernel& g, int i, int n, const Vec& w) {
  if (g.lattice().dim() != 2) throw std::invalid_argument("the diagonal ansatz is a d = 2 construction");
  check_levels(g, i, n);
  const Multiplier s = Multiplier::ShiftedInverse(w);
  ChaosKernel u(g.lattice_ptr());
  ChaosKernel prev(g.lattice_ptr());
  for (int j = i; j <= n; ++j) {
    ChaosKernel rhs = g.only_level(j);
    if (j > i) rhs.axpy(1.0, apply_interaction(Sign::kPlus, prev, w));
    prev = apply_multiplier(s, rhs);
    u.axpy(1.0, prev);
  }
  u.drop_zeros();
  return u;
}

double ansatz_residual(const ChaosKernel& u, const ChaosKernel& g, int i, int n, const Vec& w) {
  ChaosKernel lhs = apply_multiplier(Multiplier::L0(), u);
  lhs.axpy(1.0, apply_multiplier(Multiplier::L0w(w), apply_multiplier(Multiplier::Geps(w), u)));
  lhs.scale(-1.0);
  ChaosKernel rhs = g;
  rhs.axpy(1.0, apply_interaction(Sign::kPlus, u, w).levels_between(i + 1, n));
  lhs.axpy(-1.0, rhs);
  const double gn = norm(g);
  return gn > 0 ? norm(lhs) / gn : norm(lhs);
}

TruncatedSolve solve_truncated(const ChaosKernel& g, int i, int n, const Vec& w, double tol) {
  check_levels(g, i, n);
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  TruncatedSolve out(g.lattice_ptr());
  out.contraction = contraction_surrogate(g.lattice(), n);
  out.contraction_warning = out.contraction > 0.5;
  const std::vector<Tuple> seeds = support(g);
  if (seeds.empty()) {
    out.converged = true;
    return out;
  }
  TruncatedSpace space(g.lattice_ptr(), w, i, n, seeds);
  out.dim = space.dim();
  const CVector b = space.symmetrize_rhs(g);
  LinearOperator op(static_cast<Eigen::Index>(space.dim()), [&space](const CVector& x, CVector& y) {
    space.apply_T(x, y);
    y = x - y;
  });
  Eigen::GMRES<LinearOperator, Eigen::IdentityPreconditioner> gmres;
  gmres.setTolerance(tol);
  gmres.setMaxIterations(static_cast<Eigen::Index>(10 * space.dim()));
  gmres.set_restart(static_cast<int>(std::min<std::size_t>(space.dim(), 200)));
  gmres.compute(op);
  const CVector y = gmres.solve(b);
  out.iterations = static_cast<int>(gmres.iterations());
  CVector r;
  op.apply(y, r);
  out.residual = (r - b).norm() / b.norm();
  out.converged = out.residual <= tol * (1 + 1e-9);
  if (!out.converged) {
    std::ostringstream os;
    os << "GMRES stopped at relative residual " << out.residual << " after " << out.iterations << " iterations";
    throw NumericFailure(os.str());
  }
  out.u = space.unsymmetrize(y);
  out.u.drop_zeros();
  out.direct_residual = truncated_equation_residual(out.u, g, i, n, w);
  return out;
}

ChaosKernel dense_truncated_solve(const ChaosKernel& g, int i, int n, const Vec& w, std::size_t max_dim) {
  check_levels(g, i, n);
  const std::vector<Tuple> seeds = support(g);
  if (seeds.empty()) return ChaosKernel(g.lattice_ptr());
  TruncatedSpace space(g.lattice_ptr(), w, i, n, seeds);
  const std::size_t dim = space.dim();
  if (dim > max_dim) throw std::invalid_argument("truncated space too large for the dense solve");
  Eigen::MatrixXcd m(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    ChaosKernel e(g.lattice_ptr());
    e.set(space.tuple(c), 1.0);
    m.col(static_cast<Eigen::Index>(c)) = space.coordinates(truncated_operator(e, i, n, w));
  }
  const CVector x = m.partialPivLu().solve(space.coordinates(g));
  ChaosKernel u = space.kernel(x);
  u.drop_zeros();
  return u;
}

double truncated_equation_residual(const ChaosKernel& u, const ChaosKernel& g, int i, int n, const Vec& w) {
  ChaosKernel r = truncated_operator(u, i, n, w);
  r.axpy(-1.0, g);
  const double gn = norm(g);
  return gn > 0 ? norm(r) / gn : norm(r);
}

double fd_residual(const ChaosKernel& wker, const ChaosKernel& f, int i, const Vec& w) {
  ChaosKernel r = apply_multiplier(Multiplier::L0(), wker);
  r.scale(-1.0);
  r.axpy(-1.0, apply_interaction(Sign::kPlus, wker, w));
  // The level i-1 part of A- w is exactly A- w_i, which the residual adds back.
  ChaosKernel am = apply_interaction(Sign::kMinus, wker, w);
  r.axpy(-1.0, am.levels_between(i, kMaxLevel));
  r.axpy(-1.0, apply_interaction(Sign::kPlus, f, w));
  r.drop_zeros();
  return norm(apply_multiplier(Multiplier::FracL0(-0.5), r));
}

std::vector<ProfileRow> chaos_profile(const ChaosKernel& wker, int k) {
  std::vector<ProfileRow> rows;
  for (const auto& [n, lv] : wker.levels()) {
    if (lv.empty()) continue;
    ProfileRow r;
    r.n = n;
    const ChaosKernel level = wker.only_level(n);
    r.level_norm = weighted_norm(level, 0, 0.5);
    r.weighted_norm = weighted_norm(level, k, 0.5);
    rows.push_back(r);
  }
  return rows;
}

double contraction_surrogate(const Lattice& lat, int n) { return n * n * lat.lambda() * lat.lambda(); }

}  // namespace wcsb
