#pragma once

#include <cstddef>
#include <vector>

#include "wcsb/chaos.hpp"

namespace wcsb {

// d = 2 diagonal ansatz on levels i..n:
//   u_i = S g_i,  u_j = S (A+ u_{j-1} + g_j),  S = (-L0 - L0w G)^{-1}.
ChaosKernel solve_ansatz_d2(const ChaosKernel& g, int i, int n, const Vec& w);

// Relative residual of the defining equations (-L0 - L0w G) u_j = A+ u_{j-1} + g_j, j = i..n.
double ansatz_residual(const ChaosKernel& u, const ChaosKernel& g, int i, int n, const Vec& w);

struct TruncatedSolve {
  ChaosKernel u;
  double residual = 0;         // relative residual of the symmetrized system
  double direct_residual = 0;  // ||(-L0 - P A P) u - g|| / ||g||
  int iterations = 0;
  std::size_t dim = 0;
  bool converged = false;
  double contraction = 0;  // n^2 lambda^2
  bool contraction_warning = false;

  explicit TruncatedSolve(LatticePtr lat) : u(std::move(lat)) {}
};

// Solves -(L0 + P_i^n A P_i^n) u = g on the closure of supp(g) within levels i..n, by GMRES on
// the symmetrized system. Throws NumericFailure when GMRES does not reach tol.
TruncatedSolve solve_truncated(const ChaosKernel& g, int i, int n, const Vec& w, double tol = 1e-8);

// Same system assembled column by column from apply_interaction and solved by dense LU.
ChaosKernel dense_truncated_solve(const ChaosKernel& g, int i, int n, const Vec& w, std::size_t max_dim = 2000);

// ||(-L0 - P A P) u - g|| / ||g||.
double truncated_equation_residual(const ChaosKernel& u, const ChaosKernel& g, int i, int n, const Vec& w);

// ||(-L0)^{-1/2} (-L w - A+ f + A- w_i)|| with L = L0 + A+ + A- acting without truncation.
double fd_residual(const ChaosKernel& wker, const ChaosKernel& f, int i, const Vec& w);

struct ProfileRow {
  int n = 0;
  double level_norm = 0;     // ||(-L0)^{1/2} w_n||
  double weighted_norm = 0;  // ||N^k (-L0)^{1/2} w_n||
};
std::vector<ProfileRow> chaos_profile(const ChaosKernel& wker, int k);

// Contraction surrogate n^2 lambda^2 behind the existence of eps_d(n); above 1/2 the
// a priori bounds are not expected to hold.
double contraction_surrogate(const Lattice& lat, int n);

}  // namespace wcsb
