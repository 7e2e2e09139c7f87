#pragma once

#include <vector>

#include "wcsb/chaos.hpp"
#include "wcsb/lattice.hpp"

namespace wcsb {

// lambda_eps^2 log(1 + 1/(eps^2 x)), d = 2.
double L_eps(double x, double eps);
// (1/|w|^2)[(3|w|^2 x/(2 pi) + 1)^{2/3} - 1]; the |w| -> 0 limit x/pi is used for |w| = 0.
double G_of(double x, double w_norm);
double G_prime(double x, double w_norm);

// max over the grid of |G(x) - (1/pi) int_0^x dy / sqrt(1 + |w|^2 G(y))|.
double fixed_point_residual(const std::vector<double>& x_grid, double w_norm, double tol = 1e-10);

double dshe_d2(double w_norm);

// P^eps(k_{1:n}) for a d = 2 lattice.
double p_eps(const Lattice& lat, const std::vector<Mode>& k, const Vec& w);

struct GapRow {
  std::vector<Mode> k;
  double p_eps = 0;
  double g_of_l = 0;
  double gap = 0;
};

// Default test set: n in {1,2}, |k_1| <= 4, padding modes (1,0).
std::vector<std::vector<Mode>> default_gap_test_set();
std::vector<GapRow> approx_gap_table(const Lattice& lat, const std::vector<std::vector<Mode>>& set, const Vec& w);
double approx_gap(const Lattice& lat, const std::vector<std::vector<Mode>>& set, const Vec& w);

struct ReplacementGap {
  double gap = 0;
  double bound = 0;
};

// |<[-A- S A+ + L0w G] psi1, psi2>| with S = (-L0 - L0w G)^{-1}, and the surrogate
// lambda^2 ||N (-L0)^{1/2} psi1|| ||N (-L0)^{1/2} psi2||.  When explicit_minus is set the
// outer A- is applied as an operator (costly on large lattices); otherwise the pairing
// uses <A- u, psi2> = -<u, A+ psi2>.
ReplacementGap replacement_gap(const ChaosKernel& psi1, const ChaosKernel& psi2, const Vec& w,
                               bool explicit_minus = false);

// lambda^2 sum_{k != 0 in cutoff} 1/|k|^2, bounded uniformly in eps.
double crucial_bound_surrogate(const Lattice& lat);

}  // namespace wcsb
