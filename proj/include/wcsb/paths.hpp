#pragma once

#include <array>
#include <climits>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "wcsb/chaos.hpp"
#include "wcsb/rational.hpp"

namespace wcsb {

constexpr int kNoCeiling = INT_MAX / 2;

// Simple walk with +-1 steps; heights[0] = 1.
struct WalkPath {
  std::vector<int> heights;

  int length() const { return static_cast<int>(heights.size()) - 1; }
  bool up(int s) const { return heights[s] > heights[s - 1]; }  // step s = 1..length
  int end() const { return heights.back(); }
  std::string str() const;
  bool operator==(const WalkPath& o) const { return heights == o.heights; }
};

WalkPath make_path(std::vector<int> heights);

// Walks of a steps from 1 to m, heights in [1, n], visiting 1 only at the start
// (and at the end when m = 1). Lexicographic order of the height sequences.
std::vector<WalkPath> enumerate_paths(int n, int a, int m);

// Number of strict excursions of length a under ceiling n by dynamic programming over heights.
std::size_t count_excursions(int n, int a);
std::size_t catalan(int b);

// Per step s: up-steps carry the slot pair (i, i'), down-steps carry (q, 0). Slots are 1-based
// and range over the column after the step, of size p_s + kappa - 1.
struct GraphAssignment {
  int kappa = 1;
  std::vector<std::array<int, 2>> steps;
  std::string str() const;
};

std::vector<GraphAssignment> enumerate_graphs(const WalkPath& p, int kappa);
// prod over up-steps of C(p_s + kappa - 1, 2) times prod over down-steps of (p_s + kappa - 1).
std::size_t graph_count(const WalkPath& p, int kappa);
// kappa = 2 graphs in which the path started by the second input mode never branches or merges.
bool spectator_untouched(const WalkPath& p, const GraphAssignment& g);
std::vector<GraphAssignment> enumerate_graphs_tilde2(const WalkPath& p);

// Kernel on ordered tuples at a single level.
struct OrderedKernel {
  int level = 0;
  std::unordered_map<Tuple, cplx, TupleHash> values;

  cplx at(const std::vector<Mode>& modes) const;
  double norm() const;  // plain l2 norm over ordered tuples
};

struct ChainOptions {
  double delta = 0;  // delta > 0 selects the delta-weighted operators
  double prune = 0;  // drop entries below prune * max|value| after each stored step; 0 keeps all
  // Extra (-L0)^{-1/2} on the output.
  bool extra_inverse_half = false;
};

// T_p[g] applied to e_j (kappa = 1) or to e_{j1} (x) e_{j2} (kappa = 2, not symmetrized).
OrderedKernel apply_T_chain(const LatticePtr& lat, const WalkPath& p, const GraphAssignment& g,
                            const std::vector<Mode>& j_modes, const Vec& w, const ChainOptions& opt = {});

struct Extrapolation {
  std::vector<double> eps;
  std::vector<double> raw;
  double value = 0;
  double error = 0;
  double rate = 0;
  bool ok = false;  // false when no power-law rate fits the last three values
};

// Richardson extrapolation of raw(eps) = X + A eps^r with r fitted from three consecutive
// scales; error is the spread of the last two extrapolants (|X - raw_last| with three scales).
Extrapolation richardson(const std::vector<double>& eps, const std::vector<double>& raw);

// <e_j, T_p[g] e_j> / ((w.j)^2 / |j|^2), extrapolated along eps_sequence (d taken from the
// caller). Chain values are cached per (path, graph, eps, w, j).
Extrapolation c_g_of_path(int d, const WalkPath& p, const GraphAssignment& g, const std::vector<Rational>& eps_sequence,
                          const Vec& w, const Mode& j);
// Sum over all kappa = 1 graphs, extrapolated; c(p) = 1 for the empty path.
Extrapolation c_of_path(int d, const WalkPath& p, const std::vector<Rational>& eps_sequence, const Vec& w, const Mode& j);
void clear_chain_cache();
std::size_t chain_cache_size();

struct DnAtEps {
  double eps = 0;
  std::size_t dim = 0;
  double resolvent = 0;             // <x, (I + M*M)^{-1} x> / norm
  std::vector<double> series_terms; // per a >= 1: -sum_p c(p) at this eps
  double series_sum = 0;
  bool series_converged = false;
  int cg_iterations = 0;
};

struct DnEstimate {
  int n = 0;
  std::vector<DnAtEps> rows;
  Extrapolation extrapolated;  // of the resolvent values
};

// D^n = -sum_{a >= 1} sum_{p in Pi^{(n)}_{2a,1}} c(p), evaluated per eps on the symmetric
// truncated space and extrapolated. The series over a is summed while |term| > series_tol;
// the resolvent is its Abel sum and is what gets extrapolated.
DnEstimate D_n_estimate(int d, int n, const std::vector<Rational>& eps_sequence, const Vec& w, const Mode& j,
                        double series_tol = 1e-10, int max_terms = 200);

// lambda^2 sum_{l+m=k} J(l,m) / (|l|^2 + |m|^2).
double variational_bound(const Lattice& lat, const Mode& k);
// int_{|x|_inf <= 1} dx / (2|x|^2) by nested adaptive quadrature.
double variational_integral(int d, double tol = 1e-10);

struct VanishingRow {
  double eps = 0;
  double norm = 0;
};
std::vector<VanishingRow> vanishing_checks(int d, const WalkPath& p, const GraphAssignment& g,
                                           const std::vector<Mode>& j_modes, const std::vector<Rational>& eps_sequence,
                                           const Vec& w, bool extra_inverse_half);

struct TBoundRow {
  double eps = 0;
  double plus_ratio = 0;   // ||T+[(1,2)] e_j|| / ||e_j||
  double minus_ratio = 0;  // ||T-[1] f|| / ||f||, f = T+[(1,2)] e_j
};
std::vector<TBoundRow> t_bound_table(int d, const std::vector<Rational>& eps_sequence, const Vec& w, const Mode& j,
                                     double delta = 0);

}  // namespace wcsb
