#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wcsb/lattice.hpp"
#include "wcsb/rng.hpp"

namespace wcsb {

using cplx = std::complex<double>;

constexpr int kMaxLevel = 6;

// Mode packed into 64 bits (16 bits per coordinate, offset binary), so that integer
// order on packed values is lexicographic order on modes.
using Packed = std::uint64_t;

inline Packed pack(const Mode& k) {
  Packed p = 0;
  for (int i = 0; i < kMaxDim; ++i) p = (p << 16) | static_cast<std::uint16_t>(k[i] + 32768);
  return p;
}
inline Mode unpack(Packed p) {
  Mode k{};
  for (int i = kMaxDim - 1; i >= 0; --i) {
    k[i] = static_cast<int>(p & 0xFFFF) - 32768;
    p >>= 16;
  }
  return k;
}

struct Tuple {
  int n = 0;
  std::array<Packed, kMaxLevel> k{};

  Mode mode(int i) const { return unpack(k[i]); }
  void push(const Mode& m);
  void sort();
  bool sorted() const;
  Mode total() const;
  bool operator==(const Tuple& o) const;
  bool operator<(const Tuple& o) const;
};

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept;
};

Tuple make_tuple(const std::vector<Mode>& modes, bool sort = true);

// Sorted tuple made of `extra` followed by t without the slots in `skip`.
Tuple replace_slots(const Tuple& t, std::initializer_list<int> skip, std::initializer_list<Packed> extra);

// Number of distinct orderings of a sorted tuple: n! / prod(multiplicity!).
double orderings(const Tuple& t);
double factorial(int n);

// Sum of squared norms |k_1|^2 + ... + |k_n|^2.
double tuple_norm2(const Tuple& t);

using Level = std::unordered_map<Tuple, cplx, TupleHash>;

// Finite-support symmetric kernel per chaos level, stored on sorted tuples.
class ChaosKernel {
 public:
  explicit ChaosKernel(LatticePtr lat) : lat_(std::move(lat)) {}

  const Lattice& lattice() const { return *lat_; }
  const LatticePtr& lattice_ptr() const { return lat_; }

  // Value at any ordering of the given modes.
  cplx get(const std::vector<Mode>& modes) const;
  cplx get(const Tuple& sorted) const;
  void set(const std::vector<Mode>& modes, cplx v);
  void add(const Tuple& sorted, cplx v);
  void set(const Tuple& sorted, cplx v);

  const std::map<int, Level>& levels() const { return levels_; }
  const Level* level(int n) const;
  Level& level_mut(int n) { return levels_[n]; }
  std::size_t size() const;
  int max_level() const { return levels_.empty() ? 0 : levels_.rbegin()->first; }

  // Entries of level n in sorted tuple order.
  std::vector<std::pair<Tuple, cplx>> sorted_entries(int n) const;

  ChaosKernel only_level(int n) const;
  ChaosKernel levels_between(int lo, int hi) const;
  void scale(cplx c);
  void axpy(cplx a, const ChaosKernel& x);  // this += a x
  void drop_zeros();

 private:
  LatticePtr lat_;
  std::map<int, Level> levels_;
};

ChaosKernel basis_kernel(const LatticePtr& lat, const Mode& k);
// [e_a (x) e_b]_sym.
ChaosKernel sym_tensor(const LatticePtr& lat, const Mode& a, const Mode& b);

// Kernel at one level with `entries` random sorted tuples (modes with all coordinates in
// [-radius, radius], inside the cutoff) and standard complex Gaussian amplitudes.
ChaosKernel random_kernel(const LatticePtr& lat, int level, int entries, int radius, Rng& rng);

// sum_n n! sum_{ordered tuples} conj(f_n) g_n.
cplx inner_product(const ChaosKernel& f, const ChaosKernel& g);
double norm(const ChaosKernel& f);

struct Multiplier {
  enum class Kind { kL0, kL0w, kGeps, kNumber, kMomentum, kFracL0, kShiftedInverse };
  Kind kind = Kind::kL0;
  Vec w{};
  int component = 0;  // Momentum
  double power = 0;   // FracL0: (-L0)^power

  static Multiplier L0() { return {Kind::kL0}; }
  static Multiplier L0w(const Vec& w) { return {Kind::kL0w, w}; }
  static Multiplier Geps(const Vec& w) { return {Kind::kGeps, w}; }
  static Multiplier Number() { return {Kind::kNumber}; }
  static Multiplier Momentum(int i) { return {Kind::kMomentum, {}, i}; }
  static Multiplier FracL0(double s) { return {Kind::kFracL0, {}, 0, s}; }
  // (-L0 - L0w Geps)^{-1}, the diagonal inverse used by the d = 2 ansatz.
  static Multiplier ShiftedInverse(const Vec& w) { return {Kind::kShiftedInverse, w}; }
};

// Value of the multiplier on a tuple at level n.
double multiplier_value(const Lattice& lat, const Multiplier& m, const Tuple& t);
ChaosKernel apply_multiplier(const Multiplier& m, const ChaosKernel& f);

enum class Sign { kPlus, kMinus };

// The interaction parts of the generator:
//   A+ f(k_{1:n+1}) = -(2i lambda / (2pi)^{d/2} (n+1)) sum_{a<b} w.(k_a+k_b) J(k_a,k_b) f(k_a+k_b, rest)
//   A- f(k_{1:n-1}) = -(i lambda n / (2pi)^{d/2}) sum_j (w.k_j) sum_{l+m=k_j} J(l,m) f(l, m, rest)
// for f at level n. These satisfy A- = -(A+)^* for the inner product above.
ChaosKernel apply_interaction(Sign sign, const ChaosKernel& f, const Vec& w);

// ||N^j (-L0)^s f||.
double weighted_norm(const ChaosKernel& f, int j, double s);

}  // namespace wcsb
