#pragma once

#include <Eigen/Core>
#include <unordered_map>
#include <vector>

#include "wcsb/chaos.hpp"

namespace wcsb {

using CVector = Eigen::VectorXcd;

// The sorted tuples at chaos levels lo..hi reachable from a seed support by the
// interaction (splits and merges), with the symmetrized generator on them.
//
// In the variable y = W^{1/2} D^{1/2} u, where W_t = n! * orderings(t) is the weight of
// a sorted tuple and D_t = |t|^2 / 2, the equation (D - P A P) u = g reads
// (I - T) y = W^{1/2} D^{-1/2} g with T skew-Hermitian in the Euclidean product.
class TruncatedSpace {
 public:
  TruncatedSpace(LatticePtr lat, const Vec& w, int lo, int hi, const std::vector<Tuple>& seeds);

  const Lattice& lattice() const { return *lat_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  std::size_t dim() const { return tuples_.size(); }
  std::size_t level_size(int n) const;
  std::size_t level_begin(int n) const;
  const Tuple& tuple(std::size_t i) const { return tuples_[i]; }
  long index(const Tuple& t) const;
  double weight(std::size_t i) const { return weight_[i]; }
  double diag(std::size_t i) const { return diag_[i]; }

  // out = T y, with T restricted to levels [from, to] (both within lo..hi).
  void apply_T(const CVector& y, CVector& out, int from, int to) const;
  void apply_T(const CVector& y, CVector& out) const { apply_T(y, out, lo_, hi_); }

  // g -> W^{1/2} D^{-1/2} g (entries outside the space are rejected).
  CVector symmetrize_rhs(const ChaosKernel& g) const;
  // y -> u = D^{-1/2} W^{-1/2} y.
  ChaosKernel unsymmetrize(const CVector& y) const;
  // Plain coordinates: kernel values in space order and back.
  CVector coordinates(const ChaosKernel& f) const;
  ChaosKernel kernel(const CVector& x) const;

  std::size_t nonzeros() const { return up_val_.size(); }

 private:
  LatticePtr lat_;
  Vec w_;
  int lo_, hi_;
  std::vector<Tuple> tuples_;
  std::unordered_map<Tuple, long, TupleHash> index_;
  std::vector<std::size_t> level_start_;  // indexed by n - lo, size hi - lo + 2
  std::vector<double> weight_, diag_;
  // Up part of T in CSR form: rows are tuples at levels lo+1..hi, columns one level below.
  std::vector<std::size_t> up_ptr_;
  std::vector<long> up_col_;
  std::vector<cplx> up_val_;
};

}  // namespace wcsb
