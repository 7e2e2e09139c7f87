#include "wcsb/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wcsb/weak_coupling.hpp"

namespace wcsb {

void Tuple::push(const Mode& m) {
  if (n >= kMaxLevel) throw std::length_error("chaos level exceeds kMaxLevel");
  k[n++] = pack(m);
}

void Tuple::sort() { std::sort(k.begin(), k.begin() + n); }

bool Tuple::sorted() const { return std::is_sorted(k.begin(), k.begin() + n); }

Mode Tuple::total() const {
  Mode s{};
  for (int i = 0; i < n; ++i) s = s + unpack(k[i]);
  return s;
}

bool Tuple::operator==(const Tuple& o) const {
  if (n != o.n) return false;
  for (int i = 0; i < n; ++i) {
    if (k[i] != o.k[i]) return false;
  }
  return true;
}

bool Tuple::operator<(const Tuple& o) const {
  if (n != o.n) return n < o.n;
  return std::lexicographical_compare(k.begin(), k.begin() + n, o.k.begin(), o.k.begin() + o.n);
}

std::size_t TupleHash::operator()(const Tuple& t) const noexcept {
  std::uint64_t h = 0x84222325CBF29CE4ULL ^ static_cast<std::uint64_t>(t.n);
  for (int i = 0; i < t.n; ++i) {
    h ^= t.k[i] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h *= 0x100000001B3ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

Tuple make_tuple(const std::vector<Mode>& modes, bool sort) {
  Tuple t;
  for (const Mode& m : modes) t.push(m);
  if (sort) t.sort();
  return t;
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double orderings(const Tuple& t) {
  double r = factorial(t.n);
  int run = 1;
  for (int i = 1; i <= t.n; ++i) {
    if (i < t.n && t.k[i] == t.k[i - 1]) {
      ++run;
    } else {
      r /= factorial(run);
      run = 1;
    }
  }
  return r;
}

double tuple_norm2(const Tuple& t) {
  double s = 0;
  for (int i = 0; i < t.n; ++i) s += static_cast<double>(norm2(unpack(t.k[i])));
  return s;
}

cplx ChaosKernel::get(const std::vector<Mode>& modes) const { return get(make_tuple(modes)); }

cplx ChaosKernel::get(const Tuple& sorted) const {
  auto it = levels_.find(sorted.n);
  if (it == levels_.end()) return 0.0;
  auto jt = it->second.find(sorted);
  return jt == it->second.end() ? cplx(0.0) : jt->second;
}

void ChaosKernel::set(const std::vector<Mode>& modes, cplx v) { set(make_tuple(modes), v); }

void ChaosKernel::set(const Tuple& sorted, cplx v) {
  for (int i = 0; i < sorted.n; ++i) {
    if (is_zero(sorted.mode(i))) throw std::invalid_argument("chaos kernels live on nonzero modes");
  }
  levels_[sorted.n][sorted] = v;
}

void ChaosKernel::add(const Tuple& sorted, cplx v) { levels_[sorted.n][sorted] += v; }

const Level* ChaosKernel::level(int n) const {
  auto it = levels_.find(n);
  return it == levels_.end() ? nullptr : &it->second;
}

std::size_t ChaosKernel::size() const {
  std::size_t s = 0;
  for (const auto& [n, lv] : levels_) s += lv.size();
  return s;
}

std::vector<std::pair<Tuple, cplx>> ChaosKernel::sorted_entries(int n) const {
  std::vector<std::pair<Tuple, cplx>> out;
  if (const Level* lv = level(n)) {
    out.assign(lv->begin(), lv->end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return out;
}

ChaosKernel ChaosKernel::only_level(int n) const { return levels_between(n, n); }

ChaosKernel ChaosKernel::levels_between(int lo, int hi) const {
  ChaosKernel out(lat_);
  for (const auto& [n, lv] : levels_) {
    if (n >= lo && n <= hi) out.levels_[n] = lv;
  }
  return out;
}

void ChaosKernel::scale(cplx c) {
  for (auto& [n, lv] : levels_) {
    for (auto& [t, v] : lv) v *= c;
  }
}

void ChaosKernel::axpy(cplx a, const ChaosKernel& x) {
  for (const auto& [n, lv] : x.levels_) {
    Level& mine = levels_[n];
    for (const auto& [t, v] : lv) mine[t] += a * v;
  }
}

void ChaosKernel::drop_zeros() {
  for (auto it = levels_.begin(); it != levels_.end();) {
    for (auto jt = it->second.begin(); jt != it->second.end();) {
      jt = jt->second == 0.0 ? it->second.erase(jt) : std::next(jt);
    }
    it = it->second.empty() ? levels_.erase(it) : std::next(it);
  }
}

ChaosKernel basis_kernel(const LatticePtr& lat, const Mode& k) {
  ChaosKernel f(lat);
  f.set({k}, 1.0);
  return f;
}

ChaosKernel sym_tensor(const LatticePtr& lat, const Mode& a, const Mode& b) {
  ChaosKernel f(lat);
  f.set({a, b}, a == b ? 1.0 : 0.5);
  return f;
}

ChaosKernel random_kernel(const LatticePtr& lat, int level, int entries, int radius, Rng& rng) {
  std::vector<Mode> pool;
  for (const Mode& k : lat->modes()) {
    bool ok = true;
    for (int v : k) ok &= std::abs(v) <= radius;
    if (ok) pool.push_back(k);
  }
  if (pool.empty()) throw std::invalid_argument("no modes within the requested radius");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  ChaosKernel f(lat);
  for (int e = 0; e < entries; ++e) {
    Tuple t;
    for (int i = 0; i < level; ++i) t.push(pool[pick(rng)]);
    t.sort();
    f.set(t, complex_gaussian(rng));
  }
  return f;
}

cplx inner_product(const ChaosKernel& f, const ChaosKernel& g) {
  if (f.lattice_ptr() != g.lattice_ptr() && !(f.lattice().dim() == g.lattice().dim() &&
                                              f.lattice().eps_exact() == g.lattice().eps_exact()))
    throw std::invalid_argument("inner product of kernels on different lattices");
  cplx total = 0;
  for (const auto& [n, lf] : f.levels()) {
    const Level* lg = g.level(n);
    if (!lg) continue;
    const Level& small = lf.size() <= lg->size() ? lf : *lg;
    const Level& big = lf.size() <= lg->size() ? *lg : lf;
    const bool f_small = &small == &lf;
    // Accumulate in sorted order so that the floating-point sum is reproducible.
    std::vector<std::pair<Tuple, cplx>> terms;
    for (const auto& [t, v] : small) {
      auto it = big.find(t);
      if (it == big.end()) continue;
      const cplx fv = f_small ? v : it->second;
      const cplx gv = f_small ? it->second : v;
      terms.emplace_back(t, std::conj(fv) * gv * orderings(t));
    }
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    cplx s = 0;
    for (const auto& tv : terms) s += tv.second;
    total += factorial(n) * s;
  }
  return total;
}

double norm(const ChaosKernel& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

double multiplier_value(const Lattice& lat, const Multiplier& m, const Tuple& t) {
  switch (m.kind) {
    case Multiplier::Kind::kL0:
      return -0.5 * tuple_norm2(t);
    case Multiplier::Kind::kL0w: {
      double s = 0;
      for (int i = 0; i < t.n; ++i) {
        const double wk = dot(m.w, t.mode(i));
        s += wk * wk;
      }
      return -0.5 * s;
    }
    case Multiplier::Kind::kGeps:
      if (lat.dim() != 2) throw std::invalid_argument("Geps multiplier is defined for d = 2 only");
      return G_of(L_eps(0.5 * tuple_norm2(t), lat.eps()), std::sqrt(norm2(m.w)));
    case Multiplier::Kind::kNumber:
      return t.n;
    case Multiplier::Kind::kMomentum: {
      double s = 0;
      for (int i = 0; i < t.n; ++i) s += t.mode(i)[m.component];
      return s;
    }
    case Multiplier::Kind::kFracL0:
      return std::pow(0.5 * tuple_norm2(t), m.power);
    case Multiplier::Kind::kShiftedInverse: {
      if (lat.dim() != 2) throw std::invalid_argument("the diagonal ansatz inverse is defined for d = 2 only");
      double ww = 0;
      for (int i = 0; i < t.n; ++i) {
        const double wk = dot(m.w, t.mode(i));
        ww += wk * wk;
      }
      const double k2 = tuple_norm2(t);
      const double denom = k2 + ww * G_of(L_eps(0.5 * k2, lat.eps()), std::sqrt(norm2(m.w)));
      if (!(denom > 0)) throw std::domain_error("nonpositive ansatz denominator");
      return 2.0 / denom;
    }
  }
  return 0;
}

ChaosKernel apply_multiplier(const Multiplier& m, const ChaosKernel& f) {
  ChaosKernel out = f;
  for (const auto& [n, lv] : f.levels()) {
    Level& dst = out.level_mut(n);
    for (auto& [t, v] : dst) v *= multiplier_value(f.lattice(), m, t);
  }
  return out;
}

Tuple replace_slots(const Tuple& t, std::initializer_list<int> skip, std::initializer_list<Packed> extra) {
  Tuple r;
  for (Packed p : extra) r.k[r.n++] = p;
  for (int i = 0; i < t.n; ++i) {
    bool drop = false;
    for (int s : skip) drop |= s == i;
    if (!drop) r.k[r.n++] = t.k[i];
  }
  r.sort();
  return r;
}

namespace {

ChaosKernel apply_plus(const ChaosKernel& f, const Vec& w) {
  const Lattice& lat = f.lattice();
  ChaosKernel out(f.lattice_ptr());
  const double c = lat.lambda() / std::pow(2.0 * M_PI, 0.5 * lat.dim());
  const auto& modes = lat.modes();
  for (const auto& [n, lv] : f.levels()) {
    if (n + 1 > kMaxLevel) throw std::length_error("A+ would exceed kMaxLevel");
    Level& dst = out.level_mut(n + 1);
    for (const auto& [s, v] : lv) {
      for (int j = 0; j < n; ++j) {
        if (j > 0 && s.k[j] == s.k[j - 1]) continue;
        const Mode q = s.mode(j);
        if (!lat.in_cutoff(q)) continue;
        for (const Mode& l : modes) {
          const Mode m = q - l;
          if (!lat.in_cutoff(m)) continue;
          dst.emplace(replace_slots(s, {j}, {pack(l), pack(m)}), 0.0);
        }
      }
    }
    const cplx pref(0.0, -2.0 * c / (n + 1));
    for (auto& [t, val] : dst) {
      cplx acc = 0;
      for (int a = 0; a < t.n; ++a) {
        const Mode ka = t.mode(a);
        for (int b = a + 1; b < t.n; ++b) {
          const Mode kb = t.mode(b);
          if (!lat.indicator(ka, kb)) continue;
          const Mode q = ka + kb;
          const double wq = dot(w, q);
          if (wq == 0.0) continue;
          auto it = lv.find(replace_slots(t, {a, b}, {pack(q)}));
          if (it != lv.end()) acc += wq * it->second;
        }
      }
      val = pref * acc;
    }
  }
  out.drop_zeros();
  return out;
}

ChaosKernel apply_minus(const ChaosKernel& f, const Vec& w) {
  const Lattice& lat = f.lattice();
  ChaosKernel out(f.lattice_ptr());
  const double c = lat.lambda() / std::pow(2.0 * M_PI, 0.5 * lat.dim());
  const auto& modes = lat.modes();
  for (const auto& [n, lv] : f.levels()) {
    if (n < 2) continue;
    Level& dst = out.level_mut(n - 1);
    for (const auto& [s, v] : lv) {
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          const Mode ka = s.mode(a), kb = s.mode(b);
          if (!lat.indicator(ka, kb)) continue;
          dst.emplace(replace_slots(s, {a, b}, {pack(ka + kb)}), 0.0);
        }
      }
    }
    const cplx pref(0.0, -c * n);
    for (auto& [t, val] : dst) {
      cplx acc = 0;
      for (int j = 0; j < t.n; ++j) {
        if (j > 0 && t.k[j] == t.k[j - 1]) continue;
        int mult = 1;
        while (j + mult < t.n && t.k[j + mult] == t.k[j]) ++mult;
        const Mode q = t.mode(j);
        const double wq = dot(w, q);
        if (wq == 0.0 || !lat.in_cutoff(q)) continue;
        cplx inner = 0;
        for (const Mode& l : modes) {
          const Mode m = q - l;
          if (!lat.in_cutoff(m)) continue;
          auto it = lv.find(replace_slots(t, {j}, {pack(l), pack(m)}));
          if (it != lv.end()) inner += it->second;
        }
        acc += static_cast<double>(mult) * wq * inner;
      }
      val = pref * acc;
    }
  }
  out.drop_zeros();
  return out;
}

}  // namespace

ChaosKernel apply_interaction(Sign sign, const ChaosKernel& f, const Vec& w) {
  return sign == Sign::kPlus ? apply_plus(f, w) : apply_minus(f, w);
}

double weighted_norm(const ChaosKernel& f, int j, double s) {
  ChaosKernel g = apply_multiplier(Multiplier::FracL0(s), f);
  for (int i = 0; i < j; ++i) g = apply_multiplier(Multiplier::Number(), g);
  return norm(g);
}

}  // namespace wcsb
