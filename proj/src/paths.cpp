#include "wcsb/paths.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "wcsb/linear_operator.hpp"
#include "wcsb/truncated_space.hpp"

namespace wcsb {

std::string WalkPath::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(heights[i]);
  }
  return s + ")";
}

WalkPath make_path(std::vector<int> heights) {
  if (heights.empty() || heights[0] != 1) throw std::invalid_argument("walks start at height 1");
  for (std::size_t i = 1; i < heights.size(); ++i) {
    if (std::abs(heights[i] - heights[i - 1]) != 1) throw std::invalid_argument("walk increments must be +-1");
    if (heights[i] < 1) throw std::invalid_argument("walk heights must stay positive");
  }
  return WalkPath{std::move(heights)};
}

std::vector<WalkPath> enumerate_paths(int n, int a, int m) {
  if (a < 0 || m < 1) throw std::invalid_argument("enumerate_paths needs a >= 0 and m >= 1");
  std::vector<WalkPath> out;
  if (a == 0) {
    if (m == 1 && n >= 1) out.push_back(WalkPath{{1}});
    return out;
  }
  std::vector<int> h{1};
  std::function<void()> rec = [&]() {
    const int s = static_cast<int>(h.size()) - 1;
    const int cur = h.back();
    if (s == a) {
      if (cur == m) out.push_back(WalkPath{h});
      return;
    }
    // Remaining steps must be able to reach m.
    for (int next : {cur - 1, cur + 1}) {
      if (next < 1 || next > n) continue;
      const bool last = s + 1 == a;
      if (next == 1 && !(last && m == 1)) continue;
      if (std::abs(next - m) > a - s - 1) continue;
      h.push_back(next);
      rec();
      h.pop_back();
    }
  };
  rec();
  return out;
}

std::size_t count_excursions(int n, int a) {
  if (a == 0) return n >= 1 ? 1 : 0;
  if (a % 2 != 0 || n < 2) return 0;
  const int top = std::min(n, a / 2 + 1);
  // ways[h]: walks from height 2 (after the first step) staying in [2, top].
  std::vector<std::size_t> ways(top + 2, 0), next(top + 2, 0);
  ways[2] = 1;
  for (int s = 1; s < a - 1; ++s) {
    std::fill(next.begin(), next.end(), 0);
    for (int h = 2; h <= top; ++h) {
      if (!ways[h]) continue;
      if (h + 1 <= top) next[h + 1] += ways[h];
      if (h - 1 >= 2) next[h - 1] += ways[h];
    }
    ways.swap(next);
  }
  return ways[2];
}

std::size_t catalan(int b) {
  std::size_t c = 1;
  for (int i = 0; i < b; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

std::string GraphAssignment::str() const {
  std::string s;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) s += ";";
    s += steps[i][1] ? std::to_string(steps[i][0]) + "-" + std::to_string(steps[i][1]) : std::to_string(steps[i][0]);
  }
  return s;
}

std::vector<GraphAssignment> enumerate_graphs(const WalkPath& p, int kappa) {
  if (kappa != 1 && kappa != 2) throw std::invalid_argument("kappa must be 1 or 2");
  std::vector<GraphAssignment> out;
  GraphAssignment g;
  g.kappa = kappa;
  std::function<void(int)> rec = [&](int s) {
    if (s > p.length()) {
      out.push_back(g);
      return;
    }
    const int size = p.heights[s] + kappa - 1;
    if (p.up(s)) {
      for (int i = 1; i <= size; ++i) {
        for (int i2 = i + 1; i2 <= size; ++i2) {
          g.steps.push_back({i, i2});
          rec(s + 1);
          g.steps.pop_back();
        }
      }
    } else {
      for (int q = 1; q <= size; ++q) {
        g.steps.push_back({q, 0});
        rec(s + 1);
        g.steps.pop_back();
      }
    }
  };
  rec(1);
  return out;
}

std::size_t graph_count(const WalkPath& p, int kappa) {
  std::size_t c = 1;
  for (int s = 1; s <= p.length(); ++s) {
    const std::size_t size = p.heights[s] + kappa - 1;
    c *= p.up(s) ? size * (size - 1) / 2 : size;
  }
  return c;
}

namespace {

// Position (1-based) of the rank-th slot of 1..size that is not in `taken`.
int free_slot(int rank, int size, std::initializer_list<int> taken) {
  for (int slot = 1; slot <= size; ++slot) {
    bool used = false;
    for (int t : taken) used |= t == slot;
    if (!used && --rank == 0) return slot;
  }
  throw std::logic_error("no free slot left");
}

}  // namespace

bool spectator_untouched(const WalkPath& p, const GraphAssignment& g) {
  if (g.kappa != 2) throw std::invalid_argument("the spectator filter applies to kappa = 2");
  int pos = 2;
  for (int s = 1; s <= p.length(); ++s) {
    const int size = p.heights[s] + 1;
    const auto& st = g.steps[s - 1];
    if (p.up(s)) {
      if (pos == 1) return false;
      pos = free_slot(pos - 1, size, {st[0], st[1]});
    } else {
      if (pos <= 2) return false;
      pos = free_slot(pos - 2, size, {st[0]});
    }
  }
  return true;
}

std::vector<GraphAssignment> enumerate_graphs_tilde2(const WalkPath& p) {
  std::vector<GraphAssignment> out;
  for (auto& g : enumerate_graphs(p, 2)) {
    if (spectator_untouched(p, g)) out.push_back(std::move(g));
  }
  return out;
}

cplx OrderedKernel::at(const std::vector<Mode>& modes) const {
  auto it = values.find(make_tuple(modes, false));
  return it == values.end() ? cplx(0.0) : it->second;
}

double OrderedKernel::norm() const {
  std::vector<std::pair<Tuple, double>> v;
  v.reserve(values.size());
  for (const auto& [t, x] : values) v.emplace_back(t, std::norm(x));
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double s = 0;
  for (const auto& e : v) s += e.second;
  return std::sqrt(s);
}

namespace {

struct Coefficients {
  const Lattice& lat;
  Vec w;
  double delta;
  double c;

  Coefficients(const Lattice& l, const Vec& w_, double d_)
      : lat(l), w(w_), delta(d_), c(l.lambda() / std::pow(2.0 * M_PI, 0.5 * l.dim())) {}

  cplx weighted(double wk) const {
    const double e = lat.eps();
    return std::pow(e, 0.5 * lat.dim()) * std::pow(std::abs(2.0 / e * wk / std::pow(2.0 * M_PI, 0.5 * lat.dim())), 1 + delta);
  }
  cplx up(const Mode& q) const {
    const double wq = dot(w, q);
    return delta > 0 ? weighted(wq) : cplx(0.0, -2.0 * c * wq);
  }
  cplx down(const Mode& k) const {
    const double wk = dot(w, k);
    return delta > 0 ? weighted(wk) : cplx(0.0, -c * wk);
  }
  // (-L0)^{power} on an ordered tuple.
  double diag(const Tuple& t, double power) const { return std::pow(0.5 * tuple_norm2(t), power); }
};

using Map = std::unordered_map<Tuple, cplx, TupleHash>;

// Output tuple of an up step: slots i, i2 get l, m; the remaining slots take s_2.. in order.
inline Tuple up_tuple(const Tuple& s, int i, int i2, Packed l, Packed m) {
  Tuple t;
  t.n = s.n + 1;
  int src = 1;
  for (int slot = 1; slot <= t.n; ++slot) {
    if (slot == i) {
      t.k[slot - 1] = l;
    } else if (slot == i2) {
      t.k[slot - 1] = m;
    } else {
      t.k[slot - 1] = s.k[src++];
    }
  }
  return t;
}

// Output tuple of a down step: slot q gets s_1 + s_2; the remaining slots take s_3.. in order.
inline Tuple down_tuple(const Tuple& s, int q, Packed merged) {
  Tuple t;
  t.n = s.n - 1;
  int src = 2;
  for (int slot = 1; slot <= t.n; ++slot) t.k[slot - 1] = slot == q ? merged : s.k[src++];
  return t;
}

Map step_up(const Map& f, int i, int i2, const Coefficients& co) {
  const Lattice& lat = co.lat;
  Map out;
  for (const auto& [s, v] : f) {
    const Mode q = s.mode(0);
    const cplx a = co.up(q) * v;
    if (a == 0.0) continue;
    for (const Mode& l : lat.modes()) {
      const Mode m = q - l;
      if (!lat.in_cutoff(m)) continue;
      out[up_tuple(s, i, i2, pack(l), pack(m))] += a;
    }
  }
  return out;
}

Map step_down(const Map& f, int q, const Coefficients& co) {
  const Lattice& lat = co.lat;
  Map out;
  for (const auto& [s, v] : f) {
    const Mode l = s.mode(0), m = s.mode(1);
    if (!lat.indicator(l, m)) continue;
    const Mode k = l + m;
    const cplx a = co.down(k) * v;
    if (a == 0.0) continue;
    out[down_tuple(s, q, pack(k))] += a;
  }
  return out;
}

// Up step, multiplier (-L0)^{-(1+delta)} and down step without storing the peak level.
Map step_up_down(const Map& f, int i, int i2, int q, const Coefficients& co) {
  const Lattice& lat = co.lat;
  Map out;
  const double power = -(1.0 + co.delta);
  for (const auto& [s, v] : f) {
    const Mode k0 = s.mode(0);
    const cplx a = co.up(k0) * v;
    if (a == 0.0) continue;
    double rest2 = 0;
    for (int r = 1; r < s.n; ++r) rest2 += static_cast<double>(norm2(s.mode(r)));
    for (const Mode& l : lat.modes()) {
      const Mode m = k0 - l;
      if (!lat.in_cutoff(m)) continue;
      const Tuple u = up_tuple(s, i, i2, pack(l), pack(m));
      const Mode u1 = u.mode(0), u2 = u.mode(1);
      if (!lat.indicator(u1, u2)) continue;
      const Mode k = u1 + u2;
      const cplx dk = co.down(k);
      if (dk == 0.0) continue;
      const double d = std::pow(0.5 * (rest2 + static_cast<double>(norm2(l) + norm2(m))), power);
      out[down_tuple(u, q, pack(k))] += dk * d * a;
    }
  }
  return out;
}

void multiply(Map& f, const Coefficients& co, double power) {
  for (auto& [t, v] : f) v *= co.diag(t, power);
}

void prune(Map& f, double rel) {
  if (rel <= 0) return;
  double mx = 0;
  for (const auto& [t, v] : f) mx = std::max(mx, std::abs(v));
  const double cut = rel * mx;
  for (auto it = f.begin(); it != f.end();) it = std::abs(it->second) < cut ? f.erase(it) : std::next(it);
}

}  // namespace

OrderedKernel apply_T_chain(const LatticePtr& lat, const WalkPath& p, const GraphAssignment& g,
                            const std::vector<Mode>& j_modes, const Vec& w, const ChainOptions& opt) {
  const int kappa = static_cast<int>(j_modes.size());
  if (kappa != 1 && kappa != 2) throw std::invalid_argument("chains act on one or two basis modes");
  if (g.kappa != kappa) throw std::invalid_argument("graph kappa does not match the number of input modes");
  if (static_cast<int>(g.steps.size()) != p.length()) throw std::invalid_argument("graph and path lengths differ");
  if (lat->dim() < 3) throw std::invalid_argument("chains are a d >= 3 construction");
  if (opt.delta < 0) throw std::invalid_argument("delta must be nonnegative");
  for (const Mode& j : j_modes) {
    if (!lat->in_cutoff(j)) throw std::invalid_argument("input mode outside the cutoff");
  }
  for (int s = 1; s <= p.length(); ++s) {
    const int size = p.heights[s] + kappa - 1;
    const auto& st = g.steps[s - 1];
    const bool ok = p.up(s) ? (1 <= st[0] && st[0] < st[1] && st[1] <= size) : (1 <= st[0] && st[0] <= size);
    if (!ok) throw std::out_of_range("slot index out of range at step " + std::to_string(s));
  }
  const Coefficients co(*lat, w, opt.delta);
  const double half = -(1.0 + opt.delta) / 2;
  Map f;
  f[make_tuple(j_modes, false)] = 1.0;
  if (p.length() > 0) multiply(f, co, half);
  int s = 1;
  while (s <= p.length()) {
    const auto& st = g.steps[s - 1];
    if (p.up(s) && s < p.length() && !p.up(s + 1)) {
      f = step_up_down(f, st[0], st[1], g.steps[s][0], co);
      s += 2;
    } else if (p.up(s)) {
      f = step_up(f, st[0], st[1], co);
      s += 1;
    } else {
      f = step_down(f, st[0], co);
      s += 1;
    }
    multiply(f, co, s > p.length() ? half : 2 * half);
    prune(f, opt.prune);
  }
  if (opt.extra_inverse_half) multiply(f, co, -0.5);
  OrderedKernel out;
  out.level = p.end() + kappa - 1;
  out.values = std::move(f);
  return out;
}

namespace {

// Root of h(r) = (e1^r - e2^r) / (e2^r - e3^r) = target by bisection.
bool fit_rate(double e1, double e2, double e3, double target, double* r) {
  auto h = [&](double x) { return (std::pow(e1, x) - std::pow(e2, x)) / (std::pow(e2, x) - std::pow(e3, x)); };
  double lo = 1e-3, hi = 8.0;
  double flo = h(lo) - target, fhi = h(hi) - target;
  if (!(flo * fhi < 0)) return false;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = h(mid) - target;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  *r = 0.5 * (lo + hi);
  return true;
}

bool extrapolate3(const double* e, const double* v, double* x, double* r) {
  const double d1 = v[0] - v[1], d2 = v[1] - v[2];
  const double scale = std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2]), 1e-300});
  if (std::abs(d1) <= 1e-14 * scale && std::abs(d2) <= 1e-14 * scale) {
    *x = v[2];
    *r = 0;
    return true;
  }
  if (d2 == 0.0 || !fit_rate(e[0], e[1], e[2], d1 / d2, r)) return false;
  const double a = d2 / (std::pow(e[1], *r) - std::pow(e[2], *r));
  *x = v[2] - a * std::pow(e[2], *r);
  return true;
}

}  // namespace

Extrapolation richardson(const std::vector<double>& eps, const std::vector<double>& raw) {
  if (eps.size() != raw.size() || eps.empty()) throw std::invalid_argument("richardson needs matching nonempty inputs");
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (!(eps[i] < eps[i - 1])) throw std::invalid_argument("eps sequence must be decreasing");
  }
  Extrapolation e;
  e.eps = eps;
  e.raw = raw;
  const std::size_t n = raw.size();
  e.value = raw.back();
  if (n == 1) return e;
  e.error = std::abs(raw[n - 1] - raw[n - 2]);
  if (n == 2) return e;
  double x2 = 0, r2 = 0;
  const bool ok2 = extrapolate3(&eps[n - 3], &raw[n - 3], &x2, &r2);
  if (n >= 4) {
    double x1 = 0, r1 = 0;
    const bool ok1 = extrapolate3(&eps[n - 4], &raw[n - 4], &x1, &r1);
    if (ok1 && ok2) {
      e.value = x2;
      e.rate = r2;
      e.error = std::abs(x2 - x1);
      e.ok = true;
      return e;
    }
  }
  if (ok2) {
    e.value = x2;
    e.rate = r2;
    e.error = std::abs(x2 - raw.back());
    e.ok = true;
  }
  return e;
}

namespace {

std::mutex cache_mutex;
std::map<std::string, double>& chain_cache() {
  static std::map<std::string, double> c;
  return c;
}
std::map<std::string, LatticePtr>& lattice_cache() {
  static std::map<std::string, LatticePtr> c;
  return c;
}

LatticePtr cached_lattice(int d, const Rational& eps) {
  const std::string key = std::to_string(d) + "|" + eps.str();
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& c = lattice_cache();
  auto it = c.find(key);
  if (it != c.end()) return it->second;
  LatticePtr lat = make_lattice(d, eps);
  c.emplace(key, lat);
  return lat;
}

std::string mode_key(const Mode& k) {
  std::ostringstream os;
  os << k[0] << ":" << k[1] << ":" << k[2] << ":" << k[3];
  return os.str();
}

double normalization(const Vec& w, const Mode& j) {
  const double wj = dot(w, j);
  const double nn = wj * wj / static_cast<double>(norm2(j));
  if (!(nn > 0)) throw std::invalid_argument("normalization (w.j)^2/|j|^2 vanishes");
  return nn;
}

double chain_value(int d, const WalkPath& p, const GraphAssignment& g, const Rational& eps, const Vec& w, const Mode& j) {
  std::ostringstream key;
  key.precision(17);
  key << d << "|" << p.str() << "|" << g.str() << "|" << eps.str() << "|" << w[0] << "," << w[1] << "," << w[2] << ","
      << w[3] << "|" << mode_key(j);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = chain_cache().find(key.str());
    if (it != chain_cache().end()) return it->second;
  }
  const LatticePtr lat = cached_lattice(d, eps);
  const OrderedKernel k = apply_T_chain(lat, p, g, {j}, w);
  const double v = k.at({j}).real() / normalization(w, j);
  std::lock_guard<std::mutex> lock(cache_mutex);
  chain_cache().emplace(key.str(), v);
  return v;
}

std::vector<double> eps_values(const std::vector<Rational>& seq) {
  std::vector<double> e;
  for (const Rational& r : seq) e.push_back(r.value());
  return e;
}

}  // namespace

void clear_chain_cache() {
  std::lock_guard<std::mutex> lock(cache_mutex);
  chain_cache().clear();
  lattice_cache().clear();
}

std::size_t chain_cache_size() {
  std::lock_guard<std::mutex> lock(cache_mutex);
  return chain_cache().size();
}

Extrapolation c_g_of_path(int d, const WalkPath& p, const GraphAssignment& g, const std::vector<Rational>& eps_sequence,
                          const Vec& w, const Mode& j) {
  if (p.length() % 2 != 0) throw std::invalid_argument("c_g(p) needs a walk of even length");
  if (p.end() != 1) throw std::invalid_argument("c_g(p) needs a walk returning to height 1");
  std::vector<double> raw;
  for (const Rational& e : eps_sequence) raw.push_back(chain_value(d, p, g, e, w, j));
  return richardson(eps_values(eps_sequence), raw);
}

Extrapolation c_of_path(int d, const WalkPath& p, const std::vector<Rational>& eps_sequence, const Vec& w, const Mode& j) {
  if (p.length() == 0) {
    Extrapolation e;
    e.eps = eps_values(eps_sequence);
    e.raw.assign(eps_sequence.size(), 1.0);
    e.value = 1.0;
    e.ok = true;
    return e;
  }
  if (p.length() % 2 != 0 || p.end() != 1) throw std::invalid_argument("c(p) needs an even walk returning to height 1");
  const auto graphs = enumerate_graphs(p, 1);
  std::vector<double> raw;
  for (const Rational& e : eps_sequence) {
    double s = 0;
    for (const auto& g : graphs) s += chain_value(d, p, g, e, w, j);
    raw.push_back(s);
  }
  return richardson(eps_values(eps_sequence), raw);
}

DnEstimate D_n_estimate(int d, int n, const std::vector<Rational>& eps_sequence, const Vec& w, const Mode& j,
                        double series_tol, int max_terms) {
  if (n < 2) throw std::invalid_argument("D^n needs n >= 2");
  if (d < 3) throw std::invalid_argument("D^n is a d >= 3 quantity");
  DnEstimate est;
  est.n = n;
  std::vector<double> eps, vals;
  const double wj = dot(w, j);
  for (const Rational& e : eps_sequence) {
    DnAtEps row;
    row.eps = e.value();
    if (wj == 0.0) {
      // No interaction reaches e_j: every chain vanishes.
      row.series_terms.push_back(0.0);
      row.series_converged = true;
      est.rows.push_back(row);
      eps.push_back(row.eps);
      vals.push_back(0.0);
      continue;
    }
    const LatticePtr lat = cached_lattice(d, e);
    TruncatedSpace space(lat, w, 1, n, {make_tuple({j})});
    row.dim = space.dim();
    const double nn = normalization(w, j);
    CVector y0 = CVector::Zero(static_cast<Eigen::Index>(space.dim()));
    y0[space.index(make_tuple({j}))] = 1.0;
    CVector x;
    space.apply_T(y0, x, 1, 2);

    CVector v = x, mv;
    for (int b = 0; b < max_terms; ++b) {
      const double term = (b % 2 == 0 ? 1.0 : -1.0) * v.squaredNorm() / nn;
      row.series_terms.push_back(term);
      row.series_sum += term;
      if (std::abs(term) < series_tol) {
        row.series_converged = true;
        break;
      }
      if (b > 2 && std::abs(term) > std::abs(row.series_terms[b - 1])) break;
      space.apply_T(v, mv, 2, n);
      v = mv;
    }

    LinearOperator op(static_cast<Eigen::Index>(space.dim()), [&space, n](const CVector& in, CVector& out) {
      CVector t1, t2;
      space.apply_T(in, t1, 2, n);
      space.apply_T(t1, t2, 2, n);
      out = in - t2;
    });
    Eigen::ConjugateGradient<LinearOperator, Eigen::Lower | Eigen::Upper, Eigen::IdentityPreconditioner> cg;
    cg.setTolerance(1e-12);
    cg.setMaxIterations(10000);
    cg.compute(op);
    const CVector z = cg.solve(x);
    row.cg_iterations = static_cast<int>(cg.iterations());
    row.resolvent = x.dot(z).real() / nn;
    est.rows.push_back(row);
    eps.push_back(row.eps);
    vals.push_back(row.resolvent);
  }
  est.extrapolated = richardson(eps, vals);
  return est;
}

double variational_bound(const Lattice& lat, const Mode& k) {
  if (lat.dim() < 3) throw std::invalid_argument("the variational bound is a d >= 3 quantity");
  if (is_zero(k)) throw std::invalid_argument("k must be nonzero");
  double s = 0;
  for (const Mode& l : lat.modes()) {
    const Mode m = k - l;
    if (!lat.indicator(l, m)) continue;
    s += 1.0 / static_cast<double>(norm2(l) + norm2(m));
  }
  return lat.lambda() * lat.lambda() * s;
}

double variational_integral(int d, double tol) {
  if (d < 3 || d > kMaxDim) throw std::invalid_argument("variational_integral needs 3 <= d <= 4");
  using boost::math::quadrature::gauss_kronrod;
  // Cube split into 2d pyramids with apex at 0; the radial integral is explicit and leaves
  // d/(d-2) * int_{[-1,1]^{d-1}} du / (1 + |u|^2) = d/(d-2) 2^{d-1} int_{[0,1]^{d-1}}.
  std::function<double(int, double)> inner = [&](int left, double acc) -> double {
    if (left == 0) return 1.0 / (1.0 + acc);
    auto f = [&](double u) { return inner(left - 1, acc + u * u); };
    return gauss_kronrod<double, 21>::integrate(f, 0.0, 1.0, 15, tol);
  };
  return static_cast<double>(d) / (d - 2) * std::pow(2.0, d - 1) * inner(d - 1, 0.0);
}

std::vector<VanishingRow> vanishing_checks(int d, const WalkPath& p, const GraphAssignment& g,
                                           const std::vector<Mode>& j_modes, const std::vector<Rational>& eps_sequence,
                                           const Vec& w, bool extra_inverse_half) {
  std::vector<VanishingRow> rows;
  ChainOptions opt;
  opt.extra_inverse_half = extra_inverse_half;
  for (const Rational& e : eps_sequence) {
    const LatticePtr lat = cached_lattice(d, e);
    rows.push_back({e.value(), apply_T_chain(lat, p, g, j_modes, w, opt).norm()});
  }
  return rows;
}

std::vector<TBoundRow> t_bound_table(int d, const std::vector<Rational>& eps_sequence, const Vec& w, const Mode& j,
                                     double delta) {
  std::vector<TBoundRow> rows;
  const WalkPath up = make_path({1, 2});
  GraphAssignment g;
  g.steps = {{1, 2}};
  ChainOptions opt;
  opt.delta = delta;
  for (const Rational& e : eps_sequence) {
    const LatticePtr lat = cached_lattice(d, e);
    TBoundRow r;
    r.eps = e.value();
    OrderedKernel f = apply_T_chain(lat, up, g, {j}, w, opt);
    r.plus_ratio = f.norm();
    if (r.plus_ratio > 0) {
      const Coefficients co(*lat, w, delta);
      Map m = f.values;
      for (auto& [t, v] : m) v /= r.plus_ratio;
      multiply(m, co, -(1.0 + delta) / 2);
      m = step_down(m, 1, co);
      multiply(m, co, -(1.0 + delta) / 2);
      OrderedKernel h;
      h.level = 1;
      h.values = std::move(m);
      r.minus_ratio = h.norm();
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace wcsb
