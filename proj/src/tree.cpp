#include "bs1d/tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace bs1d {

namespace {

constexpr long kRadiusCap = 12;
constexpr std::size_t kBallSizeCap = 3'000'000;

// Splits den into (d-part, coprime part): den = dpart * cop with dpart
// supported on the primes of d and gcd(cop, d) = 1.
void split_denominator(const mpz_class& den, long d, mpz_class& dpart, mpz_class& cop) {
  dpart = 1;
  cop = den;
  mpz_class g, dz(d);
  while (true) {
    mpz_gcd(g.get_mpz_t(), cop.get_mpz_t(), dz.get_mpz_t());
    if (g == 1) break;
    while (mpz_divisible_p(cop.get_mpz_t(), g.get_mpz_t())) {
      mpz_divexact(cop.get_mpz_t(), cop.get_mpz_t(), g.get_mpz_t());
      dpart *= g;
      mpz_gcd(g.get_mpz_t(), cop.get_mpz_t(), g.get_mpz_t());
      if (g == 1) break;
    }
  }
}

long vp128(unsigned __int128 n, long p) {
  long v = 0;
  while (n % static_cast<unsigned long>(p) == 0) {
    n /= static_cast<unsigned long>(p);
    ++v;
  }
  return v;
}

// val_d(a - b) computed from the raw parts, with an int64 fast path.
DValuation val_of_difference(const Rational& a, const Rational& b, long d) {
  const mpz_class& na = a.get_num();
  const mpz_class& da = a.get_den();
  const mpz_class& nb = b.get_num();
  const mpz_class& db = b.get_den();
  if (na.fits_slong_p() && da.fits_slong_p() && nb.fits_slong_p() && db.fits_slong_p()) {
    const long la = na.get_si(), lda = da.get_si();
    const long lb = nb.get_si(), ldb = db.get_si();
    if (std::abs(la) < (1L << 30) && lda < (1L << 30) && std::abs(lb) < (1L << 30) &&
        ldb < (1L << 30)) {
      __int128 num = static_cast<__int128>(la) * ldb - static_cast<__int128>(lb) * lda;
      if (num == 0) return DValuation{true, 0};
      unsigned __int128 anum = num < 0 ? static_cast<unsigned __int128>(-num)
                                       : static_cast<unsigned __int128>(num);
      unsigned __int128 den =
          static_cast<unsigned __int128>(lda) * static_cast<unsigned __int128>(ldb);
      static thread_local long cached_d = 0;
      static thread_local std::vector<std::pair<long, int>> cached_factors;
      if (cached_d != d) {
        cached_factors = factorize(d);
        cached_d = d;
      }
      long t = 0;
      bool first = true;
      for (auto [p, j] : cached_factors) {
        long v = vp128(anum, p) - vp128(den, p);
        long c = floor_div(v, j);
        if (first || c < t) t = c;
        first = false;
      }
      return DValuation{false, t};
    }
  }
  mpz_class num = na * db - nb * da;
  if (num == 0) return DValuation{true, 0};
  mpz_class den = da * db;
  return val_d_parts(num, den, d);
}

}  // namespace

TreeVertex vertex_canonicalize(const Rational& x, long k, long d) {
  if (d < 2) throw std::invalid_argument("tree needs d >= 2");
  // Decompose x*d^k = c + r, c in Z_(d), r in Z[1/d] cut to [0,1); the residue
  // is d^{-k} r.
  Rational y = x * d_power(d, k);
  y.canonicalize();
  mpz_class dpart, cop;
  split_denominator(y.get_den(), d, dpart, cop);
  // r = c0 / dpart with c0 = num * cop^{-1} mod dpart.
  mpz_class c0 = 0;
  if (dpart != 1) {
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), cop.get_mpz_t(), dpart.get_mpz_t());
    c0 = y.get_num() % dpart * inv % dpart;
    if (c0 < 0) c0 += dpart;
  }
  Rational r(c0, dpart);
  r.canonicalize();
  TreeVertex v;
  v.residue = r * d_power(d, -k);
  v.residue.canonicalize();
  v.level = k;
  return v;
}

TreeVertex vertex_p(long n) { return TreeVertex{Rational(0), n}; }

TreeVertex parent(const TreeVertex& v, long d) {
  return vertex_canonicalize(v.residue, v.level + 1, d);
}

std::vector<TreeVertex> children(const TreeVertex& v, long d) {
  std::vector<TreeVertex> out;
  out.reserve(d);
  Rational step = d_power(d, -v.level);
  for (long j = 0; j < d; ++j)
    out.push_back(vertex_canonicalize(v.residue + j * step, v.level - 1, d));
  return out;
}

TreeVertex ancestor_at_level(const TreeVertex& v, long m, long d) {
  if (m < v.level) throw std::invalid_argument("ancestor level below vertex");
  return vertex_canonicalize(v.residue, m, d);
}

double busemann(const TreePoint& p) {
  return -static_cast<double>(p.base.level) - p.lambda;
}

long meet_level(const TreeVertex& v1, const TreeVertex& v2, long d) {
  DValuation val = val_of_difference(v1.residue, v2.residue, d);
  long m = std::max(v1.level, v2.level);
  if (!val.infinite) m = std::max(m, -val.value);
  return m;
}

TreeVertex meet_toward_omega(const TreeVertex& v1, const TreeVertex& v2, long d) {
  return ancestor_at_level(v1, meet_level(v1, v2, d), d);
}

long tree_distance(const TreeVertex& v1, const TreeVertex& v2, long d) {
  long m = meet_level(v1, v2, d);
  return (m - v1.level) + (m - v2.level);
}

double tree_distance(const TreePoint& p1, const TreePoint& p2, long d) {
  if (p1.base == p2.base) return std::fabs(p1.lambda - p2.lambda);
  long m = meet_level(p1.base, p2.base, d);
  long k1 = p1.base.level, k2 = p2.base.level;
  if (m == k1)  // p1's base is a strict ancestor: meet point is p1 itself
    return static_cast<double>(m - k2) + p1.lambda - p2.lambda;
  if (m == k2)
    return static_cast<double>(m - k1) + p2.lambda - p1.lambda;
  return (static_cast<double>(m - k1) - p1.lambda) + (static_cast<double>(m - k2) - p2.lambda);
}

bool tree_comparable(const TreePoint& p1, const TreePoint& p2, long d) {
  if (p1.base == p2.base) return true;
  long m = meet_level(p1.base, p2.base, d);
  return m == p1.base.level || m == p2.base.level;
}

TreePoint point_at_height(const TreePoint& p, double h, long d) {
  double h0 = height(p);
  if (h < h0 - 1e-12) throw std::invalid_argument("height below the point");
  if (h < h0) h = h0;
  long m = static_cast<long>(std::floor(h));
  if (m == p.base.level) return TreePoint{p.base, h - static_cast<double>(m)};
  TreeVertex u = ancestor_at_level(p.base, m, d);
  return TreePoint{u, h - static_cast<double>(m)};
}

std::vector<TreeVertex> sphere(const TreeVertex& z, long l, long d) {
  if (l < 1) throw std::invalid_argument("sphere needs l >= 1");
  std::vector<TreeVertex> cur{z};
  for (long step = 0; step < l; ++step) {
    std::vector<TreeVertex> next;
    next.reserve(cur.size() * d);
    for (const auto& v : cur)
      for (auto& c : children(v, d)) next.push_back(std::move(c));
    cur = std::move(next);
  }
  return cur;
}

bool horoball_contains(const TreeVertex& v, long n) { return -v.level <= n; }

bool subtree_contains(const TreeVertex& z, const TreeVertex& v, long d) {
  if (v.level > z.level) return false;
  return ancestor_at_level(v, z.level, d) == z;
}

TreeVertex act(const AffineElement& g, const TreeVertex& v, long d) {
  Rational image = affine_unit(g, d) * v.residue + g.b;
  return vertex_canonicalize(image, v.level + g.n, d);
}

TreePoint act(const AffineElement& g, const TreePoint& p, long d) {
  return TreePoint{act(g, p.base, d), p.lambda};
}

BallGraph bfs_ball(const TreeVertex& center, long radius, long d) {
  if (radius < 0 || radius > kRadiusCap)
    throw std::invalid_argument("bfs_ball radius cap exceeded");
  BallGraph ball;
  ball.verts.push_back(center);
  ball.index[center] = 0;
  ball.adj.emplace_back();
  std::deque<std::pair<int, long>> queue{{0, 0}};
  auto add_edge = [&ball](int a, int b) {
    ball.adj[a].push_back(b);
    ball.adj[b].push_back(a);
  };
  auto visit = [&](const TreeVertex& v, int from, long dist) {
    auto it = ball.index.find(v);
    if (it != ball.index.end()) {
      // Tree: a neighbor already present is exactly the BFS parent.
      return;
    }
    int id = static_cast<int>(ball.verts.size());
    if (ball.verts.size() >= kBallSizeCap) throw std::runtime_error("ball too large");
    ball.verts.push_back(v);
    ball.index[v] = id;
    ball.adj.emplace_back();
    add_edge(from, id);
    queue.emplace_back(id, dist);
  };
  while (!queue.empty()) {
    auto [id, dist] = queue.front();
    queue.pop_front();
    if (dist == radius) continue;
    TreeVertex v = ball.verts[id];
    visit(parent(v, d), id, dist + 1);
    for (const auto& c : children(v, d)) visit(c, id, dist + 1);
  }
  return ball;
}

std::vector<int> bfs_distances(const BallGraph& ball, int source) {
  std::vector<int> dist(ball.verts.size(), -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : ball.adj[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

std::string vertex_label(const TreeVertex& v) {
  return v.residue.get_str() + "@" + std::to_string(v.level);
}

std::string ball_adjacency_text(const BallGraph& ball) {
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < ball.verts.size(); ++i) {
    for (int j : ball.adj[i]) {
      if (static_cast<std::size_t>(j) < i) continue;
      const TreeVertex& a = ball.verts[i];
      const TreeVertex& b = ball.verts[j];
      const TreeVertex& child = a.level < b.level ? a : b;
      const TreeVertex& par = a.level < b.level ? b : a;
      lines.push_back(vertex_label(child) + " " + vertex_label(par));
    }
  }
  std::sort(lines.begin(), lines.end());
  std::ostringstream out;
  for (const auto& line : lines) out << line << "\n";
  return out.str();
}

}  // namespace bs1d
