#include "solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace algoselect::solvers {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void insertion_sort(std::vector<std::int64_t>& v, std::size_t lo, std::size_t hi) {
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const std::int64_t key = v[i];
    std::size_t j = i;
    while (j > lo && v[j - 1] > key) {
      v[j] = v[j - 1];
      --j;
    }
    v[j] = key;
  }
}

void merge_sort_range(std::vector<std::int64_t>& v, std::vector<std::int64_t>& buf,
                      std::size_t lo, std::size_t hi) {
  if (hi - lo <= 24) {
    insertion_sort(v, lo, hi);
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  merge_sort_range(v, buf, lo, mid);
  merge_sort_range(v, buf, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) buf[k++] = v[i] <= v[j] ? v[i++] : v[j++];
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
}

// 3-way partition around the pivot value; returns the equal run [lt, gt).
std::pair<std::size_t, std::size_t> partition3(std::vector<std::int64_t>& v, std::size_t lo,
                                               std::size_t hi, std::int64_t pivot) {
  std::size_t i = lo;
  std::size_t lt = lo;
  std::size_t gt = hi;
  while (i < gt) {
    if (v[i] < pivot) {
      std::swap(v[i++], v[lt++]);
    } else if (v[i] > pivot) {
      std::swap(v[i], v[--gt]);
    } else {
      ++i;
    }
  }
  return {lt, gt};
}

void quicksort_range(std::vector<std::int64_t>& v, std::size_t lo, std::size_t hi, Rng& rng) {
  while (hi - lo > 24) {
    const std::int64_t pivot = v[lo + rng.uniform_below(hi - lo)];
    const auto [lt, gt] = partition3(v, lo, hi, pivot);
    if (lt - lo < hi - gt) {
      quicksort_range(v, lo, lt, rng);
      lo = gt;
    } else {
      quicksort_range(v, gt, hi, rng);
      hi = lt;
    }
  }
  insertion_sort(v, lo, hi);
}

std::int64_t mom_select_range(std::vector<std::int64_t>& v, std::size_t lo, std::size_t hi,
                              std::size_t k) {
  while (true) {
    if (hi - lo <= 10) {
      insertion_sort(v, lo, hi);
      return v[k];
    }
    // medians of groups of five, gathered at the front of the range
    std::size_t med_end = lo;
    for (std::size_t g = lo; g < hi; g += 5) {
      const std::size_t ge = std::min(g + 5, hi);
      insertion_sort(v, g, ge);
      std::swap(v[med_end++], v[g + (ge - g) / 2]);
    }
    const std::size_t mid = lo + (med_end - lo) / 2;
    const std::int64_t pivot = mom_select_range(v, lo, med_end, mid);
    const auto [eq_lo, eq_hi] = partition3(v, lo, hi, pivot);
    if (k < eq_lo) {
      hi = eq_lo;
    } else if (k < eq_hi) {
      return pivot;
    } else {
      lo = eq_hi;
    }
  }
}

struct AdjacencyList {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> nbr;
  explicit AdjacencyList(const GraphPayload& p) : nbr(p.n) {
    for (const auto& e : p.edges) {
      nbr[e.u].emplace_back(e.v, e.w);
      nbr[e.v].emplace_back(e.u, e.w);
    }
  }
};

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

SortSolution merge_sort(const SortPayload& p) {
  SortSolution out{p.values};
  std::vector<std::int64_t> buf(out.values.size());
  if (!out.values.empty()) merge_sort_range(out.values, buf, 0, out.values.size());
  return out;
}

SortSolution quicksort_random(const SortPayload& p, Rng& rng) {
  SortSolution out{p.values};
  if (!out.values.empty()) quicksort_range(out.values, 0, out.values.size(), rng);
  return out;
}

SelectSolution select_median_of_medians(const SelectPayload& p) {
  std::vector<std::int64_t> v = p.values;
  return {mom_select_range(v, 0, v.size(), p.k)};
}

SelectSolution quickselect_random(const SelectPayload& p, Rng& rng) {
  std::vector<std::int64_t> v = p.values;
  std::size_t lo = 0;
  std::size_t hi = v.size();
  while (true) {
    if (hi - lo <= 10) {
      insertion_sort(v, lo, hi);
      return {v[p.k]};
    }
    const std::int64_t pivot = v[lo + rng.uniform_below(hi - lo)];
    const auto [eq_lo, eq_hi] = partition3(v, lo, hi, pivot);
    if (p.k < eq_lo) {
      hi = eq_lo;
    } else if (p.k < eq_hi) {
      return {pivot};
    } else {
      lo = eq_hi;
    }
  }
}

PathSolution dijkstra(const GraphPayload& p) {
  const AdjacencyList adj(p);
  std::vector<double> dist(p.n, kInf);
  std::vector<std::uint32_t> parent(p.n, UINT32_MAX);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[p.source] = 0.0;
  heap.emplace(0.0, p.source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    if (u == p.target) break;
    for (const auto& [v, w] : adj.nbr[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        parent[v] = u;
        heap.emplace(dist[v], v);
      }
    }
  }
  PathSolution out;
  if (dist[p.target] == kInf) return out;
  out.found = true;
  for (std::uint32_t at = p.target;; at = parent[at]) {
    out.nodes.push_back(at);
    if (at == p.source) break;
  }
  std::reverse(out.nodes.begin(), out.nodes.end());
  return out;
}

PathSolution greedy_walk_random(const GraphPayload& p, Rng& rng) {
  const AdjacencyList adj(p);
  PathSolution best;
  double best_weight = kInf;
  const int restarts = 30;
  for (int r = 0; r < restarts; ++r) {
    std::vector<std::uint8_t> visited(p.n, 0);
    std::vector<std::uint32_t> walk{p.source};
    visited[p.source] = 1;
    double weight = 0.0;
    std::uint32_t cur = p.source;
    for (std::size_t step = 0; step < 2 * p.n && cur != p.target; ++step) {
      // half greedy-cheapest, half reservoir-random over unvisited neighbors
      std::uint32_t next = UINT32_MAX;
      double next_w = kInf;
      if (rng.uniform01() < 0.5) {
        for (const auto& [v, w] : adj.nbr[cur]) {
          if (!visited[v] && w < next_w) {
            next = v;
            next_w = w;
          }
        }
      } else {
        std::size_t count = 0;
        for (const auto& [v, w] : adj.nbr[cur]) {
          if (!visited[v] && rng.uniform_below(++count) == 0) {
            next = v;
            next_w = w;
          }
        }
      }
      if (next == UINT32_MAX) break;
      visited[next] = 1;
      walk.push_back(next);
      weight += next_w;
      cur = next;
    }
    if (cur == p.target && weight < best_weight) {
      best_weight = weight;
      best.found = true;
      best.nodes = walk;
    }
  }
  return best;
}

TreeSolution kruskal(const GraphPayload& p) {
  std::vector<std::size_t> order(p.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.edges[a].w != p.edges[b].w ? p.edges[a].w < p.edges[b].w : a < b;
  });
  UnionFind uf(p.n);
  TreeSolution out;
  for (const std::size_t idx : order) {
    if (uf.unite(p.edges[idx].u, p.edges[idx].v)) {
      out.edge_indices.push_back(idx);
      if (out.edge_indices.size() + 1 == p.n) break;
    }
  }
  return out;
}

TreeSolution random_edge_greedy(const GraphPayload& p, Rng& rng) {
  TreeSolution best;
  double best_weight = kInf;
  std::vector<std::size_t> order(p.edges.size());
  std::vector<double> key(p.edges.size());
  for (int r = 0; r < 5; ++r) {
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < key.size(); ++i) {
      key[i] = p.edges[i].w * (0.5 + rng.uniform01());
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    UnionFind uf(p.n);
    TreeSolution cand;
    double weight = 0.0;
    for (const std::size_t idx : order) {
      if (uf.unite(p.edges[idx].u, p.edges[idx].v)) {
        cand.edge_indices.push_back(idx);
        weight += p.edges[idx].w;
        if (cand.edge_indices.size() + 1 == p.n) break;
      }
    }
    if (cand.edge_indices.size() + 1 == p.n && weight < best_weight) {
      best_weight = weight;
      best = std::move(cand);
    }
  }
  return best;
}

VectorSolution gaussian_elimination(const LinearSystemPayload& p) {
  const std::size_t n = p.n;
  std::vector<double> a = p.a;
  std::vector<double> rhs = p.b;
  std::vector<std::size_t> row(n);
  std::iota(row.begin(), row.end(), 0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[row[r] * n + col]) > std::abs(a[row[pivot] * n + col])) pivot = r;
    }
    std::swap(row[col], row[pivot]);
    const double diag = a[row[col] * n + col];
    if (std::abs(diag) < 1e-14) throw std::runtime_error("gaussian_elimination: singular matrix");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[row[r] * n + col] / diag;
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[row[r] * n + c] -= factor * a[row[col] * n + c];
      rhs[row[r]] -= factor * rhs[row[col]];
    }
  }
  VectorSolution out;
  out.x.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double sum = rhs[row[i]];
    for (std::size_t c = i + 1; c < n; ++c) sum -= a[row[i] * n + c] * out.x[c];
    out.x[i] = sum / a[row[i] * n + i];
  }
  return out;
}

VectorSolution kaczmarz_random(const LinearSystemPayload& p, Rng& rng) {
  const std::size_t n = p.n;
  std::vector<double> norm2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) norm2[i] += p.a[i * n + j] * p.a[i * n + j];
  }
  VectorSolution out;
  out.x.assign(n, 0.0);
  const std::size_t iterations = 40 * n;
  for (std::size_t it = 0; it < iterations; ++it) {
    const std::size_t i = rng.uniform_below(n);
    if (norm2[i] == 0.0) continue;
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += p.a[i * n + j] * out.x[j];
    const double scale = (p.b[i] - dot) / norm2[i];
    for (std::size_t j = 0; j < n; ++j) out.x[j] += scale * p.a[i * n + j];
  }
  return out;
}

VectorSolution simplex_dense(const LpPayload& p) {
  const std::size_t n = p.nvars;
  const std::size_t m = p.ncons;
  const std::size_t cols = n + m + 1;  // structural vars, slacks, rhs
  std::vector<double> tab(m * cols, 0.0);
  std::vector<double> obj(cols, 0.0);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab[i * cols + j] = p.a[i * n + j];
    tab[i * cols + n + i] = 1.0;
    tab[i * cols + cols - 1] = p.b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) obj[j] = -p.c[j];  // maximize c.x

  constexpr double kTol = 1e-9;
  for (int iter = 0; iter < 2000; ++iter) {
    // Bland's rule keeps the small dense programs cycle-free
    std::size_t enter = cols - 1;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (obj[j] < -kTol) {
        enter = j;
        break;
      }
    }
    if (enter == cols - 1) break;  // optimal
    std::size_t leave = m;
    double best_ratio = kInf;
    for (std::size_t i = 0; i < m; ++i) {
      const double coef = tab[i * cols + enter];
      if (coef > kTol) {
        const double ratio = tab[i * cols + cols - 1] / coef;
        if (ratio < best_ratio - kTol ||
            (ratio < best_ratio + kTol && (leave == m || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) throw std::runtime_error("simplex_dense: unbounded program");
    const double pivot = tab[leave * cols + enter];
    for (std::size_t j = 0; j < cols; ++j) tab[leave * cols + j] /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double factor = tab[i * cols + enter];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) tab[i * cols + j] -= factor * tab[leave * cols + j];
    }
    const double ofactor = obj[enter];
    for (std::size_t j = 0; j < cols; ++j) obj[j] -= ofactor * tab[leave * cols + j];
    basis[leave] = enter;
  }

  VectorSolution out;
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) out.x[basis[i]] = std::max(0.0, tab[i * cols + cols - 1]);
  }
  return out;
}

VectorSolution random_interior_sampling(const LpPayload& p, Rng& rng) {
  const std::size_t n = p.nvars;
  const std::size_t m = p.ncons;
  // per-variable cap from single-constraint limits
  std::vector<double> cap(n, kInf);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const double coef = p.a[i * n + j];
      if (coef > 0.0) cap[j] = std::min(cap[j], p.b[i] / coef);
    }
    if (cap[j] == kInf) cap[j] = 1.0;
  }
  VectorSolution best;
  best.x.assign(n, 0.0);
  double best_value = 0.0;
  std::vector<double> x(n);
  for (int s = 0; s < 2000; ++s) {
    for (std::size_t j = 0; j < n; ++j) x[j] = cap[j] * rng.uniform01();
    // repair: scale the sample back onto the feasible side
    double worst = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += p.a[i * n + j] * x[j];
      if (p.b[i] > 0.0) worst = std::max(worst, lhs / p.b[i]);
    }
    double value = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      x[j] /= worst;
      value += p.c[j] * x[j];
    }
    if (value > best_value) {
      best_value = value;
      best.x = x;
    }
  }
  return best;
}

double rastrigin_shifted(const NonconvexPayload& p, std::span<const double> x) {
  double f = 10.0 * static_cast<double>(p.dim);
  for (std::size_t i = 0; i < p.dim; ++i) {
    const double z = x[i] - p.shift[i];
    f += z * z - 10.0 * std::cos(2.0 * std::numbers::pi * z);
  }
  return f;
}

VectorSolution grid_coordinate_descent(const NonconvexPayload& p) {
  // Kronecker lattice scan, then cyclic coordinate descent with step halving.
  static constexpr double kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  const std::size_t d = p.dim;
  std::vector<double> alpha(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double s = std::sqrt(kPrimes[i % 12]);
    alpha[i] = s - std::floor(s);
  }
  std::vector<double> best(d, 0.0);
  double best_f = rastrigin_shifted(p, best);
  std::vector<double> x(d);
  for (std::size_t j = 1; j <= 1024; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      const double frac = std::fmod(static_cast<double>(j) * alpha[i], 1.0);
      x[i] = p.box * (2.0 * frac - 1.0);
    }
    const double f = rastrigin_shifted(p, x);
    if (f < best_f) {
      best_f = f;
      best = x;
    }
  }
  double step = 1.0;
  int passes = 0;
  while (step > 1e-4 && passes < 400) {
    bool improved = false;
    for (std::size_t i = 0; i < d; ++i) {
      for (const double delta : {step, -step}) {
        const double old = best[i];
        best[i] = std::clamp(old + delta, -p.box, p.box);
        const double f = rastrigin_shifted(p, best);
        if (f < best_f) {
          best_f = f;
          improved = true;
        } else {
          best[i] = old;
        }
      }
    }
    if (!improved) step *= 0.5;
    ++passes;
  }
  return {best};
}

VectorSolution simulated_annealing(const NonconvexPayload& p, Rng& rng) {
  const std::size_t d = p.dim;
  std::vector<double> x(d);
  for (auto& xi : x) xi = p.box * (2.0 * rng.uniform01() - 1.0);
  double f = rastrigin_shifted(p, x);
  std::vector<double> best = x;
  double best_f = f;
  const int iterations = 4000;
  std::vector<double> cand(d);
  for (int it = 0; it < iterations; ++it) {
    const double progress = static_cast<double>(it) / iterations;
    const double temp = 20.0 * std::pow(5e-5, progress);
    const double sigma = 2.0 * std::pow(0.01, progress);
    for (std::size_t i = 0; i < d; ++i) {
      cand[i] = std::clamp(x[i] + sigma * rng.normal(), -p.box, p.box);
    }
    const double fc = rastrigin_shifted(p, cand);
    if (fc < f || rng.open01() < std::exp(-(fc - f) / temp)) {
      x = cand;
      f = fc;
      if (f < best_f) {
        best_f = f;
        best = x;
      }
    }
  }
  return {best};
}

KnapsackSolution knapsack_dp(const KnapsackPayload& p) {
  const std::size_t n = p.weights.size();
  const std::size_t cap = static_cast<std::size_t>(std::max<std::int64_t>(p.capacity, 0));
  std::vector<std::int64_t> dp((n + 1) * (cap + 1), 0);
  const auto at = [&](std::size_t i, std::size_t w) -> std::int64_t& {
    return dp[i * (cap + 1) + w];
  };
  for (std::size_t i = 1; i <= n; ++i) {
    const auto wi = static_cast<std::size_t>(p.weights[i - 1]);
    const std::int64_t vi = p.values[i - 1];
    for (std::size_t w = 0; w <= cap; ++w) {
      std::int64_t keep = at(i - 1, w);
      if (wi <= w) keep = std::max(keep, at(i - 1, w - wi) + vi);
      at(i, w) = keep;
    }
  }
  KnapsackSolution out;
  out.take.assign(n, 0);
  std::size_t w = cap;
  for (std::size_t i = n; i > 0; --i) {
    if (at(i, w) != at(i - 1, w)) {
      out.take[i - 1] = 1;
      w -= static_cast<std::size_t>(p.weights[i - 1]);
    }
  }
  return out;
}

KnapsackSolution greedy_random_knapsack(const KnapsackPayload& p, Rng& rng) {
  const std::size_t n = p.weights.size();
  KnapsackSolution best;
  best.take.assign(n, 0);
  std::int64_t best_value = -1;
  std::vector<std::size_t> order(n);
  std::vector<double> key(n);
  for (int r = 0; r < 3; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ratio = static_cast<double>(p.values[i]) /
                           static_cast<double>(std::max<std::int64_t>(1, p.weights[i]));
      key[i] = ratio * (0.8 + 0.4 * rng.uniform01());
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    KnapsackSolution cand;
    cand.take.assign(n, 0);
    std::int64_t room = p.capacity;
    std::int64_t value = 0;
    for (const std::size_t i : order) {
      if (p.weights[i] <= room) {
        cand.take[i] = 1;
        room -= p.weights[i];
        value += p.values[i];
      }
    }
    if (value > best_value) {
      best_value = value;
      best = std::move(cand);
    }
  }
  return best;
}

namespace {

struct SatBest {
  std::vector<std::uint8_t> assignment;
  std::size_t satisfied = 0;
};

std::size_t count_satisfied(const SatPayload& p, const std::vector<std::uint8_t>& assignment) {
  std::size_t n = 0;
  for (const auto& clause : p.clauses) {
    for (const std::int32_t lit : clause) {
      const std::size_t var = static_cast<std::size_t>(std::abs(lit)) - 1;
      if ((lit > 0) == (assignment[var] != 0)) {
        ++n;
        break;
      }
    }
  }
  return n;
}

void consider_partial(const SatPayload& p, const std::vector<std::int8_t>& partial,
                      SatBest& best) {
  std::vector<std::uint8_t> full(p.nvars, 0);
  for (std::size_t v = 0; v < p.nvars; ++v) full[v] = partial[v] == 1 ? 1 : 0;
  const std::size_t sat = count_satisfied(p, full);
  if (sat > best.satisfied || best.assignment.empty()) {
    best.satisfied = sat;
    best.assignment = std::move(full);
  }
}

struct DpllSearch {
  const SatPayload& p;
  Deadline deadline;
  std::vector<std::int8_t> assign;  // -1 unassigned, 0 false, 1 true
  SatBest best;
  std::uint64_t nodes = 0;
  bool timed_out = false;

  DpllSearch(const SatPayload& payload, Deadline dl)
      : p(payload), deadline(dl), assign(payload.nvars, -1) {}

  bool expired() {
    if (timed_out) return true;
    if ((++nodes & 511) == 0 && std::chrono::steady_clock::now() >= deadline) {
      timed_out = true;
      consider_partial(p, assign, best);
    }
    return timed_out;
  }

  // 1 all satisfied, 0 conflict, 2 unit found (in `unit`), -1 undecided
  int scan(std::int32_t& unit) const {
    bool all_satisfied = true;
    for (const auto& clause : p.clauses) {
      bool satisfied = false;
      int unassigned = 0;
      std::int32_t last_free = 0;
      for (const std::int32_t lit : clause) {
        const std::size_t var = static_cast<std::size_t>(std::abs(lit)) - 1;
        if (assign[var] == -1) {
          ++unassigned;
          last_free = lit;
        } else if ((lit > 0) == (assign[var] == 1)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      if (unassigned == 0) return 0;
      all_satisfied = false;
      if (unassigned == 1) {
        unit = last_free;
        return 2;
      }
    }
    return all_satisfied ? 1 : -1;
  }

  bool solve() {
    if (expired()) return false;
    std::vector<std::size_t> trail;
    const auto rewind = [&] {
      for (const std::size_t v : trail) assign[v] = -1;
    };
    while (true) {
      std::int32_t unit = 0;
      const int state = scan(unit);
      if (state == 1) {
        consider_partial(p, assign, best);
        return true;
      }
      if (state == 0) {
        rewind();
        return false;
      }
      if (state == 2) {
        const std::size_t var = static_cast<std::size_t>(std::abs(unit)) - 1;
        assign[var] = unit > 0 ? 1 : 0;
        trail.push_back(var);
        continue;
      }
      break;
    }
    std::size_t branch_var = p.nvars;
    for (std::size_t v = 0; v < p.nvars; ++v) {
      if (assign[v] == -1) {
        branch_var = v;
        break;
      }
    }
    for (const std::int8_t value : {std::int8_t{1}, std::int8_t{0}}) {
      assign[branch_var] = value;
      if (solve()) return true;
      if (timed_out) break;
    }
    assign[branch_var] = -1;
    rewind();
    return false;
  }
};

}  // namespace

SatSolution dpll(const SatPayload& p, Deadline deadline) {
  DpllSearch search(p, deadline);
  search.solve();
  if (search.best.assignment.empty()) consider_partial(p, search.assign, search.best);
  return {search.best.assignment};
}

SatSolution walksat(const SatPayload& p, Rng& rng, Deadline deadline) {
  const std::size_t n = p.nvars;
  const std::size_t m = p.clauses.size();
  std::vector<std::vector<std::uint32_t>> occurs(n);
  for (std::size_t c = 0; c < m; ++c) {
    for (const std::int32_t lit : p.clauses[c]) {
      occurs[static_cast<std::size_t>(std::abs(lit)) - 1].push_back(static_cast<std::uint32_t>(c));
    }
  }
  std::vector<std::uint8_t> a(n);
  const auto lit_true = [&](std::int32_t lit) {
    return (lit > 0) == (a[static_cast<std::size_t>(std::abs(lit)) - 1] != 0);
  };

  SatBest best;
  const int restarts = 10;
  const std::size_t max_flips = 60 * n;
  for (int r = 0; r < restarts; ++r) {
    for (auto& bit : a) bit = static_cast<std::uint8_t>(rng.uniform_below(2));
    std::vector<std::uint32_t> true_count(m, 0);
    std::vector<std::uint32_t> unsat;
    std::vector<std::uint32_t> unsat_pos(m, UINT32_MAX);
    for (std::size_t c = 0; c < m; ++c) {
      for (const std::int32_t lit : p.clauses[c]) {
        if (lit_true(lit)) ++true_count[c];
      }
      if (true_count[c] == 0) {
        unsat_pos[c] = static_cast<std::uint32_t>(unsat.size());
        unsat.push_back(static_cast<std::uint32_t>(c));
      }
    }
    const auto flip = [&](std::size_t var) {
      a[var] ^= 1;
      for (const std::uint32_t c : occurs[var]) {
        std::uint32_t count = 0;
        for (const std::int32_t lit : p.clauses[c]) {
          if (lit_true(lit)) ++count;
        }
        const bool was_unsat = unsat_pos[c] != UINT32_MAX;
        if (count == 0 && !was_unsat) {
          unsat_pos[c] = static_cast<std::uint32_t>(unsat.size());
          unsat.push_back(c);
        } else if (count > 0 && was_unsat) {
          const std::uint32_t pos = unsat_pos[c];
          const std::uint32_t moved = unsat.back();
          unsat[pos] = moved;
          unsat_pos[moved] = pos;
          unsat.pop_back();
          unsat_pos[c] = UINT32_MAX;
        }
        true_count[c] = count;
      }
    };
    const auto break_count = [&](std::size_t var) {
      std::size_t breaks = 0;
      for (const std::uint32_t c : occurs[var]) {
        if (true_count[c] != 1) continue;
        // breaks iff the lone true literal is on this variable
        for (const std::int32_t lit : p.clauses[c]) {
          if (static_cast<std::size_t>(std::abs(lit)) - 1 == var && lit_true(lit)) {
            ++breaks;
            break;
          }
        }
      }
      return breaks;
    };

    bool expired = false;
    for (std::size_t step = 0; step < max_flips && !unsat.empty(); ++step) {
      if ((step & 255) == 0 && std::chrono::steady_clock::now() >= deadline) {
        expired = true;
        break;
      }
      const auto& clause = p.clauses[unsat[rng.uniform_below(unsat.size())]];
      std::size_t var;
      if (rng.uniform01() < 0.5) {
        var = static_cast<std::size_t>(std::abs(clause[rng.uniform_below(3)])) - 1;
      } else {
        var = static_cast<std::size_t>(std::abs(clause[0])) - 1;
        std::size_t best_breaks = break_count(var);
        for (int i = 1; i < 3; ++i) {
          const std::size_t v = static_cast<std::size_t>(std::abs(clause[i])) - 1;
          const std::size_t b = break_count(v);
          if (b < best_breaks) {
            best_breaks = b;
            var = v;
          }
        }
      }
      flip(var);
    }
    const std::size_t satisfied = m - unsat.size();
    if (satisfied > best.satisfied || best.assignment.empty()) {
      best.satisfied = satisfied;
      best.assignment = a;
    }
    if (unsat.empty() || expired) break;
  }
  return {best.assignment};
}

double integrand(const IntegrationPayload& p, double x) {
  return std::exp(-p.decay * x * x) * std::cos(p.freq * x);
}

ValueSolution simpson_composite(const IntegrationPayload& p) {
  std::size_t n = p.panels;
  if (n % 2 == 1) ++n;
  const double h = (p.hi - p.lo) / static_cast<double>(n);
  double sum = integrand(p, p.lo) + integrand(p, p.hi);
  for (std::size_t i = 1; i < n; ++i) {
    const double x = p.lo + h * static_cast<double>(i);
    sum += integrand(p, x) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return {sum * h / 3.0};
}

ValueSolution monte_carlo_integration(const IntegrationPayload& p, Rng& rng) {
  const double span = p.hi - p.lo;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.mc_samples; ++i) {
    sum += integrand(p, p.lo + span * rng.uniform01());
  }
  return {span * sum / static_cast<double>(p.mc_samples)};
}

}  // namespace algoselect::solvers
