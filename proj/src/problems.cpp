#include "algoselect/problems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "solvers.hpp"

namespace algoselect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double param(const ProblemSpec& spec, const std::string& name) {
  const auto it = spec.params.find(name);
  if (it == spec.params.end()) {
    throw std::invalid_argument("missing size parameter '" + name + "' for " + spec.problem);
  }
  if (!(it->second > 0.0)) {
    throw std::invalid_argument("size parameter '" + name + "' must be positive");
  }
  return it->second;
}

std::size_t param_size(const ProblemSpec& spec, const std::string& name) {
  return static_cast<std::size_t>(param(spec, name));
}

std::vector<std::int64_t> random_values(std::size_t n, Rng& rng) {
  std::vector<std::int64_t> v(n);
  for (auto& x : v) x = static_cast<std::int64_t>(rng.uniform_below(1000000000));
  return v;
}

GraphPayload random_graph(std::size_t n, double density, Rng& rng) {
  GraphPayload g;
  g.n = n;
  g.source = 0;
  g.target = static_cast<std::uint32_t>(n - 1);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (rng.uniform01() < density) {
        g.edges.push_back({u, v, 1.0 + 9.0 * rng.uniform01()});
      }
    }
  }
  return g;
}

}  // namespace

std::string category_name(Category c) {
  switch (c) {
    case Category::Sorting: return "sorting";
    case Category::Graphs: return "graphs";
    case Category::LinearOpt: return "linear-opt";
    case Category::NonconvexOpt: return "nonconvex-opt";
    case Category::IntegerOpt: return "integer-opt";
    case Category::SearchSat: return "search-sat";
    case Category::Numerical: return "numerical";
  }
  return "unknown";
}

const std::vector<ManifestEntry>& suite_manifest() {
  static const std::vector<ManifestEntry> manifest = [] {
    const auto entry = [](std::string problem, Category cat,
                          std::map<std::string, double> params, std::string sys,
                          std::string ran) {
      ManifestEntry e;
      e.spec_template = ProblemSpec{problem, cat, std::move(params), 0};
      e.systematic = AlgorithmEntry{std::move(sys), problem, Style::Systematic};
      e.randomized = AlgorithmEntry{std::move(ran), problem, Style::Randomized};
      return e;
    };
    std::vector<ManifestEntry> m;
    m.push_back(entry("sorting", Category::Sorting, {{"n", 20000}}, "merge_sort",
                      "quicksort_random"));
    m.push_back(entry("selection", Category::Sorting, {{"n", 20000}},
                      "select_median_of_medians", "quickselect_random"));
    m.push_back(entry("shortest_path", Category::Graphs, {{"n", 400}, {"density", 0.05}},
                      "dijkstra", "greedy_walk_random"));
    m.push_back(entry("mst", Category::Graphs, {{"n", 400}, {"density", 0.05}}, "kruskal",
                      "random_edge_greedy"));
    m.push_back(entry("linear_system", Category::LinearOpt, {{"n", 80}},
                      "gaussian_elimination", "kaczmarz_random"));
    m.push_back(entry("linear_program", Category::LinearOpt, {{"nvars", 6}, {"ncons", 10}},
                      "simplex_dense", "random_interior_sampling"));
    m.push_back(entry("nonconvex_opt", Category::NonconvexOpt, {{"dim", 10}},
                      "grid_coordinate_descent", "simulated_annealing"));
    m.push_back(entry("knapsack", Category::IntegerOpt, {{"n", 200}}, "knapsack_dp",
                      "greedy_random_knapsack"));
    m.push_back(entry("sat", Category::SearchSat, {{"nvars", 150}, {"ratio", 3.0}}, "dpll",
                      "walksat"));
    m.push_back(entry("integration", Category::Numerical,
                      {{"panels", 1000}, {"mc_samples", 20000}}, "simpson_composite",
                      "monte_carlo_integration"));
    return m;
  }();
  return manifest;
}

const ManifestEntry& manifest_entry(const std::string& problem) {
  for (const auto& e : suite_manifest()) {
    if (e.spec_template.problem == problem) return e;
  }
  throw std::invalid_argument("unknown problem id: " + problem);
}

AlgorithmEntry registry_lookup(const std::string& key) {
  const auto slash = key.find('/');
  if (slash == std::string::npos) {
    throw std::invalid_argument("registry key must look like 'problem/style': " + key);
  }
  const std::string problem = key.substr(0, slash);
  const std::string style = key.substr(slash + 1);
  const auto& entry = manifest_entry(problem);
  if (style == "systematic") return entry.systematic;
  if (style == "randomized") return entry.randomized;
  throw std::invalid_argument("unknown style '" + style + "' in registry key " + key);
}

ProblemInstance generate(const ProblemSpec& spec) {
  const auto& tpl = manifest_entry(spec.problem);  // validates the problem id
  ProblemSpec filled = spec;
  filled.category = tpl.spec_template.category;
  for (const auto& [name, value] : tpl.spec_template.params) {
    filled.params.emplace(name, value);  // defaults for anything unspecified
  }
  Rng rng(filled.seed);

  ProblemInstance instance;
  instance.problem = filled.problem;
  instance.category = filled.category;

  if (filled.problem == "sorting") {
    instance.payload = SortPayload{random_values(param_size(filled, "n"), rng)};
  } else if (filled.problem == "selection") {
    const std::size_t n = param_size(filled, "n");
    instance.payload = SelectPayload{random_values(n, rng), n / 2};
  } else if (filled.problem == "shortest_path" || filled.problem == "mst") {
    instance.payload = random_graph(param_size(filled, "n"), param(filled, "density"), rng);
  } else if (filled.problem == "linear_system") {
    const std::size_t n = param_size(filled, "n");
    LinearSystemPayload p;
    p.n = n;
    p.a.resize(n * n);
    p.b.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) p.a[i * n + j] = 2.0 * rng.uniform01() - 1.0;
      p.a[i * n + i] += static_cast<double>(n);  // diagonal dominance
      p.b[i] = 2.0 * rng.uniform01() - 1.0;
    }
    instance.payload = std::move(p);
  } else if (filled.problem == "linear_program") {
    LpPayload p;
    p.nvars = param_size(filled, "nvars");
    p.ncons = param_size(filled, "ncons");
    p.c.resize(p.nvars);
    p.a.resize(p.ncons * p.nvars);
    p.b.resize(p.ncons);
    for (auto& v : p.c) v = 0.5 + rng.uniform01();
    for (auto& v : p.a) v = 0.1 + 0.9 * rng.uniform01();
    for (auto& v : p.b) v = 1.0 + rng.uniform01();
    instance.payload = std::move(p);
  } else if (filled.problem == "nonconvex_opt") {
    NonconvexPayload p;
    p.dim = param_size(filled, "dim");
    p.box = 5.0;
    p.shift.resize(p.dim);
    for (auto& s : p.shift) s = 2.5 * (2.0 * rng.uniform01() - 1.0);
    instance.payload = std::move(p);
  } else if (filled.problem == "knapsack") {
    const std::size_t n = param_size(filled, "n");
    KnapsackPayload p;
    p.weights.resize(n);
    p.values.resize(n);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      p.weights[i] = static_cast<std::int64_t>(rng.uniform_below(20)) + 1;
      p.values[i] = static_cast<std::int64_t>(rng.uniform_below(20)) + 1;
      total += p.weights[i];
    }
    p.capacity = total / 2;
    instance.payload = std::move(p);
  } else if (filled.problem == "sat") {
    const std::size_t nvars = param_size(filled, "nvars");
    const double ratio = param(filled, "ratio");
    const auto m = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(nvars)));
    SatPayload p;
    p.nvars = nvars;
    std::vector<std::uint8_t> planted(nvars);
    for (auto& bit : planted) bit = static_cast<std::uint8_t>(rng.uniform_below(2));
    p.clauses.reserve(m);
    for (std::size_t c = 0; c < m; ++c) {
      std::array<std::int32_t, 3> clause{};
      std::array<std::size_t, 3> vars{};
      for (int i = 0; i < 3; ++i) {
        bool fresh = false;
        while (!fresh) {
          vars[i] = rng.uniform_below(nvars);
          fresh = true;
          for (int j = 0; j < i; ++j) fresh = fresh && vars[j] != vars[i];
        }
        const bool positive = rng.uniform_below(2) == 1;
        clause[i] = static_cast<std::int32_t>(vars[i] + 1) * (positive ? 1 : -1);
      }
      bool satisfied = false;
      for (int i = 0; i < 3; ++i) {
        if ((clause[i] > 0) == (planted[vars[i]] != 0)) satisfied = true;
      }
      if (!satisfied) {
        // flip one literal so the planted assignment satisfies the clause
        const int i = static_cast<int>(rng.uniform_below(3));
        clause[i] = -clause[i];
      }
      p.clauses.push_back(clause);
    }
    instance.payload = std::move(p);
  } else if (filled.problem == "integration") {
    IntegrationPayload p;
    p.lo = -2.0;
    p.hi = 2.0;
    p.freq = 1.0 + 3.0 * rng.uniform01();
    p.decay = 0.3 + 0.7 * rng.uniform01();
    p.panels = param_size(filled, "panels");
    p.mc_samples = param_size(filled, "mc_samples");
    instance.payload = std::move(p);
  } else {
    throw std::invalid_argument("unknown problem id: " + filled.problem);
  }

  instance.features = extract_features(instance.problem, instance.category, instance.payload);
  return instance;
}

namespace {

double sortedness(const std::vector<std::int64_t>& v) {
  if (v.size() < 2) return 1.0;
  std::size_t ok = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i - 1] <= v[i]) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(v.size() - 1);
}

struct FeatureFacts {
  double size = 1.0;
  double density = 0.0;
  double sorted = 0.0;
  double condition = 0.0;
  double constraint_ratio = 0.0;
};

FeatureFacts payload_facts(const Payload& payload) {
  FeatureFacts f;
  std::visit(
      [&f](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SortPayload>) {
          f.size = static_cast<double>(p.values.size());
          f.sorted = sortedness(p.values);
        } else if constexpr (std::is_same_v<T, SelectPayload>) {
          f.size = static_cast<double>(p.values.size());
          f.sorted = sortedness(p.values);
        } else if constexpr (std::is_same_v<T, GraphPayload>) {
          f.size = static_cast<double>(p.n);
          const double pairs = static_cast<double>(p.n) * static_cast<double>(p.n - 1) / 2.0;
          f.density = pairs > 0.0 ? static_cast<double>(p.edges.size()) / pairs : 0.0;
        } else if constexpr (std::is_same_v<T, LinearSystemPayload>) {
          f.size = static_cast<double>(p.n);
          double max_norm = 0.0;
          double min_norm = kInf;
          for (std::size_t i = 0; i < p.n; ++i) {
            double norm = 0.0;
            for (std::size_t j = 0; j < p.n; ++j) norm += p.a[i * p.n + j] * p.a[i * p.n + j];
            norm = std::sqrt(norm);
            max_norm = std::max(max_norm, norm);
            min_norm = std::min(min_norm, norm);
          }
          f.condition = min_norm > 0.0 ? std::log10(max_norm / min_norm) : 0.0;
        } else if constexpr (std::is_same_v<T, LpPayload>) {
          f.size = static_cast<double>(p.nvars);
          f.constraint_ratio =
              static_cast<double>(p.ncons) / static_cast<double>(std::max<std::size_t>(1, p.nvars));
        } else if constexpr (std::is_same_v<T, NonconvexPayload>) {
          f.size = static_cast<double>(p.dim);
        } else if constexpr (std::is_same_v<T, KnapsackPayload>) {
          f.size = static_cast<double>(p.weights.size());
          const double total = static_cast<double>(
              std::accumulate(p.weights.begin(), p.weights.end(), std::int64_t{0}));
          f.constraint_ratio = total > 0.0 ? static_cast<double>(p.capacity) / total : 0.0;
        } else if constexpr (std::is_same_v<T, SatPayload>) {
          f.size = static_cast<double>(p.nvars);
          f.constraint_ratio = static_cast<double>(p.clauses.size()) /
                               static_cast<double>(std::max<std::size_t>(1, p.nvars));
        } else if constexpr (std::is_same_v<T, IntegrationPayload>) {
          f.size = static_cast<double>(p.panels);
        }
      },
      payload);
  return f;
}

}  // namespace

FeatureVector extract_features(const std::string& problem, Category category,
                               const Payload& payload) {
  (void)problem;
  FeatureVector features(kFeatureDim, 0.0);
  features[static_cast<std::size_t>(category)] = 1.0;
  const FeatureFacts f = payload_facts(payload);
  features[7] = std::log2(std::max(1.0, f.size));
  features[8] = f.density;
  features[9] = f.sorted;
  features[10] = f.condition;
  features[11] = f.constraint_ratio;
  validate_features(features);
  return features;
}

// ---------------- quality checkers ----------------

namespace {

double quality_sort(const SortPayload& p, const SortSolution& s) {
  if (s.values.size() != p.values.size()) return 0.0;
  if (!std::is_sorted(s.values.begin(), s.values.end())) return 0.0;
  std::vector<std::int64_t> expected = p.values;
  std::sort(expected.begin(), expected.end());
  return expected == s.values ? 1.0 : 0.0;
}

double quality_select(const SelectPayload& p, const SelectSolution& s) {
  std::vector<std::int64_t> v = p.values;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(p.k), v.end());
  return v[p.k] == s.value ? 1.0 : 0.0;
}

// checker-local dense Dijkstra, distinct from the solver's heap version
double dense_shortest_distance(const GraphPayload& p) {
  std::vector<double> w(p.n * p.n, kInf);
  for (const auto& e : p.edges) {
    w[e.u * p.n + e.v] = std::min(w[e.u * p.n + e.v], e.w);
    w[e.v * p.n + e.u] = std::min(w[e.v * p.n + e.u], e.w);
  }
  std::vector<double> dist(p.n, kInf);
  std::vector<std::uint8_t> done(p.n, 0);
  dist[p.source] = 0.0;
  for (std::size_t round = 0; round < p.n; ++round) {
    std::size_t u = p.n;
    double best = kInf;
    for (std::size_t i = 0; i < p.n; ++i) {
      if (!done[i] && dist[i] < best) {
        best = dist[i];
        u = i;
      }
    }
    if (u == p.n) break;
    done[u] = 1;
    if (u == p.target) break;
    for (std::size_t v = 0; v < p.n; ++v) {
      if (w[u * p.n + v] < kInf && dist[u] + w[u * p.n + v] < dist[v]) {
        dist[v] = dist[u] + w[u * p.n + v];
      }
    }
  }
  return dist[p.target];
}

double quality_path(const GraphPayload& p, const PathSolution& s) {
  if (!s.found || s.nodes.empty()) return 0.0;
  if (s.nodes.front() != p.source || s.nodes.back() != p.target) return 0.0;
  std::vector<double> w(p.n * p.n, kInf);
  for (const auto& e : p.edges) {
    w[e.u * p.n + e.v] = std::min(w[e.u * p.n + e.v], e.w);
    w[e.v * p.n + e.u] = std::min(w[e.v * p.n + e.u], e.w);
  }
  double found = 0.0;
  for (std::size_t i = 1; i < s.nodes.size(); ++i) {
    if (s.nodes[i] >= p.n || s.nodes[i - 1] >= p.n) return 0.0;
    const double edge = w[s.nodes[i - 1] * p.n + s.nodes[i]];
    if (edge == kInf) return 0.0;  // not an edge of the graph
    found += edge;
  }
  const double opt = dense_shortest_distance(p);
  if (opt == kInf) return 0.0;
  if (found <= 0.0) return p.source == p.target ? 1.0 : 0.0;
  return clamp01(opt / found);
}

// checker-local Prim over the dense matrix, distinct from the solvers
double prim_mst_weight(const GraphPayload& p) {
  std::vector<double> w(p.n * p.n, kInf);
  for (const auto& e : p.edges) {
    w[e.u * p.n + e.v] = std::min(w[e.u * p.n + e.v], e.w);
    w[e.v * p.n + e.u] = std::min(w[e.v * p.n + e.u], e.w);
  }
  std::vector<double> key(p.n, kInf);
  std::vector<std::uint8_t> done(p.n, 0);
  key[0] = 0.0;
  double total = 0.0;
  for (std::size_t round = 0; round < p.n; ++round) {
    std::size_t u = p.n;
    double best = kInf;
    for (std::size_t i = 0; i < p.n; ++i) {
      if (!done[i] && key[i] < best) {
        best = key[i];
        u = i;
      }
    }
    if (u == p.n) return kInf;  // disconnected
    done[u] = 1;
    total += key[u];
    for (std::size_t v = 0; v < p.n; ++v) {
      if (!done[v] && w[u * p.n + v] < key[v]) key[v] = w[u * p.n + v];
    }
  }
  return total;
}

double quality_tree(const GraphPayload& p, const TreeSolution& s) {
  if (p.n == 0) return 0.0;
  if (s.edge_indices.size() + 1 != p.n) return 0.0;
  std::vector<std::uint32_t> parent(p.n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  double weight = 0.0;
  for (const std::size_t idx : s.edge_indices) {
    if (idx >= p.edges.size()) return 0.0;
    const auto& e = p.edges[idx];
    const auto ru = find(e.u);
    const auto rv = find(e.v);
    if (ru == rv) return 0.0;  // cycle
    parent[ru] = rv;
    weight += e.w;
  }
  const double opt = prim_mst_weight(p);
  if (opt == kInf || weight <= 0.0) return 0.0;
  return clamp01(opt / weight);
}

double quality_linsys(const LinearSystemPayload& p, const VectorSolution& s) {
  if (s.x.size() != p.n) return 0.0;
  double res2 = 0.0;
  double b2 = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < p.n; ++j) dot += p.a[i * p.n + j] * s.x[j];
    res2 += (dot - p.b[i]) * (dot - p.b[i]);
    b2 += p.b[i] * p.b[i];
  }
  const double relres = std::sqrt(res2) / std::max(std::sqrt(b2), 1e-300);
  // quality 1 at relres <= 1e-6, 0 at relres >= 1, log-linear between
  return clamp01(-std::log10(std::max(relres, 1e-12)) / 6.0);
}

// exact optimum by active-set vertex enumeration; independent of the simplex
double lp_optimal_value(const LpPayload& p) {
  const std::size_t n = p.nvars;
  const std::size_t m = p.ncons;
  const std::size_t total = m + n;  // rows of A, then x_j >= 0 bounds
  std::vector<double> mat(n * n);
  std::vector<double> rhs(n);
  std::vector<double> x(n);
  double best = 0.0;  // origin is feasible

  const auto row_coef = [&](std::size_t row, std::size_t j) {
    return row < m ? p.a[row * n + j] : (row - m == j ? 1.0 : 0.0);
  };
  const auto row_rhs = [&](std::size_t row) { return row < m ? p.b[row] : 0.0; };

  // iterate all n-subsets of the total constraints
  std::vector<std::size_t> idx(n);
  const auto solve_active_set = [&]() {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) mat[r * n + c] = row_coef(idx[r], c);
      rhs[r] = row_rhs(idx[r]);
    }
    // Gaussian elimination with partial pivoting on the n x n active system
    std::vector<double> a = mat;
    std::vector<double> b = rhs;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < n; ++r) {
        if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
      }
      if (std::abs(a[pivot * n + col]) < 1e-10) return;  // singular active set
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
      for (std::size_t r = col + 1; r < n; ++r) {
        const double factor = a[r * n + col] / a[col * n + col];
        for (std::size_t c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
        b[r] -= factor * b[col];
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      double sum = b[i];
      for (std::size_t c = i + 1; c < n; ++c) sum -= a[i * n + c] * x[c];
      x[i] = sum / a[i * n + i];
    }
    constexpr double tol = 1e-7;
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j] < -tol) return;
    }
    for (std::size_t i = 0; i < m; ++i) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += p.a[i * n + j] * x[j];
      if (lhs > p.b[i] + tol) return;
    }
    double value = 0.0;
    for (std::size_t j = 0; j < n; ++j) value += p.c[j] * std::max(0.0, x[j]);
    best = std::max(best, value);
  };

  // depth-first enumeration of index combinations
  std::vector<std::size_t> comb(n, 0);
  const std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t pos,
                                                                    std::size_t start) {
    if (pos == n) {
      idx = comb;
      solve_active_set();
      return;
    }
    for (std::size_t i = start; i + (n - pos) <= total; ++i) {
      comb[pos] = i;
      recurse(pos + 1, i + 1);
    }
  };
  recurse(0, 0);
  return best;
}

double quality_lp(const LpPayload& p, const VectorSolution& s) {
  if (s.x.size() != p.nvars) return 0.0;
  constexpr double tol = 1e-7;
  double value = 0.0;
  for (std::size_t j = 0; j < p.nvars; ++j) {
    if (s.x[j] < -tol) return 0.0;
    value += p.c[j] * std::max(0.0, s.x[j]);
  }
  for (std::size_t i = 0; i < p.ncons; ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < p.nvars; ++j) lhs += p.a[i * p.nvars + j] * std::max(0.0, s.x[j]);
    if (lhs > p.b[i] * (1.0 + 1e-9) + tol) return 0.0;
  }
  const double opt = lp_optimal_value(p);
  if (opt <= 0.0) return 0.0;
  return clamp01(value / opt);
}

double quality_nonconvex(const NonconvexPayload& p, const VectorSolution& s) {
  if (s.x.size() != p.dim) return 0.0;
  for (const double xi : s.x) {
    if (!std::isfinite(xi) || std::abs(xi) > p.box + 1e-9) return 0.0;
  }
  const double f = solvers::rastrigin_shifted(p, s.x);
  // reference level: expected value at a uniform random point of the box
  const double f_ref = (10.0 + p.box * p.box / 3.0) * static_cast<double>(p.dim);
  return clamp01(1.0 - f / f_ref);
}

// value-only rolling-array DP, distinct from the solver's traceback table
std::int64_t knapsack_optimal_value(const KnapsackPayload& p) {
  const auto cap = static_cast<std::size_t>(std::max<std::int64_t>(p.capacity, 0));
  std::vector<std::int64_t> dp(cap + 1, 0);
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    const auto wi = static_cast<std::size_t>(p.weights[i]);
    for (std::size_t w = cap; w >= wi && w <= cap; --w) {
      dp[w] = std::max(dp[w], dp[w - wi] + p.values[i]);
    }
  }
  return dp[cap];
}

double quality_knapsack(const KnapsackPayload& p, const KnapsackSolution& s) {
  if (s.take.size() != p.weights.size()) return 0.0;
  std::int64_t weight = 0;
  std::int64_t value = 0;
  for (std::size_t i = 0; i < s.take.size(); ++i) {
    if (s.take[i]) {
      weight += p.weights[i];
      value += p.values[i];
    }
  }
  if (weight > p.capacity) return 0.0;
  const std::int64_t opt = knapsack_optimal_value(p);
  if (opt <= 0) return value == 0 ? 1.0 : 0.0;
  return clamp01(static_cast<double>(value) / static_cast<double>(opt));
}

double quality_sat(const SatPayload& p, const SatSolution& s) {
  if (s.assignment.size() != p.nvars || p.clauses.empty()) return 0.0;
  std::size_t satisfied = 0;
  for (const auto& clause : p.clauses) {
    for (const std::int32_t lit : clause) {
      const std::size_t var = static_cast<std::size_t>(std::abs(lit)) - 1;
      if ((lit > 0) == (s.assignment[var] != 0)) {
        ++satisfied;
        break;
      }
    }
  }
  return static_cast<double>(satisfied) / static_cast<double>(p.clauses.size());
}

// 5-point Gauss-Legendre composite reference, distinct from both solvers
double integration_reference(const IntegrationPayload& p) {
  static constexpr double nodes[] = {0.0, 0.5384693101056831, -0.5384693101056831,
                                     0.9061798459386640, -0.9061798459386640};
  static constexpr double weights[] = {0.5688888888888889, 0.4786286704993665,
                                       0.4786286704993665, 0.2369268850561891,
                                       0.2369268850561891};
  const std::size_t cells = 2000;
  const double h = (p.hi - p.lo) / static_cast<double>(cells);
  double total = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double mid = p.lo + h * (static_cast<double>(c) + 0.5);
    for (int q = 0; q < 5; ++q) {
      total += weights[q] * solvers::integrand(p, mid + 0.5 * h * nodes[q]);
    }
  }
  return total * 0.5 * h;
}

double quality_integration(const IntegrationPayload& p, const ValueSolution& s) {
  if (!std::isfinite(s.value)) return 0.0;
  const double ref = integration_reference(p);
  const double tol = 0.05 * std::abs(ref) + 0.02;
  return clamp01(1.0 - std::abs(s.value - ref) / tol);
}

}  // namespace

double solution_quality(const ProblemInstance& instance, const Solution& solution) {
  return std::visit(
      [&](const auto& payload) -> double {
        using P = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<P, SortPayload>) {
          if (const auto* s = std::get_if<SortSolution>(&solution)) return quality_sort(payload, *s);
        } else if constexpr (std::is_same_v<P, SelectPayload>) {
          if (const auto* s = std::get_if<SelectSolution>(&solution)) {
            return quality_select(payload, *s);
          }
        } else if constexpr (std::is_same_v<P, GraphPayload>) {
          if (const auto* s = std::get_if<PathSolution>(&solution)) return quality_path(payload, *s);
          if (const auto* s = std::get_if<TreeSolution>(&solution)) return quality_tree(payload, *s);
        } else if constexpr (std::is_same_v<P, LinearSystemPayload>) {
          if (const auto* s = std::get_if<VectorSolution>(&solution)) {
            return quality_linsys(payload, *s);
          }
        } else if constexpr (std::is_same_v<P, LpPayload>) {
          if (const auto* s = std::get_if<VectorSolution>(&solution)) return quality_lp(payload, *s);
        } else if constexpr (std::is_same_v<P, NonconvexPayload>) {
          if (const auto* s = std::get_if<VectorSolution>(&solution)) {
            return quality_nonconvex(payload, *s);
          }
        } else if constexpr (std::is_same_v<P, KnapsackPayload>) {
          if (const auto* s = std::get_if<KnapsackSolution>(&solution)) {
            return quality_knapsack(payload, *s);
          }
        } else if constexpr (std::is_same_v<P, SatPayload>) {
          if (const auto* s = std::get_if<SatSolution>(&solution)) return quality_sat(payload, *s);
        } else if constexpr (std::is_same_v<P, IntegrationPayload>) {
          if (const auto* s = std::get_if<ValueSolution>(&solution)) {
            return quality_integration(payload, *s);
          }
        }
        return 0.0;  // solution type does not fit the problem
      },
      instance.payload);
}

Solution run_solver(const AlgorithmEntry& entry, const ProblemInstance& instance, Rng& rng,
                    double time_budget_s) {
  if (entry.problem != instance.problem) {
    throw std::invalid_argument("algorithm " + entry.algorithm + " targets " + entry.problem +
                                ", not " + instance.problem);
  }
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(time_budget_s));
  const std::string& a = entry.algorithm;
  if (a == "merge_sort") return solvers::merge_sort(std::get<SortPayload>(instance.payload));
  if (a == "quicksort_random") {
    return solvers::quicksort_random(std::get<SortPayload>(instance.payload), rng);
  }
  if (a == "select_median_of_medians") {
    return solvers::select_median_of_medians(std::get<SelectPayload>(instance.payload));
  }
  if (a == "quickselect_random") {
    return solvers::quickselect_random(std::get<SelectPayload>(instance.payload), rng);
  }
  if (a == "dijkstra") return solvers::dijkstra(std::get<GraphPayload>(instance.payload));
  if (a == "greedy_walk_random") {
    return solvers::greedy_walk_random(std::get<GraphPayload>(instance.payload), rng);
  }
  if (a == "kruskal") return solvers::kruskal(std::get<GraphPayload>(instance.payload));
  if (a == "random_edge_greedy") {
    return solvers::random_edge_greedy(std::get<GraphPayload>(instance.payload), rng);
  }
  if (a == "gaussian_elimination") {
    return solvers::gaussian_elimination(std::get<LinearSystemPayload>(instance.payload));
  }
  if (a == "kaczmarz_random") {
    return solvers::kaczmarz_random(std::get<LinearSystemPayload>(instance.payload), rng);
  }
  if (a == "simplex_dense") return solvers::simplex_dense(std::get<LpPayload>(instance.payload));
  if (a == "random_interior_sampling") {
    return solvers::random_interior_sampling(std::get<LpPayload>(instance.payload), rng);
  }
  if (a == "grid_coordinate_descent") {
    return solvers::grid_coordinate_descent(std::get<NonconvexPayload>(instance.payload));
  }
  if (a == "simulated_annealing") {
    return solvers::simulated_annealing(std::get<NonconvexPayload>(instance.payload), rng);
  }
  if (a == "knapsack_dp") return solvers::knapsack_dp(std::get<KnapsackPayload>(instance.payload));
  if (a == "greedy_random_knapsack") {
    return solvers::greedy_random_knapsack(std::get<KnapsackPayload>(instance.payload), rng);
  }
  if (a == "dpll") return solvers::dpll(std::get<SatPayload>(instance.payload), deadline);
  if (a == "walksat") {
    return solvers::walksat(std::get<SatPayload>(instance.payload), rng, deadline);
  }
  if (a == "simpson_composite") {
    return solvers::simpson_composite(std::get<IntegrationPayload>(instance.payload));
  }
  if (a == "monte_carlo_integration") {
    return solvers::monte_carlo_integration(std::get<IntegrationPayload>(instance.payload), rng);
  }
  throw std::invalid_argument("unknown algorithm id: " + a);
}

namespace {

std::string describe(const Solution& solution) {
  return std::visit(
      [](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<S, SortSolution>) {
          os << "sorted " << s.values.size() << " values";
        } else if constexpr (std::is_same_v<S, SelectSolution>) {
          os << "selected " << s.value;
        } else if constexpr (std::is_same_v<S, PathSolution>) {
          if (s.found) {
            os << "path with " << s.nodes.size() << " nodes";
          } else {
            os << "no path found";
          }
        } else if constexpr (std::is_same_v<S, TreeSolution>) {
          os << "tree with " << s.edge_indices.size() << " edges";
        } else if constexpr (std::is_same_v<S, VectorSolution>) {
          os << "vector of dimension " << s.x.size();
        } else if constexpr (std::is_same_v<S, KnapsackSolution>) {
          std::size_t taken = 0;
          for (const auto t : s.take) taken += t;
          os << "took " << taken << " items";
        } else if constexpr (std::is_same_v<S, SatSolution>) {
          os << "assignment over " << s.assignment.size() << " vars";
        } else if constexpr (std::is_same_v<S, ValueSolution>) {
          os << "estimate " << s.value;
        }
        return os.str();
      },
      solution);
}

}  // namespace

SolveOutcome solve(const AlgorithmEntry& entry, const ProblemInstance& instance, Rng& rng,
                   double time_budget_s) {
  const auto start = std::chrono::steady_clock::now();
  const Solution solution = run_solver(entry, instance, rng, time_budget_s);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  SolveOutcome out;
  if (elapsed > time_budget_s) {
    out.runtime_s = time_budget_s;
    out.quality = 0.0;
    out.summary = "time budget exceeded";
    return out;
  }
  out.runtime_s = elapsed;
  out.quality = solution_quality(instance, solution);
  out.summary = describe(solution);
  return out;
}

std::string payload_to_json(const Payload& payload) {
  nlohmann::json j;
  std::visit(
      [&j](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SortPayload>) {
          j = {{"type", "sort"}, {"values", p.values}};
        } else if constexpr (std::is_same_v<P, SelectPayload>) {
          j = {{"type", "select"}, {"values", p.values}, {"k", p.k}};
        } else if constexpr (std::is_same_v<P, GraphPayload>) {
          nlohmann::json edges = nlohmann::json::array();
          for (const auto& e : p.edges) edges.push_back({e.u, e.v, e.w});
          j = {{"type", "graph"}, {"n", p.n}, {"edges", std::move(edges)},
               {"source", p.source}, {"target", p.target}};
        } else if constexpr (std::is_same_v<P, LinearSystemPayload>) {
          j = {{"type", "linear_system"}, {"n", p.n}, {"a", p.a}, {"b", p.b}};
        } else if constexpr (std::is_same_v<P, LpPayload>) {
          j = {{"type", "lp"}, {"nvars", p.nvars}, {"ncons", p.ncons},
               {"c", p.c}, {"a", p.a}, {"b", p.b}};
        } else if constexpr (std::is_same_v<P, NonconvexPayload>) {
          j = {{"type", "nonconvex"}, {"dim", p.dim}, {"shift", p.shift}, {"box", p.box}};
        } else if constexpr (std::is_same_v<P, KnapsackPayload>) {
          j = {{"type", "knapsack"}, {"weights", p.weights}, {"values", p.values},
               {"capacity", p.capacity}};
        } else if constexpr (std::is_same_v<P, SatPayload>) {
          nlohmann::json clauses = nlohmann::json::array();
          for (const auto& c : p.clauses) clauses.push_back({c[0], c[1], c[2]});
          j = {{"type", "sat"}, {"nvars", p.nvars}, {"clauses", std::move(clauses)}};
        } else if constexpr (std::is_same_v<P, IntegrationPayload>) {
          j = {{"type", "integration"}, {"lo", p.lo}, {"hi", p.hi}, {"freq", p.freq},
               {"decay", p.decay}, {"panels", p.panels}, {"mc_samples", p.mc_samples}};
        }
      },
      payload);
  return j.dump();
}

}  // namespace algoselect
