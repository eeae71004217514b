#include "mdimlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mdimlab {

namespace {

constexpr double kProbTol = 1e-12;
constexpr double kStationaryTol = 1e-10;

void check_prob_vector(const std::vector<double>& p, const char* what) {
  double s = 0;
  for (double v : p) {
    if (v < -kProbTol) throw std::invalid_argument(std::string(what) + ": negative entry");
    s += v;
  }
  if (std::fabs(s - 1.0) > kProbTol)
    throw std::invalid_argument(std::string(what) + ": does not sum to 1");
}

// Solve pi P = pi, sum pi = 1 by dense Gaussian elimination on
// (P^T - I) pi = 0 with the normalization row appended.
std::vector<double> stationary_of(const std::vector<std::vector<double>>& P) {
  const int S = int(P.size());
  std::vector<std::vector<double>> A(S, std::vector<double>(S + 1, 0.0));
  for (int i = 0; i < S - 1; ++i) {
    for (int j = 0; j < S; ++j) A[i][j] = P[j][i] - (i == j ? 1.0 : 0.0);
  }
  for (int j = 0; j < S; ++j) A[S - 1][j] = 1.0;
  A[S - 1][S] = 1.0;
  for (int col = 0; col < S; ++col) {
    int piv = -1;
    double best = 1e-14;
    for (int r = col; r < S; ++r)
      if (std::fabs(A[r][col]) > best) {
        best = std::fabs(A[r][col]);
        piv = r;
      }
    if (piv < 0) throw std::invalid_argument("markov: stationary system is singular");
    std::swap(A[col], A[piv]);
    for (int r = 0; r < S; ++r) {
      if (r == col) continue;
      double f = A[r][col] / A[col][col];
      for (int c = col; c <= S; ++c) A[r][c] -= f * A[col][c];
    }
  }
  std::vector<double> pi(S);
  for (int i = 0; i < S; ++i) pi[i] = A[i][S] / A[i][i];
  for (double& v : pi)
    if (v < 0 && v > -1e-12) v = 0;
  return pi;
}

// Strongly connected components (iterative Tarjan) of the positive graph.
std::vector<int> scc_of(const std::vector<std::vector<double>>& P) {
  const int S = int(P.size());
  std::vector<int> comp(S, -1), low(S), num(S, -1), stk;
  std::vector<char> on(S, 0);
  int counter = 0, ncomp = 0;
  for (int start = 0; start < S; ++start) {
    if (num[start] >= 0) continue;
    std::vector<std::pair<int, int>> call{{start, 0}};
    while (!call.empty()) {
      auto& [v, state] = call.back();
      if (state == 0) {
        num[v] = low[v] = counter++;
        stk.push_back(v);
        on[v] = 1;
      }
      bool descended = false;
      for (int j = state; j < S; ++j) {
        call.back().second = j + 1;
        if (P[v][j] <= 0) continue;
        if (num[j] < 0) {
          call.push_back({j, 0});
          descended = true;
          break;
        }
        if (on[j]) low[v] = std::min(low[v], num[j]);
      }
      if (descended) continue;
      if (low[v] == num[v]) {
        while (true) {
          int w = stk.back();
          stk.pop_back();
          on[w] = 0;
          comp[w] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
      int child = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[child]);
    }
  }
  return comp;
}

}  // namespace

MeasureSpec MeasureSpec::bernoulli(Alphabet a, std::vector<double> probs) {
  a.validate();
  if (int(probs.size()) != a.size())
    throw std::invalid_argument("bernoulli: probs size must match alphabet");
  check_prob_vector(probs, "bernoulli probs");
  MeasureSpec mu;
  mu.kind = MeasureKind::bernoulli;
  mu.alphabet = std::move(a);
  mu.probs = std::move(probs);
  mu.label = "bernoulli";
  return mu;
}

MeasureSpec MeasureSpec::uniform_bernoulli(Alphabet a) {
  int m = a.size();
  return bernoulli(std::move(a), std::vector<double>(m, 1.0 / double(m)));
}

MeasureSpec MeasureSpec::markov(Alphabet a, std::vector<std::vector<double>> transition,
                                std::optional<std::vector<double>> stationary) {
  a.validate();
  const int S = a.size();
  if (int(transition.size()) != S)
    throw std::invalid_argument("markov: transition size must match alphabet");
  for (const auto& row : transition) {
    if (int(row.size()) != S) throw std::invalid_argument("markov: ragged transition");
    check_prob_vector(row, "markov row");
  }
  MeasureSpec mu;
  mu.kind = MeasureKind::markov;
  mu.alphabet = std::move(a);
  mu.transition = std::move(transition);
  mu.stationary = stationary ? *stationary : stationary_of(mu.transition);
  check_prob_vector(mu.stationary, "markov stationary");
  for (int j = 0; j < S; ++j) {
    double v = 0;
    for (int i = 0; i < S; ++i) v += mu.stationary[i] * mu.transition[i][j];
    if (std::fabs(v - mu.stationary[j]) > kStationaryTol)
      throw std::invalid_argument("markov: stationary vector is not invariant");
  }
  mu.label = "markov";
  return mu;
}

MeasureSpec MeasureSpec::mixture(std::vector<double> weights,
                                 std::vector<MeasureSpec> components) {
  if (weights.size() != components.size() || weights.empty())
    throw std::invalid_argument("mixture: weights/components mismatch");
  check_prob_vector(weights, "mixture weights");
  for (double w : weights)
    if (w <= 0) throw std::invalid_argument("mixture: weights must be positive");
  for (size_t i = 1; i < components.size(); ++i)
    if (components[i].alphabet.symbols != components[0].alphabet.symbols)
      throw std::invalid_argument("mixture: components must share an alphabet");
  MeasureSpec mu;
  mu.kind = MeasureKind::mixture;
  mu.alphabet = components[0].alphabet;
  mu.weights = std::move(weights);
  mu.components = std::move(components);
  mu.label = "mixture";
  return mu;
}

MeasureSpec MeasureSpec::empirical(Alphabet a, Word orbit) {
  a.validate();
  if (orbit.empty()) throw std::invalid_argument("empirical: empty orbit");
  for (uint8_t s : orbit)
    if (s >= a.size()) throw std::invalid_argument("empirical: symbol out of range");
  MeasureSpec mu;
  mu.kind = MeasureKind::empirical;
  mu.alphabet = std::move(a);
  mu.orbit = std::move(orbit);
  mu.label = "empirical";
  return mu;
}

MeasureSpec MeasureSpec::parry(const std::vector<std::vector<int>>& adjacency, Alphabet a) {
  const int S = int(adjacency.size());
  if (S != a.size()) throw std::invalid_argument("parry: adjacency/alphabet mismatch");
  // Power iteration for the Perron eigenpair of the 0/1 matrix.
  std::vector<double> v(S, 1.0), u(S, 1.0);
  double lambda = 0;
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> nv(S, 0.0), nu(S, 0.0);
    for (int i = 0; i < S; ++i)
      for (int j = 0; j < S; ++j)
        if (adjacency[i][j]) {
          nv[i] += v[j];
          nu[j] += u[i];
        }
    double nrm = *std::max_element(nv.begin(), nv.end());
    if (nrm <= 0) throw std::domain_error("parry: adjacency has no cycle");
    double nrmu = *std::max_element(nu.begin(), nu.end());
    for (double& x : nv) x /= nrm;
    for (double& x : nu) x /= nrmu;
    double delta = 0;
    for (int i = 0; i < S; ++i) delta = std::max(delta, std::fabs(nv[i] - v[i]));
    v = std::move(nv);
    u = std::move(nu);
    lambda = nrm;
    if (delta < 1e-15 && it > 50) break;
  }
  std::vector<std::vector<double>> P(S, std::vector<double>(S, 0.0));
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j)
      if (adjacency[i][j]) P[i][j] = v[j] / (lambda * v[i]);
  // Normalize rows to absorb the tiny power-iteration residue.
  for (int i = 0; i < S; ++i) {
    double s = std::accumulate(P[i].begin(), P[i].end(), 0.0);
    if (s <= 0) throw std::domain_error("parry: stranded state");
    for (double& x : P[i]) x /= s;
  }
  std::vector<double> pi(S);
  double z = 0;
  for (int i = 0; i < S; ++i) {
    pi[i] = u[i] * v[i];
    z += pi[i];
  }
  for (double& x : pi) x /= z;
  auto mu = markov(std::move(a), std::move(P), pi);
  mu.label = "parry";
  return mu;
}

void MeasureSpec::validate() const {
  switch (kind) {
    case MeasureKind::bernoulli:
      check_prob_vector(probs, "bernoulli probs");
      break;
    case MeasureKind::markov:
      for (const auto& row : transition) check_prob_vector(row, "markov row");
      check_prob_vector(stationary, "markov stationary");
      break;
    case MeasureKind::mixture:
      check_prob_vector(weights, "mixture weights");
      for (const auto& c : components) c.validate();
      break;
    case MeasureKind::empirical:
      if (orbit.empty()) throw std::invalid_argument("empirical: empty orbit");
      break;
  }
}

bool MeasureSpec::is_ergodic() const {
  switch (kind) {
    case MeasureKind::bernoulli:
      return true;
    case MeasureKind::markov: {
      // Ergodic for the shift iff the stationary support is one closed class.
      auto comps = ergodic_components(*this);
      return comps.size() == 1;
    }
    case MeasureKind::mixture: {
      auto comps = ergodic_components(*this);
      return comps.size() == 1;
    }
    case MeasureKind::empirical:
      return false;
  }
  return false;
}

double MeasureSpec::symbol_prob(int s) const {
  switch (kind) {
    case MeasureKind::bernoulli:
      return probs[s];
    case MeasureKind::markov:
      return stationary[s];
    case MeasureKind::mixture: {
      double v = 0;
      for (size_t i = 0; i < components.size(); ++i)
        v += weights[i] * components[i].symbol_prob(s);
      return v;
    }
    case MeasureKind::empirical: {
      long long c = 0;
      for (uint8_t x : orbit)
        if (x == s) ++c;
      return double(c) / double(orbit.size());
    }
  }
  return 0;
}

std::vector<uint8_t> BlockDistribution::decode(uint64_t w) const {
  std::vector<uint8_t> block(n);
  for (int k = 0; k < n; ++k) {
    block[k] = uint8_t(w % alphabet_size);
    w /= alphabet_size;
  }
  return block;
}

uint64_t BlockDistribution::encode(const std::vector<uint8_t>& block, int alphabet_size) {
  uint64_t w = 0;
  for (int k = int(block.size()) - 1; k >= 0; --k) w = w * alphabet_size + block[k];
  return w;
}

BlockDistribution BlockDistribution::marginalize_last() const {
  BlockDistribution out;
  out.n = n - 1;
  out.alphabet_size = alphabet_size;
  std::map<uint64_t, double> acc;
  uint64_t top = 1;
  for (int k = 0; k < n - 1; ++k) top *= alphabet_size;
  for (size_t i = 0; i < words.size(); ++i) acc[words[i] % top] += probs[i];
  for (auto& [w, p] : acc) {
    out.words.push_back(w);
    out.probs.push_back(p);
  }
  return out;
}

BlockDistribution BlockDistribution::marginalize_first() const {
  BlockDistribution out;
  out.n = n - 1;
  out.alphabet_size = alphabet_size;
  std::map<uint64_t, double> acc;
  for (size_t i = 0; i < words.size(); ++i) acc[words[i] / alphabet_size] += probs[i];
  for (auto& [w, p] : acc) {
    out.words.push_back(w);
    out.probs.push_back(p);
  }
  return out;
}

double cylinder_probability(const MeasureSpec& mu, const std::vector<uint8_t>& block) {
  switch (mu.kind) {
    case MeasureKind::bernoulli: {
      double p = 1;
      for (uint8_t s : block) p *= mu.probs[s];
      return p;
    }
    case MeasureKind::markov: {
      if (block.empty()) return 1;
      double p = mu.stationary[block[0]];
      for (size_t k = 1; k < block.size(); ++k) p *= mu.transition[block[k - 1]][block[k]];
      return p;
    }
    case MeasureKind::mixture: {
      double p = 0;
      for (size_t i = 0; i < mu.components.size(); ++i)
        p += mu.weights[i] * cylinder_probability(mu.components[i], block);
      return p;
    }
    case MeasureKind::empirical: {
      if (block.size() > mu.orbit.size()) return 0;
      long long hits = 0, windows = 0;
      for (size_t start = 0; start + block.size() <= mu.orbit.size(); ++start) {
        ++windows;
        bool ok = true;
        for (size_t k = 0; k < block.size() && ok; ++k)
          if (mu.orbit[start + k] != block[k]) ok = false;
        if (ok) ++hits;
      }
      return windows > 0 ? double(hits) / double(windows) : 0.0;
    }
  }
  return 0;
}

BlockDistribution block_distribution(const MeasureSpec& mu, int n, long long budget) {
  if (n < 1) throw std::invalid_argument("block_distribution: n must be >= 1");
  mu.validate();
  const int m = mu.alphabet.size();
  BlockDistribution out;
  out.n = n;
  out.alphabet_size = m;

  switch (mu.kind) {
    case MeasureKind::bernoulli: {
      double total = 1;
      for (int k = 0; k < n; ++k) {
        total *= m;
        if (total > double(budget))
          throw resource_error("block_distribution: bernoulli support " +
                               std::to_string(std::pow(double(m), n)) + " over budget");
      }
      long long count = 1;
      for (int k = 0; k < n; ++k) count *= m;
      out.words.reserve(count);
      out.probs.reserve(count);
      std::vector<uint8_t> block(n, 0);
      for (long long w = 0; w < count; ++w) {
        uint64_t x = uint64_t(w);
        double p = 1;
        for (int k = 0; k < n; ++k) {
          block[k] = uint8_t(x % m);
          p *= mu.probs[block[k]];
          x /= m;
        }
        if (p > 0) {
          out.words.push_back(uint64_t(w));
          out.probs.push_back(p);
        }
      }
      return out;
    }
    case MeasureKind::markov: {
      // Grow positive-probability paths coordinate by coordinate.
      std::vector<std::pair<uint64_t, double>> cur;
      for (int s = 0; s < m; ++s)
        if (mu.stationary[s] > 0) cur.push_back({uint64_t(s), mu.stationary[s]});
      uint64_t place = m;
      for (int k = 1; k < n; ++k) {
        std::vector<std::pair<uint64_t, double>> next;
        for (auto& [w, p] : cur) {
          int last = int((w / (place / m)) % m);
          for (int s = 0; s < m; ++s) {
            double q = mu.transition[last][s];
            if (q > 0) next.push_back({w + place * uint64_t(s), p * q});
          }
          if ((long long)next.size() > budget)
            throw resource_error("block_distribution: markov support over budget");
        }
        cur = std::move(next);
        place *= m;
      }
      std::sort(cur.begin(), cur.end());
      for (auto& [w, p] : cur) {
        out.words.push_back(w);
        out.probs.push_back(p);
      }
      return out;
    }
    case MeasureKind::mixture: {
      std::map<uint64_t, double> acc;
      for (size_t i = 0; i < mu.components.size(); ++i) {
        BlockDistribution part = block_distribution(mu.components[i], n, budget);
        for (size_t k = 0; k < part.words.size(); ++k)
          acc[part.words[k]] += mu.weights[i] * part.probs[k];
        if ((long long)acc.size() > budget)
          throw resource_error("block_distribution: mixture support over budget");
      }
      for (auto& [w, p] : acc) {
        out.words.push_back(w);
        out.probs.push_back(p);
      }
      return out;
    }
    case MeasureKind::empirical: {
      if (!mu.approximate_ok)
        throw std::invalid_argument(
            "block_distribution: empirical measure is not invariant; set approximate_ok");
      std::map<uint64_t, double> acc;
      if (int(mu.orbit.size()) < n)
        throw std::invalid_argument("block_distribution: orbit shorter than n");
      long long windows = (long long)mu.orbit.size() - n + 1;
      for (long long start = 0; start < windows; ++start) {
        std::vector<uint8_t> b(mu.orbit.begin() + start, mu.orbit.begin() + start + n);
        acc[BlockDistribution::encode(b, m)] += 1.0 / double(windows);
      }
      for (auto& [w, p] : acc) {
        out.words.push_back(w);
        out.probs.push_back(p);
      }
      return out;
    }
  }
  throw std::logic_error("block_distribution: unknown kind");
}

std::vector<std::pair<double, MeasureSpec>> ergodic_components(const MeasureSpec& mu) {
  switch (mu.kind) {
    case MeasureKind::bernoulli:
      return {{1.0, mu}};
    case MeasureKind::mixture: {
      std::vector<std::pair<double, MeasureSpec>> out;
      for (size_t i = 0; i < mu.components.size(); ++i) {
        auto inner = ergodic_components(mu.components[i]);
        for (auto& [w, c] : inner) out.push_back({mu.weights[i] * w, c});
      }
      return out;
    }
    case MeasureKind::markov: {
      const int S = mu.alphabet.size();
      auto comp = scc_of(mu.transition);
      int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
      // A class is closed iff no positive transition leaves it.
      std::vector<char> closed(ncomp, 1);
      for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
          if (mu.transition[i][j] > 0 && comp[j] != comp[i]) closed[comp[i]] = 0;
      std::vector<std::pair<double, MeasureSpec>> out;
      for (int c = 0; c < ncomp; ++c) {
        if (!closed[c]) continue;
        std::vector<int> states;
        double weight = 0;
        for (int i = 0; i < S; ++i)
          if (comp[i] == c) {
            states.push_back(i);
            weight += mu.stationary[i];
          }
        if (weight <= 1e-14) continue;  // stationary mass lives on closed classes
        Alphabet sub;
        for (int s : states) sub.symbols.push_back(mu.alphabet.symbols[s]);
        const int k = int(states.size());
        std::vector<std::vector<double>> P(k, std::vector<double>(k, 0.0));
        std::vector<double> pi(k, 0.0);
        for (int a = 0; a < k; ++a) {
          pi[a] = mu.stationary[states[a]] / weight;
          for (int b = 0; b < k; ++b) P[a][b] = mu.transition[states[a]][states[b]];
          double rs = std::accumulate(P[a].begin(), P[a].end(), 0.0);
          if (std::fabs(rs - 1.0) > 1e-9)
            throw std::logic_error("ergodic_components: class is not closed");
          for (double& x : P[a]) x /= rs;
        }
        auto comp_mu = MeasureSpec::markov(sub, P, pi);
        comp_mu.label = mu.label + "/class" + std::to_string(int(out.size()));
        out.push_back({weight, comp_mu});
      }
      double total = 0;
      for (auto& [w, c] : out) total += w;
      if (std::fabs(total - 1.0) > 1e-9)
        throw std::logic_error("ergodic_components: weights do not sum to 1");
      return out;
    }
    case MeasureKind::empirical:
      throw std::invalid_argument("ergodic_components: unsupported for empirical measures");
  }
  throw std::logic_error("ergodic_components: unknown kind");
}

namespace {

int sample_from(const std::vector<double>& probs, double u) {
  double acc = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return int(i);
  }
  return int(probs.size()) - 1;
}

}  // namespace

Word sample_orbit(const MeasureSpec& mu, int length, uint64_t seed, uint64_t stream) {
  if (length < 1) throw std::invalid_argument("sample_orbit: length must be >= 1");
  CounterRng rng{seed, stream};
  Word w(length);
  switch (mu.kind) {
    case MeasureKind::bernoulli: {
      for (int k = 0; k < length; ++k) w[k] = uint8_t(sample_from(mu.probs, rng.uniform(k)));
      return w;
    }
    case MeasureKind::markov: {
      w[0] = uint8_t(sample_from(mu.stationary, rng.uniform(0)));
      for (int k = 1; k < length; ++k)
        w[k] = uint8_t(sample_from(mu.transition[w[k - 1]], rng.uniform(k)));
      return w;
    }
    case MeasureKind::mixture: {
      // One component per orbit, chosen from the mixture weights.
      int c = sample_from(mu.weights, CounterRng{seed, stream + 0x9e37ULL}.uniform(0));
      return sample_orbit(mu.components[c], length, seed, stream + 1000003ULL * (c + 1));
    }
    case MeasureKind::empirical: {
      if (int(mu.orbit.size()) < length)
        throw std::invalid_argument("sample_orbit: empirical orbit too short");
      std::copy(mu.orbit.begin(), mu.orbit.begin() + length, w.begin());
      return w;
    }
  }
  throw std::logic_error("sample_orbit: unknown kind");
}

}  // namespace mdimlab
