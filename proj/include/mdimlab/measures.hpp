#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdimlab/shift_space.hpp"

namespace mdimlab {

enum class MeasureKind { bernoulli, markov, mixture, empirical };

// Shift-invariant measure on a finite-alphabet shift space. Bernoulli and
// Markov specs are exact; mixtures are convex combinations; empirical specs
// carry a sampled orbit and are treated as non-invariant approximations.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::bernoulli;
  Alphabet alphabet;
  std::string label;

  std::vector<double> probs;                    // bernoulli
  std::vector<std::vector<double>> transition;  // markov
  std::vector<double> stationary;               // markov
  std::vector<double> weights;                  // mixture
  std::vector<MeasureSpec> components;          // mixture
  Word orbit;                                   // empirical
  bool approximate_ok = false;                  // gate for empirical measures

  static MeasureSpec bernoulli(Alphabet a, std::vector<double> probs);
  static MeasureSpec uniform_bernoulli(Alphabet a);
  static MeasureSpec markov(Alphabet a, std::vector<std::vector<double>> transition,
                            std::optional<std::vector<double>> stationary = std::nullopt);
  static MeasureSpec mixture(std::vector<double> weights, std::vector<MeasureSpec> components);
  static MeasureSpec empirical(Alphabet a, Word orbit);
  // Maximal-entropy Markov measure of an irreducible 0/1 adjacency matrix.
  static MeasureSpec parry(const std::vector<std::vector<int>>& adjacency, Alphabet a);

  bool is_ergodic() const;
  double symbol_prob(int s) const;  // one-coordinate marginal
  void validate() const;
};

// Exact law of the first n coordinates; words are encoded in base
// alphabet-size, coordinate 0 least significant.
struct BlockDistribution {
  int n = 0;
  int alphabet_size = 0;
  std::vector<uint64_t> words;
  std::vector<double> probs;

  std::vector<uint8_t> decode(uint64_t w) const;
  static uint64_t encode(const std::vector<uint8_t>& block, int alphabet_size);
  BlockDistribution marginalize_last() const;
  BlockDistribution marginalize_first() const;
};

inline constexpr long long kDefaultBlockBudget = 1 << 21;

BlockDistribution block_distribution(const MeasureSpec& mu, int n,
                                     long long budget = kDefaultBlockBudget);

// Probability of the cylinder fixing coordinates [0, n) to the given symbols.
double cylinder_probability(const MeasureSpec& mu, const std::vector<uint8_t>& block);

// Finite exact ergodic decomposition: closed communicating classes for Markov
// chains, the component list for mixtures, the measure itself when ergodic.
std::vector<std::pair<double, MeasureSpec>> ergodic_components(const MeasureSpec& mu);

// Deterministic orbit sampling; distinct streams give independent orbits.
Word sample_orbit(const MeasureSpec& mu, int length, uint64_t seed, uint64_t stream = 0);

}  // namespace mdimlab
