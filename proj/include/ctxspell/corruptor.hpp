#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctxspell/corpus.hpp"
#include "ctxspell/ngram_mappings.hpp"
#include "ctxspell/rng.hpp"

namespace ctxspell {

/// Samples misspellings from n-gram mappings.
///
/// For a source n-gram with retained mappings, every non-identity target
/// flattened to plain text keeps weight `intensity * cond_prob`; the
/// identity outcome takes the remaining mass, which includes whatever was
/// pruned at extraction time. Sources without mappings pass through.
class CorruptionModel {
 public:
  CorruptionModel(std::span<const NgramMapping> mappings, double intensity = 1.0, std::uint64_t seed = 0);

  /// Greedy left-to-right segmentation into the longest modeled source
  /// n-grams (single characters otherwise), one independent draw per
  /// segment. The result is re-normalized (separator runs collapse); if the
  /// channel erases the whole phrase the input is returned unchanged.
  Phrase corrupt(const Phrase& phrase, Rng& rng) const;

  /// Sampling distribution for `src` as (flattened target, probability).
  std::vector<std::pair<std::string, double>> distribution(std::string_view src) const;

  double intensity() const noexcept { return intensity_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int max_source_len() const noexcept { return max_source_len_; }

 private:
  struct Outcome {
    std::string target;
    double cumulative;
  };

  std::unordered_map<std::string, std::vector<Outcome>> outcomes_;
  double intensity_;
  std::uint64_t seed_;
  int max_source_len_ = 1;
};

/// Corrupts each phrase with its own derived seed (`derive_seed(model.seed(),
/// line)`), so output is reproducible and independent of processing order.
std::vector<ParallelPair> corrupt_corpus(std::span<const Phrase> phrases, const CorruptionModel& model,
                                         int jobs = 1);

}  // namespace ctxspell
