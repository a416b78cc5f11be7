#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctxspell/corruptor.hpp"
#include "ctxspell/matcher.hpp"
#include "ctxspell/vocab_index.hpp"

namespace ctxspell {

/// Placeholder written for an unused candidate slot. Never a correct label.
inline constexpr std::string_view kDummyCandidate = "<DUMMY>";

/// One tagging example: a (possibly corrupted) hypothesis, ten candidate
/// slots, and the slot label of every hypothesis character.
struct TrainingExample {
  Phrase hyp;
  std::array<Phrase, kCandidateSlots> candidates;  ///< empty phrase = dummy slot
  std::vector<int> labels;
  int correct_slot = 0;  ///< 1..10, or 0 for a clean example
  std::optional<std::pair<int, int>> span;

  /// Throws InvalidInput when the label/span/slot invariants do not hold.
  void validate() const;

  /// `hyp chars \t c1;...;c10 \t labels \t correct_slot`, hyp characters
  /// space-separated.
  std::string to_line() const;
  /// Inverse of `to_line`; the span is recovered from the labels.
  static TrainingExample parse(std::string_view line, std::size_t line_no = 0);

  friend bool operator==(const TrainingExample&, const TrainingExample&) = default;
};

/// A sentence with one annotated vocabulary-phrase occurrence. Offsets are
/// byte offsets into `sentence`.
struct ContextSentence {
  std::string sentence;
  int char_start = 0;
  int char_end = 0;
  Phrase phrase;
};

/// `sentence \t char_start \t char_end \t phrase` per line. The annotated
/// span must normalize to the phrase.
std::vector<ContextSentence> read_contexts(std::istream& in);
std::vector<ContextSentence> load_contexts(const std::filesystem::path& path);

/// How the nine negatives of a corrupted example are drawn.
struct NegativeMix {
  int random = 4;
  int similar = 3;       ///< high n-gram overlap with the correct phrase
  int intersecting = 2;  ///< shares a whole word with the correct phrase

  void validate() const;
};

struct DatasetConfig {
  NegativeMix mix;
  double clean_fraction = 0.5;
};

class ExampleBuilder {
 public:
  /// `index` must be built over `pool`; both must outlive the builder.
  ExampleBuilder(const UserVocabulary& pool, const PhraseNgramIndex& index, const CorruptionModel& model,
                 NegativeMix mix = {});

  /// Corrupted example: the phrase occurrence is replaced by a corruption of
  /// it and the correct phrase lands in a uniformly random slot among nine
  /// negatives. Clean example: the sentence is kept as is, all labels are 0,
  /// and the ten slots hold negatives only. Similar and intersecting
  /// shortfalls are made up from the random pool; a pool too small for the
  /// remainder raises InvalidInput naming the random pool.
  TrainingExample build(const ContextSentence& context, Rng& rng, bool clean) const;

 private:
  std::vector<PhraseId> similar_to(const Phrase& phrase) const;
  std::vector<PhraseId> intersecting(const Phrase& phrase) const;

  const UserVocabulary& pool_;
  const PhraseNgramIndex& index_;
  const CorruptionModel& model_;
  NegativeMix mix_;
  std::unordered_map<std::string, std::vector<PhraseId>> by_word_;
};

/// Builds `n_examples` examples, exactly round(n * clean_fraction) of them
/// clean, each from a context chosen uniformly with a per-example derived
/// seed. Output order is independent of `jobs`.
std::vector<TrainingExample> build_dataset(std::span<const ContextSentence> contexts, const UserVocabulary& pool,
                                           const CorruptionModel& model, const PhraseNgramIndex& index,
                                           long long n_examples, const DatasetConfig& config, std::uint64_t seed,
                                           int jobs = 1);

void write_dataset(std::ostream& out, std::span<const TrainingExample> examples);
std::vector<TrainingExample> read_dataset(std::istream& in);

}  // namespace ctxspell
