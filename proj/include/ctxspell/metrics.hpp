#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctxspell/retrieval.hpp"

namespace ctxspell {

using Words = std::vector<std::string>;

/// Word-level alignment of a reference against a hypothesis. Ties are
/// broken the same way as character alignment: backwards from the end,
/// preferring the diagonal step, then insertion, then deletion.
struct WordAlignment {
  enum class Op : std::uint8_t { kMatch, kSubstitute, kInsert, kDelete };

  std::vector<Op> ops;
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;

  int errors() const noexcept { return substitutions + deletions + insertions; }
};

WordAlignment align_words(std::span<const std::string> reference, std::span<const std::string> hypothesis);

/// (S + D + I) / |reference|. Throws InvalidInput on an empty reference.
double wer(std::span<const std::string> reference, std::span<const std::string> hypothesis);

/// Vocabulary phrases as word sequences, for occurrence search.
class PhraseMatcher {
 public:
  explicit PhraseMatcher(const UserVocabulary& vocab);

  struct Occurrence {
    int begin;
    int end;
    PhraseId id;
  };

  /// Non-overlapping occurrences, scanning left to right and taking the
  /// longest phrase at each position.
  std::vector<Occurrence> find_all(std::span<const std::string> words) const;
  /// True if any occurrence (overlapping ones included) intersects the
  /// word range [begin, end).
  bool any_intersecting(std::span<const std::string> words, int begin, int end) const;

 private:
  bool matches_at(std::span<const std::string> words, int pos, PhraseId id) const;

  std::vector<Words> phrases_;
  std::unordered_map<std::string, std::vector<PhraseId>> by_first_word_;  ///< longest first
  int longest_ = 0;
};

/// The hypothesis an oracle corrector would produce: every maximal run of
/// non-matching aligned words whose reference side is a vocabulary phrase,
/// contains one, or overlaps a vocabulary-phrase occurrence of the reference
/// is replaced by its reference side.
Words ideal_hypothesis(std::span<const std::string> reference, std::span<const std::string> baseline,
                       const PhraseMatcher& vocab);
double ideal_wer(std::span<const std::string> reference, std::span<const std::string> baseline,
                 const UserVocabulary& vocab);

struct EvalCounts {
  long long better = 0;
  long long missed = 0;
  long long fp = 0;
  long long unchanged_correct = 0;

  EvalCounts& operator+=(const EvalCounts& o) {
    better += o.better;
    missed += o.missed;
    fp += o.fp;
    unchanged_correct += o.unchanged_correct;
    return *this;
  }
  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

/// better / (better + missed); absent when the denominator is 0.
std::optional<double> recall(const EvalCounts& c);
/// better / (better + fp); absent when the denominator is 0.
std::optional<double> precision(const EvalCounts& c);

/// Counts for one utterance. For each vocabulary-phrase occurrence in the
/// reference: word-aligned in both hypotheses -> unchanged_correct; only in
/// the corrected one -> better; in neither -> missed; only in the baseline
/// (destroyed by correction) -> fp. Every phrase occurrence in the corrected
/// hypothesis that neither aligns to the reference nor was already present
/// in the baseline adds one more fp.
EvalCounts diff_keyword_counts(std::span<const std::string> reference, std::span<const std::string> baseline,
                               std::span<const std::string> corrected, const PhraseMatcher& vocab);

/// A reference vocabulary occurrence the baseline got wrong, with the
/// baseline words aligned to it.
struct Misrecognition {
  PhraseId phrase_id = 0;
  int ref_begin = 0;
  int ref_end = 0;
  int hyp_begin = 0;
  int hyp_end = 0;
};

std::vector<Misrecognition> misrecognized(std::span<const std::string> reference,
                                          std::span<const std::string> baseline, const PhraseMatcher& vocab);

/// A misrecognized reference phrase and the candidates retrieved for it.
struct RetrievalEvent {
  PhraseId phrase_id = 0;
  CandidateSet candidates;
};

/// Fraction of events whose phrase is among their candidates; absent on
/// empty input.
std::optional<double> topk_recall(std::span<const RetrievalEvent> events);

struct UtteranceTriple {
  std::string id;
  Words reference;
  Words baseline;
  Words corrected;
};

struct EvalReport {
  double baseline_wer = 0.0;
  double corrected_wer = 0.0;
  double ideal_wer = 0.0;
  std::optional<double> recall;
  std::optional<double> precision;
  std::optional<double> top10_recall;
  EvalCounts counts;
  long long reference_words = 0;
  long long utterances = 0;
};

/// Corpus-level report: WERs pool errors over all reference words.
EvalReport evaluate(std::span<const UtteranceTriple> utterances, const UserVocabulary& vocab,
                    std::optional<double> top10_recall = std::nullopt);

/// Header plus one row; percentages with two decimals, "NA" for absent
/// values.
void write_report(std::ostream& out, const EvalReport& report);

}  // namespace ctxspell
