#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ctxspell/vocab_index.hpp"

namespace ctxspell {

/// A window of an ASR hypothesis processed as one unit.
struct Fragment {
  Phrase text;
  std::string utterance_id;
  int word_start = 0;  ///< first word of the fragment within its utterance
  int word_end = 0;    ///< one past the last word

  static Fragment of(Phrase text) {
    const int words = static_cast<int>(text.word_count());
    return Fragment{std::move(text), {}, 0, words};
  }
};

struct CandidateHit {
  PhraseId phrase_id = 0;
  Phrase phrase;
  /// Distinct fragment characters covered by matched n-grams (0 for the
  /// edit-distance baseline).
  int hit_count = 0;
  /// Fraction of the phrase's characters covered by matched n-grams; for the
  /// edit-distance baseline, 1 - normalized distance clamped to [0, 1].
  double coverage = 0.0;
  int window_begin = 0;  ///< fragment character span of the supporting region
  int window_end = 0;
};

struct CandidateSet {
  Fragment fragment;
  std::vector<CandidateHit> candidates;  ///< best first, at most top_k

  bool contains(PhraseId id) const;
};

struct RetrievalConfig {
  int top_k = 10;
  double coverage_threshold = 0.4;
  int min_hits = 2;
  int offset_bucket_width = 3;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// N-gram hit retrieval.
///
/// Every fragment substring whose length lies in the index key-length range
/// is looked up. A posting found at fragment offset f for phrase position p
/// votes for (phrase, floor((f - p) / offset_bucket_width)); within each such
/// group the distinct fragment characters covered give hit_count and the
/// distinct phrase characters covered give coverage. Groups below
/// coverage_threshold or min_hits are discarded, the best surviving group
/// represents its phrase, and phrases are ranked by (hit_count desc,
/// coverage desc, phrase_id asc).
CandidateSet retrieve(const Fragment& fragment, const PhraseNgramIndex& index, const RetrievalConfig& config = {});

/// Baseline: ranks phrases by the minimum edit distance to any fragment
/// substring whose length is within +/-50% of the phrase length, divided by
/// the phrase length (ascending; ties by phrase_id).
CandidateSet levenshtein_retrieve(const Fragment& fragment, const UserVocabulary& vocab, int top_k = 10);

/// Candidate-set TSV rows: `fragment_id \t rank \t phrase \t hit_count \t
/// coverage \t window` with rank starting at 1 and window "begin-end".
void write_candidates(std::ostream& out, std::string_view fragment_id, const CandidateSet& set);

}  // namespace ctxspell
