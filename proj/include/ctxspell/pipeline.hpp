#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxspell/edit_costs.hpp"
#include "ctxspell/matcher.hpp"
#include "ctxspell/metrics.hpp"
#include "ctxspell/retrieval.hpp"

namespace ctxspell {

/// Splits an utterance into fragments of at most `max_words` words.
/// Utterances up to `max_words` stay whole; longer ones are cut every
/// `max_words - overlap` words so neighbours share `overlap` words.
std::vector<Fragment> split_transcript(std::span<const std::string> words, std::string_view utterance_id = {},
                                       int min_words = 10, int max_words = 15, int overlap = 2);

struct PipelineConfig {
  RetrievalConfig retrieval;
  MatcherConfig matcher;
  int min_words = 10;
  int max_words = 15;
  int overlap = 2;
  /// Reject single-word replacements of frequent words unless the match is
  /// very cheap (normalized cost < tau / 2).
  bool frequent_word_guard = true;

  void validate() const;
};

/// One detected replacement in utterance word coordinates.
struct Replacement {
  int word_begin = 0;
  int word_end = 0;
  std::string original;  ///< original words joined by spaces
  Phrase replacement;
  int slot = 0;
  double normalized_cost = 0.0;
  std::string status;  ///< "applied", or the rejection reason
};

struct CorrectionTrace {
  std::string utterance_id;
  std::vector<Replacement> replacements;  ///< applied and rejected, by position
};

struct CorrectionResult {
  std::vector<std::string> words;
  CorrectionTrace trace;

  std::string text() const;
};

/// split -> retrieve -> tag -> merge -> filter -> apply.
///
/// Detections from overlapping fragments are de-duplicated (lowest cost
/// wins). Post-filters, in order: frequent-word guard; overlap resolution by
/// (cost, longer span, earlier start); no-op removal. No-op detections
/// still take part in overlap resolution, so a phrase already spelled
/// correctly blocks competing rewrites of the same words.
class Corrector {
 public:
  /// Throws ConfigError if the cost table does not cover every symbol of the
  /// indexed vocabulary. `costs` are used by the default tagger as given.
  Corrector(const PhraseNgramIndex& index, const EditCostTable& costs, PipelineConfig config = {},
            std::shared_ptr<const Tagger> tagger = nullptr);

  CorrectionResult correct(std::string_view utterance_id, std::span<const std::string> words) const;
  CorrectionResult correct(std::string_view utterance_id, std::string_view text) const;

  const PipelineConfig& config() const noexcept { return config_; }

 private:
  const PhraseNgramIndex& index_;
  PipelineConfig config_;
  std::shared_ptr<const Tagger> tagger_;
};

/// One top-k retrieval event per reference vocabulary occurrence that the
/// baseline misrecognized. The baseline is split as the corrector would
/// split it; the event's candidates come from the fragment that overlaps the
/// misrecognized words most (earliest on ties).
std::vector<RetrievalEvent> retrieval_events(std::span<const std::string> reference,
                                             std::span<const std::string> baseline, const PhraseMatcher& vocab,
                                             const PipelineConfig& config,
                                             const std::function<CandidateSet(const Fragment&)>& retriever);

/// Trace TSV rows: `utterance_id \t word_begin \t word_end \t original \t
/// replacement \t slot \t normalized_cost \t status`.
std::string format_trace(const CorrectionTrace& trace);

}  // namespace ctxspell
