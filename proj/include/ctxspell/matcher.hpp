#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxspell/edit_costs.hpp"
#include "ctxspell/retrieval.hpp"

namespace ctxspell {

inline constexpr int kCandidateSlots = 10;

struct WindowScore {
  int begin = 0;
  int end = 0;
  double cost = 0.0;
};

/// Aligns all of `candidate` against the cheapest substring of `fragment`
/// (free start and end in the fragment only). Ties prefer the earliest end.
WindowScore score_window(const Phrase& candidate, const Phrase& fragment, const EditCostTable& costs);

/// Global alignment cost of `candidate` onto `observed`.
double alignment_cost(const Phrase& candidate, std::string_view observed, const EditCostTable& costs);

struct AcceptedSpan {
  int slot = 0;  ///< 1-based candidate slot
  int begin = 0;
  int end = 0;
  double normalized_cost = 0.0;  ///< alignment cost / candidate length

  friend bool operator==(const AcceptedSpan&, const AcceptedSpan&) = default;
};

/// Per-character labels over a fragment: 0, or the slot whose candidate
/// replaces that character.
struct TaggedFragment {
  Fragment fragment;
  std::vector<int> labels;
  std::vector<AcceptedSpan> accepted;  ///< disjoint, ordered by begin
};

struct MatcherConfig {
  double tau = 0.6;          ///< accept when normalized cost < tau
  bool snap_to_words = true;

  void validate() const;
};

/// Moves span edges to the nearest word boundary (ties widen). Separators at
/// the span edges are trimmed first. May return an empty span.
std::pair<int, int> snap_to_words(std::string_view text, int begin, int end);

/// Picks a disjoint subset greedily by (cost asc, longer span, lower slot).
std::vector<AcceptedSpan> resolve_overlaps(std::vector<AcceptedSpan> spans);

/// Contract shared by every tagger: a fragment plus up to ten candidate
/// slots in, per-character slot labels out. Empty phrases are unused slots.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual TaggedFragment tag(const Fragment& fragment, std::span<const Phrase> slots) const = 0;
};

/// Reference tagger: scores each slot with `score_window`, snaps, re-scores
/// the snapped window, accepts below tau, and resolves overlaps.
class NoisyChannelMatcher final : public Tagger {
 public:
  NoisyChannelMatcher(EditCostTable costs, MatcherConfig config = {});

  TaggedFragment tag(const Fragment& fragment, std::span<const Phrase> slots) const override;

  const EditCostTable& costs() const noexcept { return costs_; }
  const MatcherConfig& config() const noexcept { return config_; }

 private:
  EditCostTable costs_;
  MatcherConfig config_;
};

/// Candidate phrases of `set` laid out in slots 1..n.
std::vector<Phrase> slots_of(const CandidateSet& set);

TaggedFragment tag(const Fragment& fragment, const CandidateSet& candidates, const EditCostTable& costs,
                   const MatcherConfig& config = {});

/// Trace row: `fragment_id \t labels \t spans`, labels space-separated and
/// spans as `slot:begin-end:cost` joined by ';' ("-" when none).
std::string format_tag_trace(std::string_view fragment_id, const TaggedFragment& tagged);

}  // namespace ctxspell
