#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctxspell/corpus.hpp"
#include "ctxspell/edit_costs.hpp"
#include "ctxspell/phrase.hpp"

namespace ctxspell {

/// Edit operations in tie-break preference order: when two predecessors give
/// the same minimum cost, the earlier enumerator wins.
enum class EditOp : std::uint8_t { kSubstitute = 0, kInsert = 1, kDelete = 2 };

/// One source character and what the channel turned it into. An empty
/// target is a deletion; a multi-character target is a join (insertions
/// attached to this character).
struct AlignedUnit {
  char source = 0;
  std::string target;

  friend bool operator==(const AlignedUnit&, const AlignedUnit&) = default;
};

struct AlignedPair {
  Phrase source;
  Phrase target;
  std::vector<AlignedUnit> units;  ///< one per source character
  std::vector<EditOp> path;        ///< forward operation sequence
  double cost = 0.0;
};

/// Minimum-cost monotone alignment of `correct` onto `misspelled`.
///
/// Ties are broken from the end of the strings backwards, preferring
/// substitution, then insertion, then deletion at each step. Insertions are
/// attached to the preceding source character; insertions before the first
/// source character attach forward to it. Throws InvalidInput when `correct`
/// is empty.
AlignedPair align_pair(const Phrase& correct, const Phrase& misspelled, const EditCostTable& costs);

/// Renders a unit's target the way mapping files do: "<DEL>" for a
/// deletion, '+'-joined characters otherwise ("k+e").
std::string render_target(const std::string& target);

/// Counts substitution/deletion events per source symbol and insertion
/// events per inserted symbol over `alignments`, then sets every cost to the
/// negative log of its add-one-smoothed relative frequency:
///
///   sub/del of a:  -log((n + 1) / (N_a + 39))   39 = 38 substitutions + deletion
///   ins of c:      -log((n + 1) / (S + 38))     S = number of insertion slots
///
/// Symbols never seen as a source keep identity cost 0 and `default_cost()`
/// elsewhere, where default_cost = -log(1 / (N + 39)) for N total source
/// characters. If smoothing leaves a non-identity substitution cheaper than
/// identity, identity is lowered to that minimum.
EditCostTable costs_from_alignments(std::span<const AlignedPair> alignments);

/// Iterative re-estimation: round 0 aligns with unit costs; each round
/// re-aligns the whole corpus with the previous table and re-counts.
/// Throws InvalidInput on an empty corpus or rounds < 1.
EditCostTable estimate_costs(std::span<const ParallelPair> corpus, int rounds = 3);

std::vector<AlignedPair> align_corpus(std::span<const ParallelPair> corpus, const EditCostTable& costs);

}  // namespace ctxspell
