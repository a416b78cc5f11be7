#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ctxspell/phrase.hpp"

namespace ctxspell {

/// A (correct, corrupted) phrase pair; one line of a parallel corpus TSV.
struct ParallelPair {
  Phrase correct;
  Phrase corrupted;

  friend bool operator==(const ParallelPair&, const ParallelPair&) = default;
};

/// Two-column TSV, `correct \t corrupted`, one pair per line. Both columns
/// are normalized on read; blank lines are skipped. Pairs whose correct side
/// normalizes to empty are a ParseError.
std::vector<ParallelPair> read_corpus(std::istream& in);
std::vector<ParallelPair> load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, std::span<const ParallelPair> corpus);

/// One transcript line, `id \t text`.
struct Utterance {
  std::string id;
  std::vector<std::string> words;  ///< normalized
};

/// Blank lines are skipped; a line without a tab, an empty id, or a repeated
/// id is a ParseError.
std::vector<Utterance> read_utterances(std::istream& in);
std::vector<Utterance> load_utterances(const std::filesystem::path& path);
void write_utterances(std::ostream& out, std::span<const Utterance> utterances);

}  // namespace ctxspell
