#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxspell/ngram_mappings.hpp"
#include "ctxspell/phrase.hpp"

namespace ctxspell {

using PhraseId = std::uint32_t;

/// A user's phrase list. Ids are list positions.
class UserVocabulary {
 public:
  UserVocabulary() = default;
  /// Throws InvalidInput on an empty or duplicate phrase.
  explicit UserVocabulary(std::vector<Phrase> phrases);

  /// One phrase per line; lines are normalized, blank lines and repeats of
  /// an earlier phrase are skipped.
  static UserVocabulary read(std::istream& in);
  static UserVocabulary load(const std::filesystem::path& path);

  std::size_t size() const noexcept { return phrases_.size(); }
  bool empty() const noexcept { return phrases_.empty(); }
  const Phrase& operator[](PhraseId id) const { return phrases_[id]; }
  const std::vector<Phrase>& phrases() const noexcept { return phrases_; }
  std::optional<PhraseId> find(const Phrase& phrase) const;
  bool contains(const Phrase& phrase) const { return find(phrase).has_value(); }

  friend bool operator==(const UserVocabulary& a, const UserVocabulary& b) {
    return a.phrases_ == b.phrases_;
  }

 private:
  std::vector<Phrase> phrases_;
  std::unordered_map<std::string, PhraseId> ids_;
};

/// Where a key n-gram points: the phrase, the offset and length of the
/// original n-gram in it, and whether the key is a misspelled variant.
struct Posting {
  PhraseId phrase_id = 0;
  std::uint16_t phrase_pos = 0;
  std::uint8_t src_len = 0;
  bool misspelled = false;

  friend auto operator<=>(const Posting&, const Posting&) = default;
};

struct IndexConfig {
  int min_len = 2;
  int max_len = 5;
  int variants_per_ngram = 4;
  double min_prob = kDefaultMinProb;
  /// Longest posting list tolerated before misspelled postings are dropped,
  /// least probable first. Original postings are never dropped.
  int posting_cap = 200;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
  friend bool operator==(const IndexConfig&, const IndexConfig&) = default;
};

/// Inverted index from letter n-grams (and their learned misspellings) to
/// the vocabulary phrases containing them. Immutable once built.
class PhraseNgramIndex {
 public:
  std::span<const Posting> lookup(std::string_view key) const;

  const UserVocabulary& vocabulary() const noexcept { return vocab_; }
  const IndexConfig& config() const noexcept { return config_; }
  /// Length range of keys actually present (variant keys may be longer or
  /// shorter than the source n-grams they came from).
  int min_key_len() const noexcept { return min_key_len_; }
  int max_key_len() const noexcept { return max_key_len_; }
  std::size_t key_count() const noexcept { return entries_.size(); }
  std::size_t posting_count() const noexcept;

  /// Keys in sorted order.
  std::vector<std::string> keys() const;

  /// Text form: `#`-prefixed header lines (format tag, config echo, the
  /// vocabulary), then rows `key \t phrase_id \t phrase_pos \t src_len \t
  /// misspelled` sorted by key then posting.
  void write(std::ostream& out) const;
  static PhraseNgramIndex read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static PhraseNgramIndex load(const std::filesystem::path& path);

  friend bool operator==(const PhraseNgramIndex& a, const PhraseNgramIndex& b) {
    return a.config_ == b.config_ && a.vocab_ == b.vocab_ && a.entries_ == b.entries_;
  }

 private:
  friend PhraseNgramIndex build_index(const UserVocabulary&, std::span<const NgramMapping>,
                                      const IndexConfig&);
  void refresh_key_range();

  UserVocabulary vocab_;
  IndexConfig config_;
  std::unordered_map<std::string, std::vector<Posting>> entries_;
  int min_key_len_ = 0;
  int max_key_len_ = 0;
};

/// For every phrase and every n-gram of length in [min_len, max_len]
/// (n-grams may span word separators), posts the original key and up to
/// `variants_per_ngram` distinct misspelled keys: flattened targets of
/// non-identity mappings with that source and cond_prob > min_prob, by
/// descending probability. Variant keys shorter than min_len are skipped.
/// Throws InvalidInput on an empty vocabulary.
PhraseNgramIndex build_index(const UserVocabulary& vocab, std::span<const NgramMapping> mappings,
                             const IndexConfig& config = {});

}  // namespace ctxspell
