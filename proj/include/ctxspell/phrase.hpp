#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ctxspell {

/// Symbols a normalized phrase may contain: a-z, 0-9, apostrophe, and
/// underscore (the word separator).
inline constexpr int kAlphabetSize = 38;

/// Dense index of `c` in the alphabet, or -1.
constexpr int symbol_index(char c) noexcept {
  if (c >= 'a' && c <= 'z') return c - 'a';
  if (c >= '0' && c <= '9') return 26 + (c - '0');
  if (c == '\'') return 36;
  if (c == '_') return 37;
  return -1;
}

constexpr char symbol_at(int index) noexcept {
  if (index < 26) return static_cast<char>('a' + index);
  if (index < 36) return static_cast<char>('0' + index - 26);
  return index == 36 ? '\'' : '_';
}

inline constexpr char kWordSeparator = '_';

/// Lowercase text over the phrase alphabet with underscores between words.
/// Never has leading, trailing, or doubled underscores. May be empty.
class Phrase {
 public:
  Phrase() = default;

  /// Lowercases, maps whitespace and underscores to word separators, strips
  /// ASCII punctuation other than the apostrophe. Throws InvalidInput on any
  /// non-ASCII byte or control character.
  static Phrase normalize(std::string_view raw);

  /// Accepts text that is already normalized; throws InvalidInput otherwise.
  static Phrase from_normalized(std::string_view text);

  /// Joins words (each already normalized, non-empty, no separators).
  static Phrase from_words(const std::vector<std::string>& words);

  const std::string& str() const noexcept { return text_; }
  std::size_t size() const noexcept { return text_.size(); }
  bool empty() const noexcept { return text_.empty(); }
  char operator[](std::size_t i) const noexcept { return text_[i]; }

  std::vector<std::string> words() const;
  std::size_t word_count() const;
  /// Text with separators rendered as spaces.
  std::string display() const;

  friend auto operator<=>(const Phrase&, const Phrase&) = default;

 private:
  explicit Phrase(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

/// True if `text` satisfies the normalized-phrase invariants.
bool is_normalized(std::string_view text) noexcept;

/// Splits a normalized or raw utterance into normalized words.
std::vector<std::string> normalize_words(std::string_view raw);

}  // namespace ctxspell

template <>
struct std::hash<ctxspell::Phrase> {
  std::size_t operator()(const ctxspell::Phrase& p) const noexcept {
    return std::hash<std::string>{}(p.str());
  }
};
