#include "ctxspell/phrase.hpp"

#include "ctxspell/errors.hpp"

namespace ctxspell {

bool is_normalized(std::string_view text) noexcept {
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (symbol_index(c) < 0) return false;
    if (c == kWordSeparator) {
      if (i == 0 || i + 1 == text.size() || text[i - 1] == kWordSeparator) return false;
    }
  }
  return true;
}

Phrase Phrase::normalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_separator = false;
  for (const char ch : raw) {
    const auto byte = static_cast<unsigned char>(ch);
    if (byte >= 0x80) {
      throw InvalidInput("non-Latin character in '" + std::string(raw) + "'");
    }
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\v' || ch == '\f' ||
        ch == kWordSeparator) {
      pending_separator = !out.empty();
      continue;
    }
    if (byte < 0x20 || byte == 0x7f) {
      throw InvalidInput("control character in phrase");
    }
    char c = ch;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (symbol_index(c) < 0) continue;  // punctuation
    if (pending_separator) out.push_back(kWordSeparator);
    pending_separator = false;
    out.push_back(c);
  }
  return Phrase(std::move(out));
}

Phrase Phrase::from_normalized(std::string_view text) {
  if (!is_normalized(text)) {
    throw InvalidInput("not a normalized phrase: '" + std::string(text) + "'");
  }
  return Phrase(std::string(text));
}

Phrase Phrase::from_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(kWordSeparator);
    out += w;
  }
  return from_normalized(out);
}

std::vector<std::string> Phrase::words() const {
  std::vector<std::string> out;
  if (text_.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text_.find(kWordSeparator, start);
    if (pos == std::string::npos) {
      out.push_back(text_.substr(start));
      return out;
    }
    out.push_back(text_.substr(start, pos - start));
    start = pos + 1;
  }
}

std::size_t Phrase::word_count() const {
  if (text_.empty()) return 0;
  std::size_t n = 1;
  for (const char c : text_) n += (c == kWordSeparator);
  return n;
}

std::string Phrase::display() const {
  std::string out = text_;
  for (auto& c : out) {
    if (c == kWordSeparator) c = ' ';
  }
  return out;
}

std::vector<std::string> normalize_words(std::string_view raw) {
  return Phrase::normalize(raw).words();
}

}  // namespace ctxspell
