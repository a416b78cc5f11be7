#include "ctxspell/frequent_words.hpp"

#include <string_view>

namespace ctxspell {

namespace detail {
extern const char* const kFrequentWordsText;
}

const std::vector<std::string>& frequent_word_list() {
  static const std::vector<std::string> words = [] {
    std::vector<std::string> out;
    std::string_view text(detail::kFrequentWordsText);
    while (!text.empty()) {
      const auto nl = text.find('\n');
      const auto word = text.substr(0, nl);
      if (!word.empty()) out.emplace_back(word);
      if (nl == std::string_view::npos) break;
      text.remove_prefix(nl + 1);
    }
    return out;
  }();
  return words;
}

const std::unordered_set<std::string>& frequent_words() {
  static const std::unordered_set<std::string> words(frequent_word_list().begin(), frequent_word_list().end());
  return words;
}

}  // namespace ctxspell
