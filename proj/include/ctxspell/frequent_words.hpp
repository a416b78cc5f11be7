#pragma once

#include <string>
#include <unordered_set>
#include <vector>

namespace ctxspell {

/// The bundled list of the 5000 most frequent English words, most frequent
/// first.
const std::vector<std::string>& frequent_word_list();
const std::unordered_set<std::string>& frequent_words();

}  // namespace ctxspell
