#include "ctxspell/synth.hpp"

#include <array>
#include <cmath>
#include <string_view>
#include <unordered_set>

#include "ctxspell/alignment.hpp"
#include "ctxspell/corruptor.hpp"
#include "ctxspell/frequent_words.hpp"

namespace ctxspell::synth {

namespace {

struct Confusion {
  std::string_view src;
  std::string_view dst;
  double prob;
};

constexpr std::array kConfusions = {
    Confusion{"c", "k", 0.25},    Confusion{"c", "s", 0.10},   Confusion{"k", "c", 0.15},
    Confusion{"ck", "k", 0.30},   Confusion{"ph", "f", 0.40},  Confusion{"f", "ph", 0.10},
    Confusion{"ei", "ai", 0.30},  Confusion{"ai", "ei", 0.20}, Confusion{"ie", "ei", 0.15},
    Confusion{"tt", "t", 0.35},   Confusion{"ll", "l", 0.30},  Confusion{"ss", "s", 0.30},
    Confusion{"t", "tt", 0.05},   Confusion{"sch", "sh", 0.35}, Confusion{"sh", "sch", 0.10},
    Confusion{"x", "ks", 0.30},   Confusion{"ks", "x", 0.20},  Confusion{"z", "s", 0.25},
    Confusion{"s", "z", 0.08},    Confusion{"y", "i", 0.20},   Confusion{"i", "y", 0.08},
    Confusion{"ee", "ea", 0.25},  Confusion{"ea", "ee", 0.20}, Confusion{"ou", "u", 0.20},
    Confusion{"oo", "u", 0.25},   Confusion{"u", "oo", 0.08},  Confusion{"w", "v", 0.15},
    Confusion{"v", "w", 0.10},    Confusion{"th", "t", 0.20},  Confusion{"d", "t", 0.10},
    Confusion{"t", "d", 0.10},    Confusion{"b", "p", 0.08},   Confusion{"p", "b", 0.08},
    Confusion{"g", "k", 0.08},    Confusion{"e", "a", 0.08},   Confusion{"a", "e", 0.08},
    Confusion{"o", "u", 0.06},    Confusion{"qu", "kw", 0.30}, Confusion{"gh", "g", 0.30},
    Confusion{"dt", "t", 0.30},   Confusion{"er", "a", 0.10},  Confusion{"kn", "n", 0.30},
    Confusion{"wr", "r", 0.30},   Confusion{"mb", "m", 0.20},  Confusion{"au", "o", 0.25},
};

constexpr std::array<std::string_view, 42> kOnsets = {
    "b",  "c",  "d",  "f",  "g",   "h",  "j",  "k",  "l",  "m",  "n",  "p",  "r",  "s",
    "t",  "v",  "w",  "z",  "ch",  "sh", "sch", "ph", "th", "kn", "wr", "qu", "br", "cr",
    "dr", "fr", "gr", "pr", "tr",  "bl", "cl", "fl", "gl", "pl", "sl", "st", "sp", "sk"};
constexpr std::array<std::string_view, 14> kNuclei = {"a",  "e",  "i",  "o",  "u",  "ei", "ai",
                                                      "ie", "ee", "ea", "ou", "oo", "au", "y"};
constexpr std::array<std::string_view, 20> kCodas = {"",  "",   "",   "n",  "r",  "l",  "s",  "t",  "ck", "tt",
                                                     "ll", "ss", "x", "m",  "nd", "rt", "ng", "dt", "gh", "mb"};

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& items, Rng& rng) {
  return items[rng.below(N)];
}

// Renders a flat target against `src` in mapping notation: the whole target
// joins onto the first source character, the rest are deletions.
std::string render_target(std::string_view src, std::string_view dst) {
  std::string out;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (i > 0) out += ' ';
    if (i == 0 && !dst.empty()) {
      for (std::size_t k = 0; k < dst.size(); ++k) {
        if (k > 0) out += '+';
        out += dst[k];
      }
    } else {
      out += "<DEL>";
    }
  }
  return out;
}

std::string render_source(std::string_view src) {
  std::string out;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (i > 0) out += ' ';
    out += src[i];
  }
  return out;
}

}  // namespace

std::vector<NgramMapping> seed_channel() {
  constexpr std::int64_t kScale = 1000;
  std::vector<NgramMapping> out;
  for (const auto& c : kConfusions) {
    out.push_back({render_source(c.src), render_target(c.src, c.dst),
                   static_cast<std::int64_t>(std::llround(c.prob * kScale)), kScale});
  }
  sort_mappings(out);
  return out;
}

std::string pseudo_word(Rng& rng) {
  std::string word;
  const int syllables = rng.between(2, 3);
  for (int s = 0; s < syllables; ++s) {
    if (s == 0 || rng.chance(0.8)) word += pick(kOnsets, rng);
    word += pick(kNuclei, rng);
    if (s + 1 == syllables || rng.chance(0.3)) word += pick(kCodas, rng);
  }
  if (word.size() > 10) word.resize(10);
  while (word.size() < 4) word += pick(kNuclei, rng);
  return word;
}

Phrase pseudo_phrase(Rng& rng) {
  const double u = rng.uniform();
  const int words = u < 0.5 ? 1 : (u < 0.85 ? 2 : 3);
  std::vector<std::string> parts;
  for (int i = 0; i < words; ++i) parts.push_back(pseudo_word(rng));
  return Phrase::from_words(parts);
}

std::vector<Phrase> pseudo_phrases(std::size_t n, Rng& rng) {
  std::vector<Phrase> out;
  std::unordered_set<Phrase> seen;
  const auto& frequent = frequent_words();
  while (out.size() < n) {
    Phrase p = pseudo_phrase(rng);
    if (p.word_count() == 1 && frequent.count(p.str())) continue;
    if (seen.insert(p).second) out.push_back(std::move(p));
  }
  return out;
}

Benchmark make_benchmark(const BenchmarkConfig& config) {
  Benchmark b;
  b.config = config;

  Rng training_rng(derive_seed(config.seed, 1));
  const auto training_phrases = pseudo_phrases(static_cast<std::size_t>(config.training_pairs), training_rng);
  const auto channel = seed_channel();
  const CorruptionModel seed_model(channel, 1.0, derive_seed(config.seed, 2));
  b.training = corrupt_corpus(training_phrases, seed_model);

  b.costs = estimate_costs(b.training);
  b.mappings = extract_mappings(align_corpus(b.training, b.costs));

  Rng vocab_rng(derive_seed(config.seed, 3));
  b.vocab = UserVocabulary(pseudo_phrases(static_cast<std::size_t>(config.vocab_size), vocab_rng));
  b.index = build_index(b.vocab, b.mappings);

  const CorruptionModel learned(b.mappings, config.intensity, derive_seed(config.seed, 4));
  const auto& carriers = frequent_word_list();
  const std::size_t pool = std::min(carriers.size(), static_cast<std::size_t>(config.carrier_pool));
  std::unordered_set<std::string> vocab_words;
  for (const auto& p : b.vocab.phrases()) {
    for (auto& w : p.words()) vocab_words.insert(std::move(w));
  }
  auto carrier_word = [&](Rng& rng) {
    for (;;) {
      const auto& w = carriers[rng.below(pool)];
      if (!vocab_words.count(w)) return w;
    }
  };

  for (int i = 0; i < config.utterances; ++i) {
    Rng rng(derive_seed(config.seed, 1000 + static_cast<std::uint64_t>(i)));
    PlantedUtterance u;
    u.id = "utt" + std::to_string(i);
    u.phrase_id = static_cast<PhraseId>(rng.below(b.vocab.size()));
    const Phrase& phrase = b.vocab[u.phrase_id];
    u.corrupted = phrase;
    for (int attempt = 0; attempt < 50 && u.corrupted == phrase; ++attempt) u.corrupted = learned.corrupt(phrase, rng);

    const int length = rng.between(config.carrier_min_words, config.carrier_max_words);
    std::vector<std::string> carrier;
    for (int k = 0; k < length; ++k) carrier.push_back(carrier_word(rng));
    const int pos = rng.between(0, length);

    const auto phrase_words = phrase.words();
    const auto corrupted_words = u.corrupted.words();
    for (int k = 0; k <= length; ++k) {
      if (k == pos) {
        u.word_begin = static_cast<int>(u.baseline.size());
        u.reference.insert(u.reference.end(), phrase_words.begin(), phrase_words.end());
        u.baseline.insert(u.baseline.end(), corrupted_words.begin(), corrupted_words.end());
        u.word_end = static_cast<int>(u.baseline.size());
      }
      if (k == length) break;
      const auto& word = carrier[static_cast<std::size_t>(k)];
      u.reference.push_back(word);
      if (rng.chance(config.carrier_noise)) {
        std::string other = carrier_word(rng);
        while (other == word) other = carrier_word(rng);
        u.baseline.push_back(std::move(other));
      } else {
        u.baseline.push_back(word);
      }
    }
    b.utterances.push_back(std::move(u));
  }
  return b;
}

}  // namespace ctxspell::synth
