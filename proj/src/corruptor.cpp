#include "ctxspell/corruptor.hpp"

#include <algorithm>
#include <map>

#include "ctxspell/errors.hpp"
#include "ctxspell/parallel.hpp"

namespace ctxspell {

CorruptionModel::CorruptionModel(std::span<const NgramMapping> mappings, double intensity, std::uint64_t seed)
    : intensity_(intensity), seed_(seed) {
  if (!(intensity >= 0.0 && intensity <= 1.0)) throw InvalidInput("corruption intensity must be in [0, 1]");

  // Sorted containers keep outcome order, and therefore sampling, stable.
  std::map<std::string, std::vector<std::pair<std::string, double>>> grouped;
  for (const auto& m : mappings) {
    auto& list = grouped[m.src_chars()];
    if (!m.is_identity()) list.emplace_back(m.dst_flat(), m.cond_prob());
  }
  for (auto& [src, list] : grouped) {
    std::sort(list.begin(), list.end());
    double nonidentity = 0.0;
    for (const auto& [target, p] : list) nonidentity += intensity * p;
    std::vector<Outcome> outcomes;
    double cumulative = std::max(0.0, 1.0 - nonidentity);
    outcomes.push_back({src, cumulative});
    for (const auto& [target, p] : list) {
      cumulative += intensity * p;
      outcomes.push_back({target, cumulative});
    }
    outcomes.back().cumulative = 1.0;
    max_source_len_ = std::max(max_source_len_, static_cast<int>(src.size()));
    outcomes_.emplace(src, std::move(outcomes));
  }
}

std::vector<std::pair<std::string, double>> CorruptionModel::distribution(std::string_view src) const {
  const auto it = outcomes_.find(std::string(src));
  if (it == outcomes_.end()) return {{std::string(src), 1.0}};
  std::vector<std::pair<std::string, double>> out;
  double prev = 0.0;
  for (const auto& o : it->second) {
    if (o.cumulative > prev) out.emplace_back(o.target, o.cumulative - prev);
    prev = o.cumulative;
  }
  return out;
}

Phrase CorruptionModel::corrupt(const Phrase& phrase, Rng& rng) const {
  const std::string& text = phrase.str();
  std::string out;
  out.reserve(text.size() + 4);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::vector<Outcome>* outcomes = nullptr;
    std::size_t len = std::min(text.size() - pos, static_cast<std::size_t>(max_source_len_));
    for (; len >= 1; --len) {
      const auto it = outcomes_.find(text.substr(pos, len));
      if (it != outcomes_.end()) {
        outcomes = &it->second;
        break;
      }
    }
    if (outcomes == nullptr) {
      out.push_back(text[pos]);
      ++pos;
      continue;
    }
    const double u = rng.uniform();
    const auto chosen = std::find_if(outcomes->begin(), outcomes->end(),
                                     [u](const Outcome& o) { return u < o.cumulative; });
    out += chosen->target;
    pos += len;
  }
  Phrase result = Phrase::normalize(out);
  return result.empty() ? phrase : result;
}

std::vector<ParallelPair> corrupt_corpus(std::span<const Phrase> phrases, const CorruptionModel& model, int jobs) {
  std::vector<ParallelPair> out(phrases.size());
  parallel_for(phrases.size(), jobs, [&](std::size_t i) {
    Rng rng(derive_seed(model.seed(), i));
    out[i] = {phrases[i], model.corrupt(phrases[i], rng)};
  });
  return out;
}

}  // namespace ctxspell
