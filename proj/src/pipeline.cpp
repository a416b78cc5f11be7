#include "ctxspell/pipeline.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "ctxspell/errors.hpp"
#include "ctxspell/frequent_words.hpp"
#include "ctxspell/io.hpp"

namespace ctxspell {

std::vector<Fragment> split_transcript(std::span<const std::string> words, std::string_view utterance_id,
                                       int min_words, int max_words, int overlap) {
  if (max_words < 1 || overlap < 0 || overlap >= max_words || min_words < 1 || min_words > max_words) {
    throw ConfigError("fragment sizes must satisfy 1 <= min_words <= max_words and 0 <= overlap < max_words");
  }
  std::vector<Fragment> out;
  const int n = static_cast<int>(words.size());
  if (n == 0) return out;
  const int stride = max_words - overlap;
  for (int start = 0;; start += stride) {
    const int end = std::min(start + max_words, n);
    std::vector<std::string> slice(words.begin() + start, words.begin() + end);
    out.push_back(Fragment{Phrase::from_words(slice), std::string(utterance_id), start, end});
    if (end == n) break;
  }
  return out;
}

void PipelineConfig::validate() const {
  retrieval.validate();
  matcher.validate();
  if (max_words < 1 || overlap < 0 || overlap >= max_words || min_words < 1 || min_words > max_words) {
    throw ConfigError("fragment sizes must satisfy 1 <= min_words <= max_words and 0 <= overlap < max_words");
  }
}

std::string CorrectionResult::text() const { return io::join(words, " "); }

Corrector::Corrector(const PhraseNgramIndex& index, const EditCostTable& costs, PipelineConfig config,
                     std::shared_ptr<const Tagger> tagger)
    : index_(index), config_(config), tagger_(std::move(tagger)) {
  config_.validate();
  for (const auto& phrase : index_.vocabulary().phrases()) {
    for (const char c : phrase.str()) {
      if (!costs.covers(c)) {
        throw ConfigError(std::string("cost table does not cover symbol '") + c + "' used by the vocabulary");
      }
    }
  }
  if (!tagger_) tagger_ = std::make_shared<NoisyChannelMatcher>(costs, config_.matcher);
}

CorrectionResult Corrector::correct(std::string_view utterance_id, std::string_view text) const {
  const auto words = normalize_words(text);
  return correct(utterance_id, words);
}

namespace {

struct Detection {
  int word_begin;
  int word_end;
  Phrase phrase;
  int slot;
  double cost;
};

}  // namespace

CorrectionResult Corrector::correct(std::string_view utterance_id, std::span<const std::string> words) const {
  CorrectionResult result{{words.begin(), words.end()}, {std::string(utterance_id), {}}};
  const auto fragments =
      split_transcript(words, utterance_id, config_.min_words, config_.max_words, config_.overlap);

  // Keyed by (span, phrase); overlapping fragments can report the same thing.
  std::map<std::tuple<int, int, std::string>, Detection> detections;
  for (const auto& fragment : fragments) {
    const auto candidates = retrieve(fragment, index_, config_.retrieval);
    if (candidates.candidates.empty()) continue;
    const auto slots = slots_of(candidates);
    const auto tagged = tagger_->tag(fragment, slots);

    std::vector<int> starts;  // character offset of each fragment word
    int offset = 0;
    for (int w = fragment.word_start; w < fragment.word_end; ++w) {
      starts.push_back(offset);
      offset += static_cast<int>(words[static_cast<std::size_t>(w)].size()) + 1;
    }
    for (const auto& span : tagged.accepted) {
      int first = -1;
      int last = -1;
      for (int k = 0; k < static_cast<int>(starts.size()); ++k) {
        const int ws = starts[static_cast<std::size_t>(k)];
        const int we = ws + static_cast<int>(words[static_cast<std::size_t>(fragment.word_start + k)].size());
        if (we > span.begin && ws < span.end) {
          if (first < 0) first = k;
          last = k;
        }
      }
      if (first < 0) continue;
      Detection d{fragment.word_start + first, fragment.word_start + last + 1,
                  slots[static_cast<std::size_t>(span.slot - 1)], span.slot, span.normalized_cost};
      auto key = std::make_tuple(d.word_begin, d.word_end, d.phrase.str());
      auto [it, inserted] = detections.try_emplace(std::move(key), d);
      if (!inserted && d.cost < it->second.cost) it->second = d;
    }
  }

  auto original_of = [&](const Detection& d) {
    std::vector<std::string> slice(words.begin() + d.word_begin, words.begin() + d.word_end);
    return slice;
  };
  std::vector<Replacement> trace;
  std::vector<Detection> survivors;
  const auto& frequent = frequent_words();
  for (const auto& [key, d] : detections) {
    const bool single = d.word_end - d.word_begin == 1;
    if (config_.frequent_word_guard && single && frequent.count(words[static_cast<std::size_t>(d.word_begin)]) &&
        !(d.cost < config_.matcher.tau / 2)) {
      trace.push_back({d.word_begin, d.word_end, io::join(original_of(d), " "), d.phrase, d.slot, d.cost,
                       "rejected:frequent_word"});
      continue;
    }
    survivors.push_back(d);
  }
  std::sort(survivors.begin(), survivors.end(), [](const Detection& a, const Detection& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    const int la = a.word_end - a.word_begin;
    const int lb = b.word_end - b.word_begin;
    if (la != lb) return la > lb;
    if (a.word_begin != b.word_begin) return a.word_begin < b.word_begin;
    return a.phrase < b.phrase;
  });
  std::vector<Detection> kept;
  for (const auto& d : survivors) {
    const auto original = original_of(d);
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return d.word_begin < k.word_end && k.word_begin < d.word_end;
    });
    std::string status = "applied";
    if (overlaps) {
      status = "rejected:overlap";
    } else {
      kept.push_back(d);
      if (original == d.phrase.words()) status = "rejected:noop";
    }
    trace.push_back({d.word_begin, d.word_end, io::join(original, " "), d.phrase, d.slot, d.cost, std::move(status)});
  }

  std::sort(trace.begin(), trace.end(), [](const Replacement& a, const Replacement& b) {
    return std::tie(a.word_begin, a.word_end, a.replacement) < std::tie(b.word_begin, b.word_end, b.replacement);
  });
  // Right to left so earlier word offsets stay valid.
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    if (it->status != "applied") continue;
    const auto replacement = it->replacement.words();
    result.words.erase(result.words.begin() + it->word_begin, result.words.begin() + it->word_end);
    result.words.insert(result.words.begin() + it->word_begin, replacement.begin(), replacement.end());
  }
  result.trace.replacements = std::move(trace);
  return result;
}

std::vector<RetrievalEvent> retrieval_events(std::span<const std::string> reference,
                                             std::span<const std::string> baseline, const PhraseMatcher& vocab,
                                             const PipelineConfig& config,
                                             const std::function<CandidateSet(const Fragment&)>& retriever) {
  std::vector<RetrievalEvent> events;
  const auto misses = misrecognized(reference, baseline, vocab);
  if (misses.empty()) return events;
  const auto fragments = split_transcript(baseline, {}, config.min_words, config.max_words, config.overlap);
  for (const auto& miss : misses) {
    const Fragment* best = nullptr;
    int best_overlap = -1;
    for (const auto& f : fragments) {
      // An empty aligned span (the phrase was deleted) counts the fragment
      // that contains its position.
      const int overlap = miss.hyp_end > miss.hyp_begin
                              ? std::min(f.word_end, miss.hyp_end) - std::max(f.word_start, miss.hyp_begin)
                              : (f.word_start <= miss.hyp_begin && miss.hyp_begin <= f.word_end ? 0 : -1);
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = &f;
      }
    }
    RetrievalEvent event{miss.phrase_id, {}};
    if (best != nullptr) event.candidates = retriever(*best);
    events.push_back(std::move(event));
  }
  return events;
}

std::string format_trace(const CorrectionTrace& trace) {
  std::string out;
  for (const auto& r : trace.replacements) {
    out += trace.utterance_id + '\t' + std::to_string(r.word_begin) + '\t' + std::to_string(r.word_end) + '\t' +
           r.original + '\t' + r.replacement.display() + '\t' + std::to_string(r.slot) + '\t' +
           io::format_fixed(r.normalized_cost, 4) + '\t' + r.status + '\n';
  }
  return out;
}

}  // namespace ctxspell
