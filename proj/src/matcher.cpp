#include "ctxspell/matcher.hpp"

#include <algorithm>
#include <limits>

#include "ctxspell/errors.hpp"
#include "ctxspell/io.hpp"

namespace ctxspell {

WindowScore score_window(const Phrase& candidate, const Phrase& fragment, const EditCostTable& costs) {
  const std::string& c = candidate.str();
  const std::string& f = fragment.str();
  const std::size_t n = c.size();
  const std::size_t m = f.size();

  // Row i holds the cost of aligning c[0, i) to some substring ending at j,
  // together with where that substring starts.
  std::vector<double> prev(m + 1, 0.0);
  std::vector<double> cur(m + 1, 0.0);
  std::vector<int> prev_start(m + 1);
  std::vector<int> cur_start(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev_start[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = prev[0] + costs.del(c[i - 1]);
    cur_start[0] = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      const double diag = prev[j - 1] + costs.sub(c[i - 1], f[j - 1]);
      const double left = cur[j - 1] + costs.ins(f[j - 1]);
      const double up = prev[j] + costs.del(c[i - 1]);
      if (diag <= left && diag <= up) {
        cur[j] = diag;
        cur_start[j] = prev_start[j - 1];
      } else if (left <= up) {
        cur[j] = left;
        cur_start[j] = cur_start[j - 1];
      } else {
        cur[j] = up;
        cur_start[j] = prev_start[j];
      }
    }
    std::swap(prev, cur);
    std::swap(prev_start, cur_start);
  }
  WindowScore best{0, 0, std::numeric_limits<double>::infinity()};
  for (std::size_t j = 0; j <= m; ++j) {
    if (prev[j] < best.cost) best = {prev_start[j], static_cast<int>(j), prev[j]};
  }
  return best;
}

double alignment_cost(const Phrase& candidate, std::string_view observed, const EditCostTable& costs) {
  const std::string& c = candidate.str();
  const std::size_t m = observed.size();
  std::vector<double> prev(m + 1, 0.0);
  std::vector<double> cur(m + 1, 0.0);
  for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + costs.ins(observed[j - 1]);
  for (const char ch : c) {
    cur[0] = prev[0] + costs.del(ch);
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = std::min({prev[j - 1] + costs.sub(ch, observed[j - 1]), cur[j - 1] + costs.ins(observed[j - 1]),
                         prev[j] + costs.del(ch)});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

void MatcherConfig::validate() const {
  if (!(tau > 0.0)) throw ConfigError("matcher tau must be > 0");
}

std::pair<int, int> snap_to_words(std::string_view text, int begin, int end) {
  const int n = static_cast<int>(text.size());
  auto sep = [&](int i) { return text[static_cast<std::size_t>(i)] == kWordSeparator; };
  while (begin < end && sep(begin)) ++begin;
  while (end > begin && sep(end - 1)) --end;
  if (begin >= end) return {begin, begin};

  auto word_start = [&](int i) { return i == 0 || sep(i - 1); };
  auto word_end = [&](int i) { return i == n || sep(i); };

  if (!word_start(begin)) {
    int left = begin;
    while (!word_start(left)) --left;
    int right = begin;
    while (right < end && !word_start(right)) ++right;
    // Narrowing is only possible when a word starts inside the span.
    begin = (right < end && right - begin < begin - left) ? right : left;
  }
  if (!word_end(end)) {
    int right = end;
    while (!word_end(right)) ++right;
    int left = end;
    while (left > begin && !word_end(left)) --left;
    end = (left > begin && end - left < right - end) ? left : right;
  }
  return {begin, end};
}

std::vector<AcceptedSpan> resolve_overlaps(std::vector<AcceptedSpan> spans) {
  std::sort(spans.begin(), spans.end(), [](const AcceptedSpan& a, const AcceptedSpan& b) {
    if (a.normalized_cost != b.normalized_cost) return a.normalized_cost < b.normalized_cost;
    if (a.end - a.begin != b.end - b.begin) return a.end - a.begin > b.end - b.begin;
    return a.slot < b.slot;
  });
  std::vector<AcceptedSpan> kept;
  for (const auto& s : spans) {
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const AcceptedSpan& k) {
      return s.begin < k.end && k.begin < s.end;
    });
    if (!overlaps) kept.push_back(s);
  }
  std::sort(kept.begin(), kept.end(), [](const AcceptedSpan& a, const AcceptedSpan& b) { return a.begin < b.begin; });
  return kept;
}

NoisyChannelMatcher::NoisyChannelMatcher(EditCostTable costs, MatcherConfig config)
    : costs_(std::move(costs)), config_(config) {
  config_.validate();
}

TaggedFragment NoisyChannelMatcher::tag(const Fragment& fragment, std::span<const Phrase> slots) const {
  if (slots.size() > static_cast<std::size_t>(kCandidateSlots)) {
    throw InvalidInput("tagger accepts at most 10 candidate slots");
  }
  const std::string& text = fragment.text.str();
  std::vector<AcceptedSpan> acceptable;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const Phrase& candidate = slots[s];
    if (candidate.empty()) continue;
    const double len = static_cast<double>(candidate.size());
    const WindowScore w = score_window(candidate, fragment.text, costs_);
    AcceptedSpan span{static_cast<int>(s) + 1, w.begin, w.end, w.cost / len};
    if (config_.snap_to_words) {
      const auto [b, e] = snap_to_words(text, w.begin, w.end);
      if (b >= e) continue;
      if (b != w.begin || e != w.end) {
        span.begin = b;
        span.end = e;
        span.normalized_cost =
            alignment_cost(candidate, std::string_view(text).substr(static_cast<std::size_t>(b),
                                                                    static_cast<std::size_t>(e - b)),
                           costs_) /
            len;
      }
    }
    if (span.end > span.begin && span.normalized_cost < config_.tau) acceptable.push_back(span);
  }

  TaggedFragment out{fragment, std::vector<int>(text.size(), 0), resolve_overlaps(std::move(acceptable))};
  for (const auto& a : out.accepted) {
    std::fill(out.labels.begin() + a.begin, out.labels.begin() + a.end, a.slot);
  }
  return out;
}

std::vector<Phrase> slots_of(const CandidateSet& set) {
  std::vector<Phrase> slots;
  slots.reserve(set.candidates.size());
  for (const auto& c : set.candidates) slots.push_back(c.phrase);
  if (slots.size() > static_cast<std::size_t>(kCandidateSlots)) slots.resize(kCandidateSlots);
  return slots;
}

TaggedFragment tag(const Fragment& fragment, const CandidateSet& candidates, const EditCostTable& costs,
                   const MatcherConfig& config) {
  return NoisyChannelMatcher(costs, config).tag(fragment, slots_of(candidates));
}

std::string format_tag_trace(std::string_view fragment_id, const TaggedFragment& tagged) {
  std::string out(fragment_id);
  out.push_back('\t');
  for (std::size_t i = 0; i < tagged.labels.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += std::to_string(tagged.labels[i]);
  }
  out.push_back('\t');
  if (tagged.accepted.empty()) out.push_back('-');
  for (std::size_t i = 0; i < tagged.accepted.size(); ++i) {
    const auto& a = tagged.accepted[i];
    if (i > 0) out.push_back(';');
    out += std::to_string(a.slot) + ':' + std::to_string(a.begin) + '-' + std::to_string(a.end) + ':' +
           io::format_fixed(a.normalized_cost, 4);
  }
  return out;
}

}  // namespace ctxspell
