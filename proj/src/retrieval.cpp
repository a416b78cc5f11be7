#include "ctxspell/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <unordered_map>

#include "ctxspell/errors.hpp"
#include "ctxspell/io.hpp"

namespace ctxspell {

bool CandidateSet::contains(PhraseId id) const {
  return std::any_of(candidates.begin(), candidates.end(), [id](const CandidateHit& h) { return h.phrase_id == id; });
}

void RetrievalConfig::validate() const {
  if (top_k < 1) throw ConfigError("retrieval top_k must be >= 1");
  if (!(coverage_threshold >= 0.0 && coverage_threshold <= 1.0)) {
    throw ConfigError("retrieval coverage_threshold must be in [0, 1]");
  }
  if (min_hits < 0) throw ConfigError("retrieval min_hits must be >= 0");
  if (offset_bucket_width < 1) throw ConfigError("retrieval offset_bucket_width must be >= 1");
}

namespace {

int floor_div(int a, int b) {
  const int q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

bool better_hit(const CandidateHit& a, const CandidateHit& b) {
  if (a.hit_count != b.hit_count) return a.hit_count > b.hit_count;
  if (a.coverage != b.coverage) return a.coverage > b.coverage;
  return a.phrase_id < b.phrase_id;
}

struct BucketHits {
  std::vector<bool> fragment_chars;
  std::vector<bool> phrase_chars;
};

}  // namespace

CandidateSet retrieve(const Fragment& fragment, const PhraseNgramIndex& index, const RetrievalConfig& config) {
  config.validate();
  CandidateSet out{fragment, {}};
  const std::string& text = fragment.text.str();
  const int n = static_cast<int>(text.size());
  const int min_len = index.min_key_len();
  const int max_len = index.max_key_len();
  if (min_len == 0 || n < min_len) return out;

  // (phrase, bucket) -> covered characters; std::map keeps iteration order
  // deterministic.
  std::map<std::pair<PhraseId, int>, BucketHits> groups;
  const auto& vocab = index.vocabulary();
  for (int pos = 0; pos < n; ++pos) {
    for (int len = min_len; len <= max_len && pos + len <= n; ++len) {
      const auto postings = index.lookup(std::string_view(text).substr(static_cast<std::size_t>(pos),
                                                                       static_cast<std::size_t>(len)));
      for (const Posting& p : postings) {
        const int bucket = floor_div(pos - static_cast<int>(p.phrase_pos), config.offset_bucket_width);
        auto [it, inserted] = groups.try_emplace({p.phrase_id, bucket});
        BucketHits& g = it->second;
        if (inserted) {
          g.fragment_chars.assign(static_cast<std::size_t>(n), false);
          g.phrase_chars.assign(vocab[p.phrase_id].size(), false);
        }
        for (int k = pos; k < pos + len; ++k) g.fragment_chars[static_cast<std::size_t>(k)] = true;
        for (int k = p.phrase_pos; k < p.phrase_pos + p.src_len; ++k) g.phrase_chars[static_cast<std::size_t>(k)] = true;
      }
    }
  }

  std::unordered_map<PhraseId, CandidateHit> best;
  for (const auto& [key, g] : groups) {
    CandidateHit hit;
    hit.phrase_id = key.first;
    hit.hit_count = static_cast<int>(std::count(g.fragment_chars.begin(), g.fragment_chars.end(), true));
    const auto covered = std::count(g.phrase_chars.begin(), g.phrase_chars.end(), true);
    hit.coverage = static_cast<double>(covered) / static_cast<double>(g.phrase_chars.size());
    if (hit.coverage < config.coverage_threshold || hit.hit_count < config.min_hits) continue;
    const auto first = std::find(g.fragment_chars.begin(), g.fragment_chars.end(), true);
    const auto last = std::find(g.fragment_chars.rbegin(), g.fragment_chars.rend(), true);
    hit.window_begin = static_cast<int>(first - g.fragment_chars.begin());
    hit.window_end = n - static_cast<int>(last - g.fragment_chars.rbegin());
    // Buckets arrive in ascending order, so keeping only strict improvements
    // prefers the lower bucket on ties.
    auto [it, inserted] = best.try_emplace(hit.phrase_id, hit);
    if (!inserted && better_hit(hit, it->second)) it->second = hit;
  }

  out.candidates.reserve(best.size());
  for (auto& [id, hit] : best) {
    hit.phrase = vocab[id];
    out.candidates.push_back(std::move(hit));
  }
  std::sort(out.candidates.begin(), out.candidates.end(), better_hit);
  if (out.candidates.size() > static_cast<std::size_t>(config.top_k)) {
    out.candidates.resize(static_cast<std::size_t>(config.top_k));
  }
  return out;
}

namespace {

struct WindowDistance {
  int distance;
  int begin;
  int end;
};

// Unrestricted-length minimum over all fragment substrings (free start and
// end). A lower bound on the length-restricted minimum, and equal to it
// whenever it is at most half the phrase length.
WindowDistance best_any_window(const std::string& phrase, const std::string& text) {
  const std::size_t n = phrase.size();
  const std::size_t m = text.size();
  std::vector<int> prev(m + 1, 0);
  std::vector<int> cur(m + 1, 0);
  std::vector<int> prev_start(m + 1);
  std::vector<int> cur_start(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev_start[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    cur_start[0] = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      const int diag = prev[j - 1] + (phrase[i - 1] == text[j - 1] ? 0 : 1);
      const int left = cur[j - 1] + 1;
      const int up = prev[j] + 1;
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
  WindowDistance best{std::numeric_limits<int>::max(), 0, 0};
  for (std::size_t j = 0; j <= m; ++j) {
    if (prev[j] < best.distance) best = {prev[j], prev_start[j], static_cast<int>(j)};
  }
  return best;
}

// Exact length-restricted minimum: one global DP per start position, reading
// every admissible end off the last row.
WindowDistance best_bounded_window(const std::string& phrase, const std::string& text, int min_len, int max_len) {
  const std::size_t n = phrase.size();
  const int m = static_cast<int>(text.size());
  WindowDistance best{std::numeric_limits<int>::max(), 0, 0};
  std::vector<int> prev;
  std::vector<int> cur;
  for (int start = 0; start + min_len <= m; ++start) {
    const int span = std::min(max_len, m - start);
    prev.assign(static_cast<std::size_t>(span) + 1, 0);
    cur.assign(static_cast<std::size_t>(span) + 1, 0);
    for (int j = 0; j <= span; ++j) prev[static_cast<std::size_t>(j)] = j;
    for (std::size_t i = 1; i <= n; ++i) {
      cur[0] = static_cast<int>(i);
      for (int j = 1; j <= span; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        const int sub = prev[uj - 1] + (phrase[i - 1] == text[static_cast<std::size_t>(start + j - 1)] ? 0 : 1);
        cur[uj] = std::min({sub, cur[uj - 1] + 1, prev[uj] + 1});
      }
      std::swap(prev, cur);
    }
    for (int len = min_len; len <= span; ++len) {
      if (prev[static_cast<std::size_t>(len)] < best.distance) {
        best = {prev[static_cast<std::size_t>(len)], start, start + len};
      }
    }
  }
  return best;
}

}  // namespace

CandidateSet levenshtein_retrieve(const Fragment& fragment, const UserVocabulary& vocab, int top_k) {
  if (vocab.empty()) throw InvalidInput("levenshtein_retrieve: empty vocabulary");
  if (top_k < 1) throw ConfigError("levenshtein_retrieve: top_k must be >= 1");
  const std::string& text = fragment.text.str();
  const int m = static_cast<int>(text.size());

  struct Scored {
    PhraseId id;
    double score;  // normalized distance; lower bound until `exact`
    bool exact;
    WindowDistance window;
  };
  std::vector<Scored> scored;
  scored.reserve(vocab.size());
  for (PhraseId id = 0; id < vocab.size(); ++id) {
    const std::string& phrase = vocab[id].str();
    const int n = static_cast<int>(phrase.size());
    const int min_len = std::max(1, (n + 1) / 2);
    if (m < min_len) continue;  // no admissible window
    const WindowDistance w = best_any_window(phrase, text);
    const bool exact = 2 * w.distance <= n;
    scored.push_back({id, static_cast<double>(w.distance) / n, exact, w});
  }
  auto rank_less = [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.id < b.id;
  };
  std::sort(scored.begin(), scored.end(), rank_less);

  // Refine lower bounds lazily: a bound that already ranks below the k-th
  // exact score cannot enter the result.
  std::vector<Scored> exact;
  for (const auto& s : scored) {
    if (static_cast<int>(exact.size()) >= top_k) {
      std::sort(exact.begin(), exact.end(), rank_less);
      exact.resize(static_cast<std::size_t>(top_k));
      if (!rank_less(s, exact.back())) break;
    }
    if (s.exact) {
      exact.push_back(s);
      continue;
    }
    const std::string& phrase = vocab[s.id].str();
    const int n = static_cast<int>(phrase.size());
    const WindowDistance w = best_bounded_window(phrase, text, std::max(1, (n + 1) / 2), (3 * n) / 2);
    exact.push_back({s.id, static_cast<double>(w.distance) / n, true, w});
  }
  std::sort(exact.begin(), exact.end(), rank_less);
  if (exact.size() > static_cast<std::size_t>(top_k)) exact.resize(static_cast<std::size_t>(top_k));

  CandidateSet out{fragment, {}};
  for (const auto& s : exact) {
    CandidateHit hit;
    hit.phrase_id = s.id;
    hit.phrase = vocab[s.id];
    hit.hit_count = 0;
    hit.coverage = std::clamp(1.0 - s.score, 0.0, 1.0);
    hit.window_begin = s.window.begin;
    hit.window_end = s.window.end;
    out.candidates.push_back(std::move(hit));
  }
  return out;
}

void write_candidates(std::ostream& out, std::string_view fragment_id, const CandidateSet& set) {
  for (std::size_t r = 0; r < set.candidates.size(); ++r) {
    const auto& c = set.candidates[r];
    out << fragment_id << '\t' << (r + 1) << '\t' << c.phrase.display() << '\t' << c.hit_count << '\t'
        << io::format_fixed(c.coverage, 4) << '\t' << c.window_begin << '-' << c.window_end << '\n';
  }
}

}  // namespace ctxspell
