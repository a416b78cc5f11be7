#include "ctxspell/metrics.hpp"

#include <algorithm>
#include <ostream>

#include "ctxspell/errors.hpp"
#include "ctxspell/io.hpp"

namespace ctxspell {

using Op = WordAlignment::Op;

WordAlignment align_words(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  const std::size_t width = m + 1;
  std::vector<int> dist((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> int& { return dist[i * width + j]; };
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    at(i, 0) = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const int diag = at(i - 1, j - 1) + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i, j - 1) + 1, at(i - 1, j) + 1});
    }
  }
  WordAlignment out;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const int here = at(i, j);
    if (i > 0 && j > 0) {
      const bool same = reference[i - 1] == hypothesis[j - 1];
      if (at(i - 1, j - 1) + (same ? 0 : 1) == here) {
        out.ops.push_back(same ? Op::kMatch : Op::kSubstitute);
        out.substitutions += same ? 0 : 1;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && at(i, j - 1) + 1 == here) {
      out.ops.push_back(Op::kInsert);
      ++out.insertions;
      --j;
    } else {
      out.ops.push_back(Op::kDelete);
      ++out.deletions;
      --i;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

double wer(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
  if (reference.empty()) throw InvalidInput("wer: empty reference");
  return static_cast<double>(align_words(reference, hypothesis).errors()) / static_cast<double>(reference.size());
}

PhraseMatcher::PhraseMatcher(const UserVocabulary& vocab) {
  phrases_.reserve(vocab.size());
  for (PhraseId id = 0; id < vocab.size(); ++id) {
    phrases_.push_back(vocab[id].words());
    by_first_word_[phrases_.back().front()].push_back(id);
    longest_ = std::max(longest_, static_cast<int>(phrases_.back().size()));
  }
  for (auto& [word, ids] : by_first_word_) {
    std::stable_sort(ids.begin(), ids.end(),
                     [&](PhraseId a, PhraseId b) { return phrases_[a].size() > phrases_[b].size(); });
  }
}

bool PhraseMatcher::matches_at(std::span<const std::string> words, int pos, PhraseId id) const {
  const auto& p = phrases_[id];
  if (static_cast<std::size_t>(pos) + p.size() > words.size()) return false;
  return std::equal(p.begin(), p.end(), words.begin() + pos);
}

std::vector<PhraseMatcher::Occurrence> PhraseMatcher::find_all(std::span<const std::string> words) const {
  std::vector<Occurrence> out;
  int pos = 0;
  const int n = static_cast<int>(words.size());
  while (pos < n) {
    const auto it = by_first_word_.find(words[static_cast<std::size_t>(pos)]);
    bool found = false;
    if (it != by_first_word_.end()) {
      for (const PhraseId id : it->second) {
        if (matches_at(words, pos, id)) {
          const int len = static_cast<int>(phrases_[id].size());
          out.push_back({pos, pos + len, id});
          pos += len;
          found = true;
          break;
        }
      }
    }
    if (!found) ++pos;
  }
  return out;
}

bool PhraseMatcher::any_intersecting(std::span<const std::string> words, int begin, int end) const {
  for (int pos = std::max(0, begin - longest_ + 1); pos < end; ++pos) {
    const auto it = by_first_word_.find(words[static_cast<std::size_t>(pos)]);
    if (it == by_first_word_.end()) continue;
    for (const PhraseId id : it->second) {
      if (pos + static_cast<int>(phrases_[id].size()) > begin && matches_at(words, pos, id)) return true;
    }
  }
  return false;
}

namespace {

// For each reference word, the hypothesis index it matches exactly (or -1),
// and whether any hypothesis word was inserted right before it.
struct AlignmentMap {
  std::vector<int> ref_to_hyp;
  std::vector<char> insertion_before;
  std::vector<int> hyp_to_ref;
};

AlignmentMap map_alignment(const WordAlignment& a, std::size_t n, std::size_t m) {
  AlignmentMap map{std::vector<int>(n, -1), std::vector<char>(n + 1, 0), std::vector<int>(m, -1)};
  std::size_t i = 0;
  std::size_t j = 0;
  for (const Op op : a.ops) {
    switch (op) {
      case Op::kMatch:
        map.ref_to_hyp[i] = static_cast<int>(j);
        map.hyp_to_ref[j] = static_cast<int>(i);
        ++i;
        ++j;
        break;
      case Op::kSubstitute:
        ++i;
        ++j;
        break;
      case Op::kInsert:
        map.insertion_before[i] = 1;
        ++j;
        break;
      case Op::kDelete:
        ++i;
        break;
    }
  }
  return map;
}

// Reference words [begin, end) appear verbatim and contiguously at their
// aligned place in the hypothesis.
bool present(const AlignmentMap& map, int begin, int end) {
  for (int k = begin; k < end; ++k) {
    if (map.ref_to_hyp[static_cast<std::size_t>(k)] < 0) return false;
    if (k > begin && map.insertion_before[static_cast<std::size_t>(k)]) return false;
  }
  return true;
}

}  // namespace

Words ideal_hypothesis(std::span<const std::string> reference, std::span<const std::string> baseline,
                       const PhraseMatcher& vocab) {
  const auto alignment = align_words(reference, baseline);
  Words out;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  const auto& ops = alignment.ops;
  while (k < ops.size()) {
    if (ops[k] == Op::kMatch) {
      out.push_back(baseline[j]);
      ++i;
      ++j;
      ++k;
      continue;
    }
    const std::size_t ref_begin = i;
    const std::size_t hyp_begin = j;
    for (; k < ops.size() && ops[k] != Op::kMatch; ++k) {
      if (ops[k] != Op::kInsert) ++i;
      if (ops[k] != Op::kDelete) ++j;
    }
    const bool patch = i > ref_begin && vocab.any_intersecting(reference, static_cast<int>(ref_begin),
                                                               static_cast<int>(i));
    if (patch) {
      out.insert(out.end(), reference.begin() + static_cast<std::ptrdiff_t>(ref_begin),
                 reference.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      out.insert(out.end(), baseline.begin() + static_cast<std::ptrdiff_t>(hyp_begin),
                 baseline.begin() + static_cast<std::ptrdiff_t>(j));
    }
  }
  return out;
}

double ideal_wer(std::span<const std::string> reference, std::span<const std::string> baseline,
                 const UserVocabulary& vocab) {
  const PhraseMatcher matcher(vocab);
  return wer(reference, ideal_hypothesis(reference, baseline, matcher));
}

std::optional<double> recall(const EvalCounts& c) {
  const long long denom = c.better + c.missed;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(c.better) / static_cast<double>(denom);
}

std::optional<double> precision(const EvalCounts& c) {
  const long long denom = c.better + c.fp;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(c.better) / static_cast<double>(denom);
}

EvalCounts diff_keyword_counts(std::span<const std::string> reference, std::span<const std::string> baseline,
                               std::span<const std::string> corrected, const PhraseMatcher& vocab) {
  EvalCounts counts;
  const auto to_baseline = map_alignment(align_words(reference, baseline), reference.size(), baseline.size());
  const auto to_corrected = map_alignment(align_words(reference, corrected), reference.size(), corrected.size());
  for (const auto& occ : vocab.find_all(reference)) {
    const bool in_baseline = present(to_baseline, occ.begin, occ.end);
    const bool in_corrected = present(to_corrected, occ.begin, occ.end);
    if (in_baseline && in_corrected) {
      ++counts.unchanged_correct;
    } else if (in_corrected) {
      ++counts.better;
    } else if (in_baseline) {
      ++counts.fp;
    } else {
      ++counts.missed;
    }
  }

  const auto corrected_to_baseline =
      map_alignment(align_words(corrected, baseline), corrected.size(), baseline.size());
  for (const auto& occ : vocab.find_all(corrected)) {
    bool supported = true;
    for (int k = occ.begin; k < occ.end && supported; ++k) {
      const int r = to_corrected.hyp_to_ref[static_cast<std::size_t>(k)];
      supported = r >= 0 && (k == occ.begin || r == to_corrected.hyp_to_ref[static_cast<std::size_t>(k - 1)] + 1);
    }
    if (supported) continue;
    if (present(corrected_to_baseline, occ.begin, occ.end)) continue;  // unchanged by correction
    ++counts.fp;
  }
  return counts;
}

std::vector<Misrecognition> misrecognized(std::span<const std::string> reference,
                                          std::span<const std::string> baseline, const PhraseMatcher& vocab) {
  const auto alignment = align_words(reference, baseline);
  const auto map = map_alignment(alignment, reference.size(), baseline.size());
  // hyp_at[i]: hypothesis words consumed before reference word i.
  std::vector<int> hyp_at(reference.size() + 1, 0);
  std::size_t i = 0;
  int j = 0;
  for (const Op op : alignment.ops) {
    if (op == Op::kInsert) {
      ++j;
      continue;
    }
    hyp_at[i++] = j;
    if (op != Op::kDelete) ++j;
  }
  hyp_at[i] = j;
  std::vector<Misrecognition> out;
  for (const auto& occ : vocab.find_all(reference)) {
    if (present(map, occ.begin, occ.end)) continue;
    out.push_back({occ.id, occ.begin, occ.end, hyp_at[static_cast<std::size_t>(occ.begin)],
                   hyp_at[static_cast<std::size_t>(occ.end)]});
  }
  return out;
}

std::optional<double> topk_recall(std::span<const RetrievalEvent> events) {
  if (events.empty()) return std::nullopt;
  const auto hits = std::count_if(events.begin(), events.end(),
                                  [](const RetrievalEvent& e) { return e.candidates.contains(e.phrase_id); });
  return static_cast<double>(hits) / static_cast<double>(events.size());
}

EvalReport evaluate(std::span<const UtteranceTriple> utterances, const UserVocabulary& vocab,
                    std::optional<double> top10_recall) {
  const PhraseMatcher matcher(vocab);
  EvalReport report;
  long long baseline_errors = 0;
  long long corrected_errors = 0;
  long long ideal_errors = 0;
  for (const auto& u : utterances) {
    if (u.reference.empty()) throw InvalidInput("evaluate: empty reference for utterance '" + u.id + "'");
    report.reference_words += static_cast<long long>(u.reference.size());
    ++report.utterances;
    baseline_errors += align_words(u.reference, u.baseline).errors();
    corrected_errors += align_words(u.reference, u.corrected).errors();
    ideal_errors += align_words(u.reference, ideal_hypothesis(u.reference, u.baseline, matcher)).errors();
    report.counts += diff_keyword_counts(u.reference, u.baseline, u.corrected, matcher);
  }
  if (report.reference_words == 0) throw InvalidInput("evaluate: no reference words");
  const auto words = static_cast<double>(report.reference_words);
  report.baseline_wer = static_cast<double>(baseline_errors) / words;
  report.corrected_wer = static_cast<double>(corrected_errors) / words;
  report.ideal_wer = static_cast<double>(ideal_errors) / words;
  report.recall = recall(report.counts);
  report.precision = precision(report.counts);
  report.top10_recall = top10_recall;
  return report;
}

void write_report(std::ostream& out, const EvalReport& r) {
  auto pct = [](std::optional<double> v) { return v ? io::format_fixed(100.0 * *v, 2) : std::string("NA"); };
  out << "utterances\treference_words\tbaseline_wer_pct\tspellcheck_wer_pct\tideal_wer_pct\trecall_pct"
         "\tprecision_pct\ttop10_recall_pct\tbetter\tmissed\tfp\tunchanged_correct\n";
  out << r.utterances << '\t' << r.reference_words << '\t' << pct(r.baseline_wer) << '\t' << pct(r.corrected_wer)
      << '\t' << pct(r.ideal_wer) << '\t' << pct(r.recall) << '\t' << pct(r.precision) << '\t' << pct(r.top10_recall)
      << '\t' << r.counts.better << '\t' << r.counts.missed << '\t' << r.counts.fp << '\t'
      << r.counts.unchanged_correct << '\n';
}

}  // namespace ctxspell
