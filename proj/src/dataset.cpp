#include "ctxspell/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "ctxspell/errors.hpp"
#include "ctxspell/io.hpp"
#include "ctxspell/parallel.hpp"

namespace ctxspell {

void TrainingExample::validate() const {
  if (labels.size() != hyp.size()) throw InvalidInput("labels length differs from hypothesis length");
  if (correct_slot < 0 || correct_slot > kCandidateSlots) throw InvalidInput("correct_slot out of range");
  if (correct_slot == 0) {
    if (span || std::any_of(labels.begin(), labels.end(), [](int l) { return l != 0; })) {
      throw InvalidInput("clean example must have no span and all-zero labels");
    }
    return;
  }
  if (!span) throw InvalidInput("corrupted example needs a span");
  const auto [b, e] = *span;
  if (b < 0 || e <= b || static_cast<std::size_t>(e) > labels.size()) throw InvalidInput("span out of range");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool inside = static_cast<int>(i) >= b && static_cast<int>(i) < e;
    if (labels[i] != (inside ? correct_slot : 0)) throw InvalidInput("labels disagree with span");
  }
  if (candidates[static_cast<std::size_t>(correct_slot - 1)].empty()) {
    throw InvalidInput("correct slot holds a dummy candidate");
  }
}

std::string TrainingExample::to_line() const {
  std::string out;
  out.reserve(hyp.size() * 4 + 128);
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out.push_back(hyp[i]);
  }
  out.push_back('\t');
  for (std::size_t s = 0; s < candidates.size(); ++s) {
    if (s > 0) out.push_back(';');
    out += candidates[s].empty() ? std::string(kDummyCandidate) : candidates[s].str();
  }
  out.push_back('\t');
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += std::to_string(labels[i]);
  }
  out.push_back('\t');
  out += std::to_string(correct_slot);
  return out;
}

TrainingExample TrainingExample::parse(std::string_view line, std::size_t line_no) {
  const auto f = io::split(line, '\t');
  if (f.size() != 4) throw ParseError("expected 4 tab-separated columns", line_no);
  TrainingExample ex;
  try {
    std::string hyp;
    for (const auto tok : io::split(f[0], ' ')) {
      if (tok.size() != 1) throw ParseError("hypothesis must be single characters", line_no);
      hyp.push_back(tok[0]);
    }
    ex.hyp = Phrase::from_normalized(hyp);
    const auto cands = io::split(f[1], ';');
    if (cands.size() != kCandidateSlots) throw ParseError("expected 10 candidates", line_no);
    for (std::size_t s = 0; s < cands.size(); ++s) {
      if (cands[s] != kDummyCandidate) ex.candidates[s] = Phrase::from_normalized(cands[s]);
    }
    if (!f[2].empty()) {
      for (const auto tok : io::split(f[2], ' ')) ex.labels.push_back(static_cast<int>(io::parse_int(tok, line_no)));
    }
    ex.correct_slot = static_cast<int>(io::parse_int(f[3], line_no));
    const auto first = std::find_if(ex.labels.begin(), ex.labels.end(), [](int l) { return l != 0; });
    if (first != ex.labels.end()) {
      const auto last = std::find_if(ex.labels.rbegin(), ex.labels.rend(), [](int l) { return l != 0; });
      ex.span = std::make_pair(static_cast<int>(first - ex.labels.begin()),
                               static_cast<int>(ex.labels.rend() - last));
    }
    ex.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(e.what(), line_no);
  }
  return ex;
}

std::vector<ContextSentence> read_contexts(std::istream& in) {
  std::vector<ContextSentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = io::split(line, '\t');
    if (f.size() != 4) throw ParseError("expected 4 tab-separated columns", line_no);
    ContextSentence c;
    c.sentence = std::string(f[0]);
    c.char_start = static_cast<int>(io::parse_int(f[1], line_no));
    c.char_end = static_cast<int>(io::parse_int(f[2], line_no));
    if (c.char_start < 0 || c.char_end <= c.char_start || static_cast<std::size_t>(c.char_end) > c.sentence.size()) {
      throw ParseError("phrase span out of range", line_no);
    }
    try {
      c.phrase = Phrase::normalize(f[3]);
      const auto annotated = Phrase::normalize(std::string_view(c.sentence).substr(
          static_cast<std::size_t>(c.char_start), static_cast<std::size_t>(c.char_end - c.char_start)));
      if (annotated != c.phrase || c.phrase.empty()) throw ParseError("annotated span does not match phrase", line_no);
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), line_no);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ContextSentence> load_contexts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_contexts(in);
}

void NegativeMix::validate() const {
  if (random < 0 || similar < 0 || intersecting < 0 || random + similar + intersecting != kCandidateSlots - 1) {
    throw ConfigError("negative mix must be non-negative and sum to 9");
  }
}

ExampleBuilder::ExampleBuilder(const UserVocabulary& pool, const PhraseNgramIndex& index,
                               const CorruptionModel& model, NegativeMix mix)
    : pool_(pool), index_(index), model_(model), mix_(mix) {
  mix_.validate();
  for (PhraseId id = 0; id < pool_.size(); ++id) {
    auto words = pool_[id].words();
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    for (const auto& w : words) by_word_[w].push_back(id);
  }
}

std::vector<PhraseId> ExampleBuilder::similar_to(const Phrase& phrase) const {
  RetrievalConfig cfg;
  cfg.top_k = 2 * kCandidateSlots;
  cfg.coverage_threshold = 0.0;
  cfg.min_hits = 1;
  const auto set = retrieve(Fragment::of(phrase), index_, cfg);
  std::vector<PhraseId> out;
  for (const auto& c : set.candidates) {
    if (c.phrase != phrase) out.push_back(c.phrase_id);
  }
  return out;
}

std::vector<PhraseId> ExampleBuilder::intersecting(const Phrase& phrase) const {
  std::vector<PhraseId> out;
  for (const auto& w : phrase.words()) {
    const auto it = by_word_.find(w);
    if (it == by_word_.end()) continue;
    for (const PhraseId id : it->second) {
      if (pool_[id] != phrase) out.push_back(id);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Draws up to `count` ids from `from` without replacement, skipping any
// already in `chosen`.
void draw(std::vector<PhraseId> from, int count, std::vector<PhraseId>& chosen, Rng& rng) {
  std::erase_if(from, [&](PhraseId id) { return std::find(chosen.begin(), chosen.end(), id) != chosen.end(); });
  for (int k = 0; k < count && !from.empty(); ++k) {
    const std::size_t pick = rng.below(from.size());
    chosen.push_back(from[pick]);
    from.erase(from.begin() + static_cast<std::ptrdiff_t>(pick));
  }
}

}  // namespace

TrainingExample ExampleBuilder::build(const ContextSentence& context, Rng& rng, bool clean) const {
  const Phrase& phrase = context.phrase;
  const auto self = pool_.find(phrase);
  const std::size_t available = pool_.size() - (self ? 1 : 0);
  const int negatives_needed = clean ? kCandidateSlots : kCandidateSlots - 1;
  if (available < static_cast<std::size_t>(negatives_needed)) {
    throw InvalidInput("random negative pool has " + std::to_string(available) + " phrases, need " +
                       std::to_string(negatives_needed));
  }

  std::vector<PhraseId> negatives;
  draw(similar_to(phrase), mix_.similar, negatives, rng);
  draw(intersecting(phrase), mix_.intersecting, negatives, rng);
  // Random fill: uniform over the pool minus the phrase and what is chosen.
  while (static_cast<int>(negatives.size()) < negatives_needed) {
    const auto id = static_cast<PhraseId>(rng.below(pool_.size()));
    if ((self && id == *self) || std::find(negatives.begin(), negatives.end(), id) != negatives.end()) continue;
    negatives.push_back(id);
  }
  // Pool order must carry no signal about which slot is which.
  for (std::size_t i = negatives.size(); i > 1; --i) std::swap(negatives[i - 1], negatives[rng.below(i)]);

  TrainingExample ex;
  const std::string_view sentence(context.sentence);
  const auto start = static_cast<std::size_t>(context.char_start);
  const auto stop = static_cast<std::size_t>(context.char_end);
  if (clean) {
    ex.hyp = Phrase::normalize(sentence);
  } else {
    const Phrase prefix = Phrase::normalize(sentence.substr(0, start));
    const Phrase suffix = Phrase::normalize(sentence.substr(stop));
    const Phrase corrupted = model_.corrupt(phrase, rng);
    std::string hyp = prefix.str();
    if (!hyp.empty()) hyp.push_back(kWordSeparator);
    const int span_begin = static_cast<int>(hyp.size());
    hyp += corrupted.str();
    const int span_end = static_cast<int>(hyp.size());
    if (!suffix.empty()) hyp += kWordSeparator + suffix.str();
    ex.hyp = Phrase::from_normalized(hyp);
    ex.span = std::make_pair(span_begin, span_end);
    ex.correct_slot = 1 + static_cast<int>(rng.below(kCandidateSlots));
  }

  std::size_t next_negative = 0;
  for (int s = 1; s <= kCandidateSlots; ++s) {
    ex.candidates[static_cast<std::size_t>(s - 1)] =
        s == ex.correct_slot ? phrase : pool_[negatives[next_negative++]];
  }

  ex.labels.assign(ex.hyp.size(), 0);
  if (ex.span) {
    for (int i = ex.span->first; i < ex.span->second; ++i) ex.labels[static_cast<std::size_t>(i)] = ex.correct_slot;
  }
  ex.validate();
  return ex;
}

std::vector<TrainingExample> build_dataset(std::span<const ContextSentence> contexts, const UserVocabulary& pool,
                                           const CorruptionModel& model, const PhraseNgramIndex& index,
                                           long long n_examples, const DatasetConfig& config, std::uint64_t seed,
                                           int jobs) {
  if (n_examples <= 0) throw InvalidInput("build_dataset: n_examples must be positive");
  if (contexts.empty()) throw InvalidInput("build_dataset: no contexts");
  if (!(config.clean_fraction >= 0.0 && config.clean_fraction <= 1.0)) {
    throw ConfigError("clean_fraction must be in [0, 1]");
  }
  const auto n = static_cast<std::size_t>(n_examples);
  const auto n_clean = static_cast<std::size_t>(std::llround(static_cast<double>(n_examples) * config.clean_fraction));

  // Exactly n_clean examples are clean; which ones is a seeded shuffle.
  std::vector<char> clean(n, 0);
  std::fill(clean.begin(), clean.begin() + static_cast<std::ptrdiff_t>(n_clean), 1);
  Rng shuffler(derive_seed(seed, UINT64_MAX));
  for (std::size_t i = n; i > 1; --i) std::swap(clean[i - 1], clean[shuffler.below(i)]);

  ExampleBuilder builder(pool, index, model, config.mix);
  std::vector<TrainingExample> out(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    const auto& context = contexts[rng.below(contexts.size())];
    out[i] = builder.build(context, rng, clean[i] != 0);
  });
  return out;
}

void write_dataset(std::ostream& out, std::span<const TrainingExample> examples) {
  for (const auto& ex : examples) out << ex.to_line() << '\n';
}

std::vector<TrainingExample> read_dataset(std::istream& in) {
  std::vector<TrainingExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(TrainingExample::parse(line, line_no));
  }
  return out;
}

}  // namespace ctxspell
