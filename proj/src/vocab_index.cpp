#include "ctxspell/vocab_index.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "ctxspell/errors.hpp"
#include "ctxspell/io.hpp"

namespace ctxspell {

UserVocabulary::UserVocabulary(std::vector<Phrase> phrases) : phrases_(std::move(phrases)) {
  ids_.reserve(phrases_.size());
  for (std::size_t i = 0; i < phrases_.size(); ++i) {
    if (phrases_[i].empty()) throw InvalidInput("vocabulary contains an empty phrase");
    if (!ids_.emplace(phrases_[i].str(), static_cast<PhraseId>(i)).second) {
      throw InvalidInput("duplicate vocabulary phrase '" + phrases_[i].display() + "'");
    }
  }
}

UserVocabulary UserVocabulary::read(std::istream& in) {
  std::vector<Phrase> phrases;
  std::unordered_map<std::string, bool> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Phrase p;
    try {
      p = Phrase::normalize(line);
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), line_no);
    }
    if (p.empty() || !seen.emplace(p.str(), true).second) continue;
    phrases.push_back(std::move(p));
  }
  return UserVocabulary(std::move(phrases));
}

UserVocabulary UserVocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read(in);
}

std::optional<PhraseId> UserVocabulary::find(const Phrase& phrase) const {
  const auto it = ids_.find(phrase.str());
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void IndexConfig::validate() const {
  if (min_len < 1 || max_len < min_len) throw ConfigError("index n-gram length range must satisfy 1 <= min <= max");
  if (max_len > 255) throw ConfigError("index max_len must be <= 255");
  if (variants_per_ngram < 0) throw ConfigError("index variants_per_ngram must be >= 0");
  if (!(min_prob >= 0.0 && min_prob < 1.0)) throw ConfigError("index min_prob must be in [0, 1)");
  if (posting_cap < 1) throw ConfigError("index posting_cap must be >= 1");
}

std::span<const Posting> PhraseNgramIndex::lookup(std::string_view key) const {
  const auto it = entries_.find(std::string(key));
  if (it == entries_.end()) return {};
  return it->second;
}

std::size_t PhraseNgramIndex::posting_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [key, list] : entries_) n += list.size();
  return n;
}

std::vector<std::string> PhraseNgramIndex::keys() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [key, list] : entries_) out.push_back(key);
  std::sort(out.begin(), out.end());
  return out;
}

void PhraseNgramIndex::refresh_key_range() {
  min_key_len_ = 0;
  max_key_len_ = 0;
  for (const auto& [key, list] : entries_) {
    const int len = static_cast<int>(key.size());
    if (min_key_len_ == 0 || len < min_key_len_) min_key_len_ = len;
    max_key_len_ = std::max(max_key_len_, len);
  }
}

PhraseNgramIndex build_index(const UserVocabulary& vocab, std::span<const NgramMapping> mappings,
                             const IndexConfig& config) {
  config.validate();
  if (vocab.empty()) throw InvalidInput("build_index: empty vocabulary");
  for (const auto& p : vocab.phrases()) {
    if (p.size() > UINT16_MAX) throw InvalidInput("build_index: phrase too long");
  }

  // Candidate variants per source n-gram, most probable first.
  struct Variant {
    std::string key;
    double prob;
  };
  std::unordered_map<std::string, std::vector<Variant>> variants;
  for (const auto& m : mappings) {
    const std::string src = m.src_chars();
    const int len = static_cast<int>(src.size());
    if (len < config.min_len || len > config.max_len || m.is_identity()) continue;
    if (!(m.cond_prob() > config.min_prob)) continue;
    std::string key = m.dst_flat();
    if (static_cast<int>(key.size()) < config.min_len || key.size() > 255) continue;
    variants[src].push_back({std::move(key), m.cond_prob()});
  }
  for (auto& [src, list] : variants) {
    std::stable_sort(list.begin(), list.end(), [](const Variant& a, const Variant& b) {
      if (a.prob != b.prob) return a.prob > b.prob;
      return a.key < b.key;
    });
    std::vector<Variant> distinct;
    for (auto& v : list) {
      if (static_cast<int>(distinct.size()) >= config.variants_per_ngram) break;
      const bool dup = std::any_of(distinct.begin(), distinct.end(),
                                   [&](const Variant& d) { return d.key == v.key; });
      if (!dup) distinct.push_back(std::move(v));
    }
    list = std::move(distinct);
  }

  struct Weighted {
    Posting posting;
    double prob;
  };
  std::unordered_map<std::string, std::vector<Weighted>> staged;
  for (PhraseId id = 0; id < vocab.size(); ++id) {
    const std::string& text = vocab[id].str();
    for (int len = config.min_len; len <= config.max_len; ++len) {
      if (static_cast<std::size_t>(len) > text.size()) break;
      for (std::size_t pos = 0; pos + static_cast<std::size_t>(len) <= text.size(); ++pos) {
        const std::string gram = text.substr(pos, static_cast<std::size_t>(len));
        const Posting original{id, static_cast<std::uint16_t>(pos), static_cast<std::uint8_t>(len), false};
        staged[gram].push_back({original, 1.0});
        const auto it = variants.find(gram);
        if (it == variants.end()) continue;
        for (const auto& v : it->second) {
          if (v.key == gram) continue;
          Posting p = original;
          p.misspelled = true;
          staged[v.key].push_back({p, v.prob});
        }
      }
    }
  }

  PhraseNgramIndex index;
  index.vocab_ = vocab;
  index.config_ = config;
  index.entries_.reserve(staged.size());
  const auto cap = static_cast<std::size_t>(config.posting_cap);
  for (auto& [key, list] : staged) {
    // Highest-probability duplicate survives.
    std::sort(list.begin(), list.end(), [](const Weighted& a, const Weighted& b) {
      if (a.posting != b.posting) return a.posting < b.posting;
      return a.prob > b.prob;
    });
    list.erase(std::unique(list.begin(), list.end(),
                           [](const Weighted& a, const Weighted& b) { return a.posting == b.posting; }),
               list.end());
    if (list.size() > cap) {
      std::stable_sort(list.begin(), list.end(), [](const Weighted& a, const Weighted& b) {
        if (a.posting.misspelled != b.posting.misspelled) return !a.posting.misspelled;
        if (a.prob != b.prob) return a.prob > b.prob;
        return a.posting < b.posting;
      });
      std::size_t keep = list.size();
      while (keep > cap && list[keep - 1].posting.misspelled) --keep;
      list.resize(keep);
    }
    std::vector<Posting> postings;
    postings.reserve(list.size());
    for (const auto& w : list) postings.push_back(w.posting);
    std::sort(postings.begin(), postings.end());
    index.entries_.emplace(key, std::move(postings));
  }
  index.refresh_key_range();
  return index;
}

namespace {
constexpr std::string_view kFormatTag = "#ctxspell-index\tv1";
}

void PhraseNgramIndex::write(std::ostream& out) const {
  out << kFormatTag << '\n';
  out << "#config\tmin_len=" << config_.min_len << "\tmax_len=" << config_.max_len
      << "\tvariants_per_ngram=" << config_.variants_per_ngram
      << "\tmin_prob=" << io::format_double(config_.min_prob) << "\tposting_cap=" << config_.posting_cap
      << '\n';
  for (PhraseId id = 0; id < vocab_.size(); ++id) out << "#phrase\t" << id << '\t' << vocab_[id].str() << '\n';
  out << "#columns\tkey\tphrase_id\tphrase_pos\tsrc_len\tmisspelled\n";
  for (const auto& key : keys()) {
    for (const auto& p : entries_.at(key)) {
      out << key << '\t' << p.phrase_id << '\t' << p.phrase_pos << '\t' << static_cast<int>(p.src_len) << '\t'
          << (p.misspelled ? 1 : 0) << '\n';
    }
  }
}

PhraseNgramIndex PhraseNgramIndex::read(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next() || line != kFormatTag) throw ParseError("missing index format tag", 1);
  if (!next()) throw ParseError("missing #config line", 2);
  PhraseNgramIndex index;
  {
    const auto f = io::split(line, '\t');
    if (f.size() != 6 || f[0] != "#config") throw ParseError("bad #config line", line_no);
    std::map<std::string, std::string_view> kv;
    for (std::size_t k = 1; k < f.size(); ++k) {
      const auto eq = f[k].find('=');
      if (eq == std::string_view::npos) throw ParseError("bad config field", line_no);
      kv[std::string(f[k].substr(0, eq))] = f[k].substr(eq + 1);
    }
    auto get = [&](const char* name) {
      const auto it = kv.find(name);
      if (it == kv.end()) throw ParseError(std::string("missing config field ") + name, line_no);
      return it->second;
    };
    index.config_.min_len = static_cast<int>(io::parse_int(get("min_len"), line_no));
    index.config_.max_len = static_cast<int>(io::parse_int(get("max_len"), line_no));
    index.config_.variants_per_ngram = static_cast<int>(io::parse_int(get("variants_per_ngram"), line_no));
    index.config_.min_prob = io::parse_double(get("min_prob"), line_no);
    index.config_.posting_cap = static_cast<int>(io::parse_int(get("posting_cap"), line_no));
    try {
      index.config_.validate();
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  std::vector<Phrase> phrases;
  bool have_columns = false;
  while (next()) {
    if (line.empty()) continue;
    const auto f = io::split(line, '\t');
    if (!have_columns) {
      if (f[0] == "#phrase") {
        if (f.size() != 3) throw ParseError("bad #phrase line", line_no);
        if (io::parse_int(f[1], line_no) != static_cast<long long>(phrases.size())) {
          throw ParseError("phrase ids must be consecutive from 0", line_no);
        }
        try {
          phrases.push_back(Phrase::from_normalized(f[2]));
        } catch (const InvalidInput& e) {
          throw ParseError(e.what(), line_no);
        }
        continue;
      }
      if (f[0] == "#columns") {
        have_columns = true;
        try {
          index.vocab_ = UserVocabulary(std::move(phrases));
        } catch (const InvalidInput& e) {
          throw ParseError(e.what(), line_no);
        }
        continue;
      }
      throw ParseError("unexpected line before #columns", line_no);
    }
    if (f.size() != 5) throw ParseError("expected 5 tab-separated columns", line_no);
    if (f[0].empty()) throw ParseError("empty key", line_no);
    const auto id = io::parse_int(f[1], line_no);
    const auto pos = io::parse_int(f[2], line_no);
    const auto len = io::parse_int(f[3], line_no);
    const auto mis = io::parse_int(f[4], line_no);
    if (id < 0 || static_cast<std::size_t>(id) >= index.vocab_.size()) throw ParseError("phrase_id out of range", line_no);
    if (len < 1 || pos < 0 || static_cast<std::size_t>(pos + len) > index.vocab_[static_cast<PhraseId>(id)].size()) {
      throw ParseError("posting outside its phrase", line_no);
    }
    if (mis != 0 && mis != 1) throw ParseError("misspelled flag must be 0 or 1", line_no);
    index.entries_[std::string(f[0])].push_back(
        {static_cast<PhraseId>(id), static_cast<std::uint16_t>(pos), static_cast<std::uint8_t>(len), mis == 1});
  }
  if (!have_columns) throw ParseError("missing #columns line", line_no);
  for (auto& [key, list] : index.entries_) std::sort(list.begin(), list.end());
  index.refresh_key_range();
  return index;
}

void PhraseNgramIndex::save(const std::filesystem::path& path) const {
  std::ostringstream out;
  write(out);
  io::write_file_atomic(path, out.str());
}

PhraseNgramIndex PhraseNgramIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read(in);
}

}  // namespace ctxspell
