#include "ctxspell/run_config.hpp"

#include <charconv>

#include "ctxspell/errors.hpp"
#include "ctxspell/io.hpp"

namespace ctxspell {

namespace {

struct Field {
  const char* key;
  const char* help;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

int to_int(std::string_view key, std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("config key '" + std::string(key) + "': not an integer: '" + std::string(v) + "'");
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  try {
    return io::parse_double(v, 0);
  } catch (const ParseError&) {
    throw ConfigError("config key '" + std::string(key) + "': not a number: '" + std::string(v) + "'");
  }
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected true or false, got '" + std::string(v) + "'");
}

#define INT_FIELD(name, help, member) \
  Field{name, help, [](RunConfig& c, std::string_view v) { c.member = to_int(name, v); }, \
        [](const RunConfig& c) { return std::to_string(c.member); }}
#define REAL_FIELD(name, help, member) \
  Field{name, help, [](RunConfig& c, std::string_view v) { c.member = to_double(name, v); }, \
        [](const RunConfig& c) { return io::format_double(c.member); }}
#define BOOL_FIELD(name, help, member) \
  Field{name, help, [](RunConfig& c, std::string_view v) { c.member = to_bool(name, v); }, \
        [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      INT_FIELD("index.min_len", "shortest n-gram key", index.min_len),
      INT_FIELD("index.max_len", "longest n-gram key", index.max_len),
      INT_FIELD("index.variants_per_ngram", "misspelled keys per n-gram", index.variants_per_ngram),
      REAL_FIELD("index.min_prob", "mapping probability needed for a variant key", index.min_prob),
      INT_FIELD("index.posting_cap", "posting list length cap", index.posting_cap),
      INT_FIELD("retrieval.top_k", "candidates per fragment", pipeline.retrieval.top_k),
      REAL_FIELD("retrieval.coverage_threshold", "minimum phrase coverage", pipeline.retrieval.coverage_threshold),
      INT_FIELD("retrieval.min_hits", "minimum covered fragment characters", pipeline.retrieval.min_hits),
      INT_FIELD("retrieval.offset_bucket_width", "offset bucket width", pipeline.retrieval.offset_bucket_width),
      REAL_FIELD("matcher.tau", "accept when normalized cost < tau", pipeline.matcher.tau),
      BOOL_FIELD("matcher.snap_to_words", "snap spans to word boundaries", pipeline.matcher.snap_to_words),
      INT_FIELD("pipeline.min_words", "minimum fragment length in words", pipeline.min_words),
      INT_FIELD("pipeline.max_words", "maximum fragment length in words", pipeline.max_words),
      INT_FIELD("pipeline.overlap", "words shared by neighbouring fragments", pipeline.overlap),
      BOOL_FIELD("pipeline.frequent_word_guard", "reject cheap rewrites of frequent words",
                 pipeline.frequent_word_guard),
      INT_FIELD("mappings.rounds", "cost re-estimation rounds", mapping_rounds),
      INT_FIELD("mappings.max_len", "longest source n-gram", mapping_max_len),
      REAL_FIELD("mappings.min_prob", "keep mappings with probability above this", mapping_min_prob),
      REAL_FIELD("dataset.clean_fraction", "fraction of uncorrupted examples", dataset.clean_fraction),
      INT_FIELD("dataset.mix_random", "random negatives per example", dataset.mix.random),
      INT_FIELD("dataset.mix_similar", "similar negatives per example", dataset.mix.similar),
      INT_FIELD("dataset.mix_intersecting", "word-sharing negatives per example", dataset.mix.intersecting),
      REAL_FIELD("corrupt.intensity", "scale of non-identity corruption mass", corrupt_intensity),
      Field{"seed", "random seed",
            [](RunConfig& c, std::string_view v) {
              std::uint64_t out = 0;
              const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
              if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
                throw ConfigError("config key 'seed': not an unsigned integer: '" + std::string(v) + "'");
              }
              c.seed = out;
            },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
  };
  return table;
}

#undef INT_FIELD
#undef REAL_FIELD
#undef BOOL_FIELD

const Field& find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (key == f.key) return f;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) { find_field(key).set(*this, value); }

std::string RunConfig::get(std::string_view key) const { return find_field(key).get(*this); }

void RunConfig::parse(std::string_view text) {
  std::size_t line_no = 0;
  for (const auto raw : io::split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::load(const std::filesystem::path& path) {
  std::string text;
  for (const auto& line : io::read_lines(path)) {
    text += line;
    text += '\n';
  }
  parse(text);
}

void RunConfig::validate() const {
  index.validate();
  pipeline.validate();
  if (mapping_rounds < 1) throw ConfigError("mappings.rounds must be >= 1");
  if (mapping_max_len < 1 || mapping_max_len > 255) throw ConfigError("mappings.max_len must be in [1, 255]");
  if (!(mapping_min_prob >= 0.0 && mapping_min_prob < 1.0)) throw ConfigError("mappings.min_prob must be in [0, 1)");
  if (!(dataset.clean_fraction >= 0.0 && dataset.clean_fraction <= 1.0)) {
    throw ConfigError("dataset.clean_fraction must be in [0, 1]");
  }
  dataset.mix.validate();
  if (!(corrupt_intensity >= 0.0 && corrupt_intensity <= 1.0)) throw ConfigError("corrupt.intensity must be in [0, 1]");
}

const std::vector<RunConfig::KeyInfo>& RunConfig::keys() {
  static const std::vector<KeyInfo> out = [] {
    std::vector<KeyInfo> v;
    for (const auto& f : fields()) v.push_back({f.key, f.help});
    return v;
  }();
  return out;
}

}  // namespace ctxspell
