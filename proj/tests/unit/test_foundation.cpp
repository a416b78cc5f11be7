#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctxspell/edit_costs.hpp"
#include "ctxspell/errors.hpp"
#include "ctxspell/frequent_words.hpp"
#include "ctxspell/io.hpp"
#include "ctxspell/phrase.hpp"
#include "ctxspell/rng.hpp"
#include "ctxspell/run_config.hpp"

using namespace ctxspell;

TEST_CASE("normalize lowercases, keeps apostrophes, maps spaces to underscores") {
  CHECK(Phrase::normalize("Tyne  Wear Derby").str() == "tyne_wear_derby");
  CHECK(Phrase::normalize("  O'Brien, Jr. ").str() == "o'brien_jr");
  CHECK(Phrase::normalize("a_b - c").str() == "a_b_c");
  CHECK(Phrase::normalize("...").empty());
  CHECK_THROWS_AS(Phrase::normalize("caf\xc3\xa9"), InvalidInput);
}

TEST_CASE("from_normalized rejects broken invariants") {
  CHECK(Phrase::from_normalized("ab_cd").words() == std::vector<std::string>{"ab", "cd"});
  CHECK_THROWS_AS(Phrase::from_normalized("_ab"), InvalidInput);
  CHECK_THROWS_AS(Phrase::from_normalized("ab_"), InvalidInput);
  CHECK_THROWS_AS(Phrase::from_normalized("a__b"), InvalidInput);
  CHECK_THROWS_AS(Phrase::from_normalized("Ab"), InvalidInput);
  CHECK(is_normalized("it's_42"));
  CHECK_FALSE(is_normalized("it s"));
}

TEST_CASE("phrase display and word helpers") {
  const auto p = Phrase::from_words({"tyne", "wear", "derby"});
  CHECK(p.display() == "tyne wear derby");
  CHECK(p.word_count() == 3);
  CHECK(Phrase().word_count() == 0);
  CHECK(normalize_words("Came from, SCHLEIDDORF!") == std::vector<std::string>{"came", "from", "schleiddorf"});
}

TEST_CASE("alphabet indexing is a bijection") {
  for (int i = 0; i < kAlphabetSize; ++i) CHECK(symbol_index(symbol_at(i)) == i);
  CHECK(symbol_index('A') == -1);
  CHECK(symbol_index(' ') == -1);
}

TEST_CASE("strict number parsing") {
  CHECK(io::parse_int("42", 1) == 42);
  CHECK(io::parse_double("0.25", 1) == 0.25);
  CHECK_THROWS_AS(io::parse_int("4x", 3), ParseError);
  CHECK_THROWS_AS(io::parse_int("", 3), ParseError);
  try {
    io::parse_double("nope", 7);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 4.532599493153256, 1e-300, 123456789.0}) {
    CHECK(io::parse_double(io::format_double(v), 0) == v);
  }
  CHECK(io::format_fixed(66.666, 2) == "66.67");
}

TEST_CASE("atomic write replaces the file and leaves no temporary") {
  const auto dir = std::filesystem::temp_directory_path() / "ctxspell_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  io::write_file_atomic(path, "first\n");
  io::write_file_atomic(path, "second\n");
  CHECK(io::read_lines(path) == std::vector<std::string>{"second"});
  CHECK_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("rng draws are reproducible and in range") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(13);
    CHECK(x == b.below(13));
    CHECK(x < 13);
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK((u >= 0.0 && u < 1.0));
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("edit cost table: unit costs, setters, relative view") {
  const auto unit = EditCostTable::unit();
  CHECK(unit.sub('a', 'a') == 0.0);
  CHECK(unit.sub('a', 'b') == 1.0);
  CHECK(unit.ins('_') == 1.0);
  CHECK(unit.del('\'') == 1.0);
  CHECK(unit.identity_is_cheapest());

  EditCostTable t(5.0);
  t.set_sub('a', 'a', 0.5);
  t.set_sub('a', 'e', 2.0);
  t.set_del('a', 3.0);
  CHECK(t.covers('a'));
  CHECK_FALSE(t.covers('b'));
  CHECK_THROWS_AS(t.set_sub('A', 'a', 1.0), InvalidInput);
  CHECK_THROWS_AS(t.set_ins('a', -1.0), InvalidInput);
  CHECK_THROWS_AS(t.set_ins('a', std::nan("")), InvalidInput);
  const auto rel = t.relative_to_identity();
  CHECK(rel.sub('a', 'a') == 0.0);
  CHECK(rel.sub('a', 'e') == doctest::Approx(1.5));
  CHECK(rel.del('a') == doctest::Approx(2.5));
}

TEST_CASE("edit cost table round-trips through text") {
  EditCostTable t(4.25);
  t.set_sub('a', 'a', 0.125);
  t.set_sub('a', 'e', 1.0 / 3.0);
  t.set_ins('_', 2.5);
  t.set_del('z', 7.0);
  std::stringstream s;
  t.write(s);
  CHECK(EditCostTable::read(s) == t);
  std::stringstream bad("kind\tfrom\tto\tcost\nsub\ta\tb\tx\n");
  CHECK_THROWS_AS(EditCostTable::read(bad), ParseError);
}

TEST_CASE("frequent word list is bundled") {
  CHECK(frequent_word_list().size() == 5000);
  CHECK(frequent_word_list().front() == "the");
  CHECK(frequent_words().count("people") == 1);
  CHECK(frequent_words().count("schlaitdorf") == 0);
}

TEST_CASE("run config: keys, overrides, validation") {
  RunConfig cfg;
  cfg.parse("# comment\nmatcher.tau = 0.4\n\nretrieval.top_k=5\nseed=9\n");
  CHECK(cfg.pipeline.matcher.tau == 0.4);
  CHECK(cfg.pipeline.retrieval.top_k == 5);
  CHECK(cfg.seed == 9);
  CHECK(cfg.get("retrieval.top_k") == "5");
  CHECK_THROWS_AS(cfg.set("no.such.key", "1"), ConfigError);
  CHECK_THROWS_AS(cfg.set("retrieval.top_k", "ten"), ConfigError);
  CHECK_THROWS_AS(cfg.parse("matcher.tau\n"), ConfigError);
  cfg.set("matcher.snap_to_words", "false");
  CHECK_FALSE(cfg.pipeline.matcher.snap_to_words);
  CHECK_NOTHROW(cfg.validate());
  cfg.set("retrieval.coverage_threshold", "1.5");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("run config: every key round-trips through get/set") {
  RunConfig a;
  RunConfig b;
  for (const auto& k : RunConfig::keys()) b.set(k.key, a.get(k.key));
  for (const auto& k : RunConfig::keys()) CHECK(b.get(k.key) == a.get(k.key));
  CHECK(RunConfig::keys().size() >= 20);
}

TEST_CASE("run config: every range check fires") {
  const std::vector<std::pair<std::string, std::string>> bad = {
      {"index.min_len", "0"},           {"index.max_len", "1"},          {"index.variants_per_ngram", "-1"},
      {"index.min_prob", "1"},          {"index.posting_cap", "0"},      {"retrieval.top_k", "0"},
      {"retrieval.min_hits", "-1"},     {"retrieval.offset_bucket_width", "0"}, {"matcher.tau", "0"},
      {"pipeline.min_words", "0"},      {"pipeline.max_words", "1"},     {"pipeline.overlap", "-1"},
      {"mappings.rounds", "0"},         {"mappings.max_len", "0"},       {"mappings.min_prob", "1"},
      {"dataset.clean_fraction", "2"},  {"dataset.mix_random", "5"},     {"corrupt.intensity", "1.5"},
  };
  for (const auto& [key, value] : bad) {
    RunConfig cfg;
    cfg.set(key, value);
    CHECK_THROWS_AS_MESSAGE(cfg.validate(), ConfigError, key);
  }
}
