#include <doctest.h>

#include <map>
#include <sstream>

#include "ctxspell/alignment.hpp"
#include "ctxspell/errors.hpp"
#include "ctxspell/ngram_mappings.hpp"
#include "oracles.hpp"

using namespace ctxspell;

namespace {

std::vector<AlignedPair> unit_alignments(std::initializer_list<std::tuple<const char*, const char*, int>> rows) {
  std::vector<ParallelPair> corpus;
  for (const auto& [a, b, n] : rows) {
    for (int i = 0; i < n; ++i) corpus.push_back({Phrase::from_normalized(a), Phrase::from_normalized(b)});
  }
  return align_corpus(corpus, EditCostTable::unit());
}

const NgramMapping* find(const std::vector<NgramMapping>& ms, std::string_view src, std::string_view dst) {
  for (const auto& m : ms) {
    if (m.src == src && m.dst == dst) return &m;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("extract_mappings: luc -> luk counts") {
  const auto ms = extract_mappings(unit_alignments({{"luc", "luc", 8}, {"luc", "luk", 2}}));
  const auto* m = find(ms, "l u c", "l u k");
  REQUIRE(m != nullptr);
  CHECK(m->joint_count == 2);
  CHECK(m->src_count == 10);
  CHECK(m->cond_prob() == 0.2);
  const auto* id = find(ms, "l u c", "l u c");
  REQUIRE(id != nullptr);
  CHECK(id->is_identity());
  CHECK(id->joint_count == 8);
}

TEST_CASE("extract_mappings: joint counts sum to src_count before pruning") {
  const auto alignments = unit_alignments({{"lucas", "lookez", 3}, {"luc", "luk", 2}, {"tyne_wear", "time_we", 1}});
  const auto ms = extract_mappings(alignments, 5, 0.0);
  std::map<std::string, std::int64_t> sums;
  std::map<std::string, std::int64_t> src_counts;
  for (const auto& m : ms) {
    sums[m.src] += m.joint_count;
    src_counts[m.src] = m.src_count;
    CHECK(m.src_chars().size() <= 5);
  }
  for (const auto& [src, sum] : sums) CHECK(sum == src_counts[src]);
}

TEST_CASE("extract_mappings: threshold semantics") {
  const auto ms = extract_mappings(unit_alignments({{"abc", "abd", 1}}), 5, 0.99);
  CHECK_FALSE(ms.empty());
  for (const auto& m : ms) CHECK(m.cond_prob() == 1.0);
  CHECK(extract_mappings(std::vector<AlignedPair>{}).empty());
}

TEST_CASE("extract_mappings: probabilities per src sum to at most one") {
  const auto ms = extract_mappings(unit_alignments({{"lucas", "lookez", 3}, {"lucas", "lucas", 30}, {"luc", "lu", 2}}));
  std::map<std::string, double> total;
  for (const auto& m : ms) total[m.src] += m.cond_prob();
  for (const auto& [src, p] : total) CHECK(p <= 1.0 + 1e-12);
}

TEST_CASE("mapping rendering helpers") {
  const NgramMapping m{"l u c", "l u k+e", 565, 9657};
  CHECK(m.src_chars() == "luc");
  CHECK(m.dst_flat() == "luke");
  CHECK_FALSE(m.is_identity());
  const NgramMapping d{"l u c", "l u <DEL>", 195, 9657};
  CHECK(d.dst_flat() == "lu");
}

TEST_CASE("published mapping rows round-trip byte-identically") {
  const std::string text =
      "src\tdst\tjoint_count\tsrc_count\n"
      "l u c\tl u c\t7432\t9657\n"
      "l u c\tl u k+e\t565\t9657\n"
      "l u c\tl o c\t561\t9657\n"
      "l u c\tl u k\t382\t9657\n"
      "l u c\tl o+o k\t298\t9657\n"
      "l u c\tl u s\t224\t9657\n"
      "l u c\tl u <DEL>\t195\t9657\n";
  std::istringstream in(text);
  const auto ms = read_mappings(in);
  REQUIRE(ms.size() == 7);
  CHECK(ms[1].dst == "l u k+e");
  CHECK(ms[1].joint_count == 565);
  std::ostringstream out;
  write_mappings(out, ms);
  CHECK(out.str() == text);
}

TEST_CASE("mapping files: empty, random round-trip, malformed rows") {
  {
    std::ostringstream out;
    write_mappings(out, std::vector<NgramMapping>{});
    CHECK(out.str() == "src\tdst\tjoint_count\tsrc_count\n");
    std::istringstream in(out.str());
    CHECK(read_mappings(in).empty());
  }
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<NgramMapping> ms;
    const int rows = rng.between(1, 30);
    for (int r = 0; r < rows; ++r) {
      const auto src = oracle::random_string(rng, 1, 5, "abc_");
      std::string rendered_src;
      std::string rendered_dst;
      for (std::size_t i = 0; i < src.size(); ++i) {
        if (i) {
          rendered_src += ' ';
          rendered_dst += ' ';
        }
        rendered_src += src[i];
        const int kind = static_cast<int>(rng.below(3));
        rendered_dst += kind == 0 ? std::string("<DEL>") : kind == 1 ? std::string(1, src[i]) : std::string("x+y");
      }
      const std::int64_t total = rng.between(10, 100);
      ms.push_back({rendered_src, rendered_dst, rng.between(1, static_cast<int>(total)), total});
    }
    sort_mappings(ms);
    std::stringstream s;
    write_mappings(s, ms);
    CHECK(read_mappings(s) == ms);
  }
  const std::vector<std::pair<std::string, std::size_t>> bad = {
      {"src\tdst\tjoint_count\tsrc_count\nl u c\tl u k\t2\n", 2},
      {"src\tdst\tjoint_count\tsrc_count\na\tb\t1\t2\nl u c\tl u k\tx\t10\n", 3},
      {"src\tdst\tjoint_count\tsrc_count\nl u c\tl u k\t20\t10\n", 2},
      {"src\tdst\tjoint_count\tsrc_count\nl u c\tl u\t2\t10\n", 2},
      {"wrong\theader\n", 1},
  };
  for (const auto& [text, line] : bad) {
    std::istringstream in(text);
    try {
      read_mappings(in);
      FAIL("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  }
}
