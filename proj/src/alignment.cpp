#include "ctxspell/alignment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ctxspell/errors.hpp"

namespace ctxspell {

AlignedPair align_pair(const Phrase& correct, const Phrase& misspelled, const EditCostTable& costs) {
  if (correct.empty()) throw InvalidInput("align_pair: empty correct phrase");
  const std::string& s = correct.str();
  const std::string& t = misspelled.str();
  const std::size_t n = s.size();
  const std::size_t m = t.size();
  const std::size_t width = m + 1;

  std::vector<double> dist((n + 1) * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return dist[i * width + j]; };
  for (std::size_t j = 1; j <= m; ++j) at(0, j) = at(0, j - 1) + costs.ins(t[j - 1]);
  for (std::size_t i = 1; i <= n; ++i) {
    at(i, 0) = at(i - 1, 0) + costs.del(s[i - 1]);
    for (std::size_t j = 1; j <= m; ++j) {
      at(i, j) = std::min({at(i - 1, j - 1) + costs.sub(s[i - 1], t[j - 1]),
                           at(i, j - 1) + costs.ins(t[j - 1]),
                           at(i - 1, j) + costs.del(s[i - 1])});
    }
  }

  // Backward traceback; the predecessor check recomputes the same sums as the
  // forward pass, so equality is exact.
  std::vector<EditOp> reversed;
  reversed.reserve(n + m);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const double here = at(i, j);
    if (i > 0 && j > 0 && at(i - 1, j - 1) + costs.sub(s[i - 1], t[j - 1]) == here) {
      reversed.push_back(EditOp::kSubstitute);
      --i;
      --j;
    } else if (j > 0 && at(i, j - 1) + costs.ins(t[j - 1]) == here) {
      reversed.push_back(EditOp::kInsert);
      --j;
    } else {
      reversed.push_back(EditOp::kDelete);
      --i;
    }
  }

  AlignedPair out{correct, misspelled, {}, {reversed.rbegin(), reversed.rend()}, at(n, m)};
  out.units.reserve(n);
  std::string leading;
  i = 0;
  j = 0;
  for (const EditOp op : out.path) {
    switch (op) {
      case EditOp::kSubstitute:
        out.units.push_back({s[i++], leading + t[j++]});
        leading.clear();
        break;
      case EditOp::kDelete:
        out.units.push_back({s[i++], leading});
        leading.clear();
        break;
      case EditOp::kInsert:
        if (out.units.empty()) {
          leading.push_back(t[j++]);
        } else {
          out.units.back().target.push_back(t[j++]);
        }
        break;
    }
  }
  return out;
}

std::string render_target(const std::string& target) {
  if (target.empty()) return "<DEL>";
  std::string out;
  out.reserve(target.size() * 2);
  for (std::size_t k = 0; k < target.size(); ++k) {
    if (k > 0) out.push_back('+');
    out.push_back(target[k]);
  }
  return out;
}

EditCostTable costs_from_alignments(std::span<const AlignedPair> alignments) {
  constexpr std::size_t kA = kAlphabetSize;
  std::vector<std::int64_t> sub_count(kA * kA, 0);
  std::array<std::int64_t, kA> del_count{};
  std::array<std::int64_t, kA> ins_count{};
  std::array<std::int64_t, kA> source_count{};
  std::int64_t slots = 0;

  auto idx = [](char c) { return static_cast<std::size_t>(symbol_index(c)); };
  for (const auto& a : alignments) {
    const std::string& s = a.source.str();
    const std::string& t = a.target.str();
    slots += static_cast<std::int64_t>(s.size()) + 1;
    std::size_t i = 0;
    std::size_t j = 0;
    for (const EditOp op : a.path) {
      switch (op) {
        case EditOp::kSubstitute:
          ++sub_count[idx(s[i]) * kA + idx(t[j])];
          ++source_count[idx(s[i])];
          ++i;
          ++j;
          break;
        case EditOp::kDelete:
          ++del_count[idx(s[i])];
          ++source_count[idx(s[i])];
          ++i;
          break;
        case EditOp::kInsert:
          ++ins_count[idx(t[j])];
          ++j;
          break;
      }
    }
  }

  std::int64_t total = 0;
  for (const auto c : source_count) total += c;
  constexpr double kSourceOutcomes = kAlphabetSize + 1;
  constexpr double kInsertOutcomes = kAlphabetSize;
  auto neglog = [](double numer, double denom) { return -std::log(numer / denom); };

  EditCostTable table(neglog(1.0, static_cast<double>(total) + kSourceOutcomes));
  for (std::size_t a = 0; a < kA; ++a) {
    const char ca = symbol_at(static_cast<int>(a));
    if (source_count[a] == 0) continue;
    const double denom = static_cast<double>(source_count[a]) + kSourceOutcomes;
    double cheapest_other = INFINITY;
    for (std::size_t b = 0; b < kA; ++b) {
      const double cost = neglog(static_cast<double>(sub_count[a * kA + b]) + 1.0, denom);
      table.set_sub(ca, symbol_at(static_cast<int>(b)), cost);
      if (b != a) cheapest_other = std::min(cheapest_other, cost);
    }
    if (table.sub(ca, ca) > cheapest_other) table.set_sub(ca, ca, cheapest_other);
    table.set_del(ca, neglog(static_cast<double>(del_count[a]) + 1.0, denom));
  }
  const double ins_denom = static_cast<double>(slots) + kInsertOutcomes;
  for (std::size_t c = 0; c < kA; ++c) {
    table.set_ins(symbol_at(static_cast<int>(c)), neglog(static_cast<double>(ins_count[c]) + 1.0, ins_denom));
  }
  return table;
}

std::vector<AlignedPair> align_corpus(std::span<const ParallelPair> corpus, const EditCostTable& costs) {
  std::vector<AlignedPair> out;
  out.reserve(corpus.size());
  for (const auto& p : corpus) out.push_back(align_pair(p.correct, p.corrupted, costs));
  return out;
}

EditCostTable estimate_costs(std::span<const ParallelPair> corpus, int rounds) {
  if (corpus.empty()) throw InvalidInput("estimate_costs: empty corpus");
  if (rounds < 1) throw InvalidInput("estimate_costs: rounds must be >= 1");
  EditCostTable table = EditCostTable::unit();
  for (int r = 0; r < rounds; ++r) {
    const auto alignments = align_corpus(corpus, table);
    table = costs_from_alignments(alignments);
  }
  return table;
}

}  // namespace ctxspell
