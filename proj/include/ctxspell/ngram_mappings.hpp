#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ctxspell/alignment.hpp"

namespace ctxspell {

/// A learned (correct n-gram -> observed n-gram) pair with its counts.
///
/// `src` renders source characters separated by spaces ("l u c"); `dst`
/// renders the aligned targets the same way, using '+' for joins and
/// "<DEL>" for deletions ("l u k+e").
struct NgramMapping {
  std::string src;
  std::string dst;
  std::int64_t joint_count = 0;
  std::int64_t src_count = 0;

  double cond_prob() const noexcept {
    return static_cast<double>(joint_count) / static_cast<double>(src_count);
  }
  /// Source characters without separators ("luc").
  std::string src_chars() const;
  /// Target as a plain string: joins flattened, deletions dropped ("luke").
  std::string dst_flat() const;
  bool is_identity() const { return src_chars() == dst_flat(); }

  friend bool operator==(const NgramMapping&, const NgramMapping&) = default;
};

inline constexpr int kDefaultMaxNgram = 5;
inline constexpr double kDefaultMinProb = 0.018;

/// Counts every contiguous source window of length 1..max_len in every
/// alignment, then keeps rows with cond_prob > min_prob. Identity rows are
/// kept. Output is in canonical order (see `sort_mappings`).
std::vector<NgramMapping> extract_mappings(std::span<const AlignedPair> alignments,
                                           int max_len = kDefaultMaxNgram,
                                           double min_prob = kDefaultMinProb);

/// Canonical order: src ascending, joint_count descending, dst ascending.
void sort_mappings(std::vector<NgramMapping>& mappings);

/// TSV with header `src dst joint_count src_count`. Rows are written in
/// canonical order. Malformed rows raise ParseError carrying the line number.
void write_mappings(std::ostream& out, std::span<const NgramMapping> mappings);
std::vector<NgramMapping> read_mappings(std::istream& in);
void save_mappings(const std::filesystem::path& path, std::span<const NgramMapping> mappings);
std::vector<NgramMapping> load_mappings(const std::filesystem::path& path);

}  // namespace ctxspell
