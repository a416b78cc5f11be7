#pragma once

#include <array>
#include <bitset>
#include <filesystem>
#include <iosfwd>

#include "ctxspell/phrase.hpp"

namespace ctxspell {

/// Per-symbol costs of a character-level noisy channel (correct -> observed).
///
/// Costs live in dense tables over the phrase alphabet. A source symbol is
/// "covered" when its identity substitution was set explicitly. Identity
/// substitutions start at 0 and every other cost at `default_cost()`, which
/// also applies to symbols outside the alphabet.
class EditCostTable {
 public:
  explicit EditCostTable(double default_cost = 1.0);

  /// Levenshtein weights: identity 0, every other edit 1.
  static EditCostTable unit();

  double sub(char from, char to) const noexcept;
  double ins(char c) const noexcept;
  double del(char c) const noexcept;
  double default_cost() const noexcept { return default_cost_; }
  bool covers(char c) const noexcept;

  // Setters throw InvalidInput on symbols outside the alphabet or on
  // negative / non-finite costs.
  void set_sub(char from, char to, double cost);
  void set_ins(char c, double cost);
  void set_del(char c, double cost);

  /// Log-likelihood-ratio view: every cost of source symbol `a` minus the
  /// identity cost of `a`, so an unchanged string aligns at cost 0. Requires
  /// identity to be the cheapest substitution for every symbol.
  EditCostTable relative_to_identity() const;

  /// True when every identity substitution is the cheapest substitution
  /// for its source symbol.
  bool identity_is_cheapest() const noexcept;

  void write(std::ostream& out) const;
  static EditCostTable read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static EditCostTable load(const std::filesystem::path& path);

  friend bool operator==(const EditCostTable&, const EditCostTable&) = default;

 private:
  static std::size_t checked_index(char c);

  double default_cost_;
  std::array<double, kAlphabetSize * kAlphabetSize> sub_{};
  std::array<double, kAlphabetSize> ins_{};
  std::array<double, kAlphabetSize> del_{};
  std::bitset<kAlphabetSize> covered_;
};

}  // namespace ctxspell
