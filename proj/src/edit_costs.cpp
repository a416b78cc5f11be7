#include "ctxspell/edit_costs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "ctxspell/errors.hpp"
#include "ctxspell/io.hpp"

namespace ctxspell {

namespace {

void check_cost(double cost) {
  if (!std::isfinite(cost) || cost < 0.0) {
    throw InvalidInput("edit cost must be finite and non-negative, got " + io::format_double(cost));
  }
}

constexpr std::string_view kHeader = "kind\tfrom\tto\tcost";

}  // namespace

EditCostTable::EditCostTable(double default_cost) : default_cost_(default_cost) {
  check_cost(default_cost);
  sub_.fill(default_cost);
  for (std::size_t a = 0; a < kAlphabetSize; ++a) sub_[a * kAlphabetSize + a] = 0.0;
  ins_.fill(default_cost);
  del_.fill(default_cost);
}

EditCostTable EditCostTable::unit() {
  EditCostTable t(1.0);
  for (int a = 0; a < kAlphabetSize; ++a) t.set_sub(symbol_at(a), symbol_at(a), 0.0);
  return t;
}

std::size_t EditCostTable::checked_index(char c) {
  const int i = symbol_index(c);
  if (i < 0) throw InvalidInput(std::string("symbol outside alphabet: '") + c + "'");
  return static_cast<std::size_t>(i);
}

double EditCostTable::sub(char from, char to) const noexcept {
  const int a = symbol_index(from);
  const int b = symbol_index(to);
  if (a < 0 || b < 0) return from == to ? 0.0 : default_cost_;
  return sub_[static_cast<std::size_t>(a * kAlphabetSize + b)];
}

double EditCostTable::ins(char c) const noexcept {
  const int i = symbol_index(c);
  return i < 0 ? default_cost_ : ins_[static_cast<std::size_t>(i)];
}

double EditCostTable::del(char c) const noexcept {
  const int i = symbol_index(c);
  return i < 0 ? default_cost_ : del_[static_cast<std::size_t>(i)];
}

bool EditCostTable::covers(char c) const noexcept {
  const int i = symbol_index(c);
  return i >= 0 && covered_.test(static_cast<std::size_t>(i));
}

void EditCostTable::set_sub(char from, char to, double cost) {
  check_cost(cost);
  const auto a = checked_index(from);
  const auto b = checked_index(to);
  sub_[a * kAlphabetSize + b] = cost;
  if (a == b) covered_.set(a);
}

void EditCostTable::set_ins(char c, double cost) {
  check_cost(cost);
  ins_[checked_index(c)] = cost;
}

void EditCostTable::set_del(char c, double cost) {
  check_cost(cost);
  del_[checked_index(c)] = cost;
}

bool EditCostTable::identity_is_cheapest() const noexcept {
  for (int a = 0; a < kAlphabetSize; ++a) {
    const double identity = sub_[static_cast<std::size_t>(a * kAlphabetSize + a)];
    for (int b = 0; b < kAlphabetSize; ++b) {
      if (sub_[static_cast<std::size_t>(a * kAlphabetSize + b)] < identity) return false;
    }
  }
  return true;
}

EditCostTable EditCostTable::relative_to_identity() const {
  if (!identity_is_cheapest()) {
    throw InvalidInput("relative costs need identity to be the cheapest substitution");
  }
  EditCostTable out = *this;
  for (std::size_t a = 0; a < kAlphabetSize; ++a) {
    const double identity = sub_[a * kAlphabetSize + a];
    for (std::size_t b = 0; b < kAlphabetSize; ++b) {
      out.sub_[a * kAlphabetSize + b] = sub_[a * kAlphabetSize + b] - identity;
    }
    out.del_[a] = std::max(0.0, del_[a] - identity);
  }
  return out;
}

void EditCostTable::write(std::ostream& out) const {
  out << kHeader << '\n';
  out << "default\t-\t-\t" << io::format_double(default_cost_) << '\n';
  for (int a = 0; a < kAlphabetSize; ++a) {
    const char ca = symbol_at(a);
    for (int b = 0; b < kAlphabetSize; ++b) {
      out << "sub\t" << ca << '\t' << symbol_at(b) << '\t' << io::format_double(sub(ca, symbol_at(b)))
          << '\n';
    }
  }
  for (int a = 0; a < kAlphabetSize; ++a) {
    out << "del\t" << symbol_at(a) << "\t-\t" << io::format_double(del(symbol_at(a))) << '\n';
  }
  for (int a = 0; a < kAlphabetSize; ++a) {
    out << "ins\t-\t" << symbol_at(a) << '\t' << io::format_double(ins(symbol_at(a))) << '\n';
  }
  for (int a = 0; a < kAlphabetSize; ++a) {
    if (!covered_.test(static_cast<std::size_t>(a))) out << "uncovered\t" << symbol_at(a) << "\t-\t0\n";
  }
}

EditCostTable EditCostTable::read(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != kHeader) throw ParseError("missing cost table header", 1);
  ++line_no;
  EditCostTable table(1.0);
  bool have_default = false;
  auto one_char = [&](std::string_view field) {
    if (field.size() != 1 || symbol_index(field[0]) < 0) {
      throw ParseError("bad symbol '" + std::string(field) + "'", line_no);
    }
    return field[0];
  };
  std::bitset<kAlphabetSize> uncovered;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = io::split(line, '\t');
    if (f.size() != 4) throw ParseError("expected 4 columns", line_no);
    const double cost = io::parse_double(f[3], line_no);
    try {
      if (f[0] == "default") {
        table = EditCostTable(cost);
        have_default = true;
      } else if (f[0] == "sub") {
        table.set_sub(one_char(f[1]), one_char(f[2]), cost);
      } else if (f[0] == "del") {
        table.set_del(one_char(f[1]), cost);
      } else if (f[0] == "ins") {
        table.set_ins(one_char(f[2]), cost);
      } else if (f[0] == "uncovered") {
        uncovered.set(static_cast<std::size_t>(symbol_index(one_char(f[1]))));
      } else {
        throw ParseError("unknown row kind '" + std::string(f[0]) + "'", line_no);
      }
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), line_no);
    }
    if (f[0] == "default" && line_no != 2) throw ParseError("default row must come first", line_no);
  }
  if (!have_default) throw ParseError("missing default row", 0);
  table.covered_ &= ~uncovered;
  return table;
}

void EditCostTable::save(const std::filesystem::path& path) const {
  std::ostringstream out;
  write(out);
  io::write_file_atomic(path, out.str());
}

EditCostTable EditCostTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read(in);
}

}  // namespace ctxspell
