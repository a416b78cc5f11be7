#include "ctxspell/ngram_mappings.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "ctxspell/errors.hpp"
#include "ctxspell/io.hpp"

namespace ctxspell {

namespace {

constexpr std::string_view kHeader = "src\tdst\tjoint_count\tsrc_count";

void validate_src(std::string_view src, std::size_t line) {
  const auto tokens = io::split(src, ' ');
  for (const auto tok : tokens) {
    if (tok.size() != 1 || symbol_index(tok[0]) < 0) {
      throw ParseError("bad source n-gram '" + std::string(src) + "'", line);
    }
  }
}

void validate_dst(std::string_view dst, std::size_t src_len, std::size_t line) {
  const auto tokens = io::split(dst, ' ');
  if (tokens.size() != src_len) {
    throw ParseError("target '" + std::string(dst) + "' does not align with source length", line);
  }
  for (const auto tok : tokens) {
    if (tok == "<DEL>") continue;
    const auto chars = io::split(tok, '+');
    for (const auto c : chars) {
      if (c.size() != 1 || symbol_index(c[0]) < 0) {
        throw ParseError("bad target n-gram '" + std::string(dst) + "'", line);
      }
    }
  }
}

}  // namespace

std::string NgramMapping::src_chars() const {
  std::string out;
  for (const char c : src) {
    if (c != ' ') out.push_back(c);
  }
  return out;
}

std::string NgramMapping::dst_flat() const {
  std::string out;
  for (const auto tok : io::split(dst, ' ')) {
    if (tok == "<DEL>") continue;
    for (const char c : tok) {
      if (c != '+') out.push_back(c);
    }
  }
  return out;
}

void sort_mappings(std::vector<NgramMapping>& mappings) {
  std::sort(mappings.begin(), mappings.end(), [](const NgramMapping& a, const NgramMapping& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.joint_count != b.joint_count) return a.joint_count > b.joint_count;
    return a.dst < b.dst;
  });
}

std::vector<NgramMapping> extract_mappings(std::span<const AlignedPair> alignments, int max_len,
                                           double min_prob) {
  if (max_len < 1) throw InvalidInput("extract_mappings: max_len must be >= 1");
  if (!(min_prob >= 0.0 && min_prob < 1.0)) throw InvalidInput("extract_mappings: min_prob must be in [0, 1)");

  std::map<std::string, std::map<std::string, std::int64_t>> joint;
  std::string src;
  std::string dst;
  for (const auto& a : alignments) {
    const auto& units = a.units;
    for (std::size_t start = 0; start < units.size(); ++start) {
      src.clear();
      dst.clear();
      const std::size_t stop = std::min(units.size(), start + static_cast<std::size_t>(max_len));
      for (std::size_t k = start; k < stop; ++k) {
        if (k > start) {
          src.push_back(' ');
          dst.push_back(' ');
        }
        src.push_back(units[k].source);
        dst += render_target(units[k].target);
        ++joint[src][dst];
      }
    }
  }

  std::vector<NgramMapping> out;
  for (const auto& [s, targets] : joint) {
    std::int64_t total = 0;
    for (const auto& [d, count] : targets) total += count;
    for (const auto& [d, count] : targets) {
      NgramMapping m{s, d, count, total};
      if (m.cond_prob() > min_prob) out.push_back(std::move(m));
    }
  }
  sort_mappings(out);
  return out;
}

void write_mappings(std::ostream& out, std::span<const NgramMapping> mappings) {
  std::vector<NgramMapping> sorted(mappings.begin(), mappings.end());
  sort_mappings(sorted);
  out << kHeader << '\n';
  for (const auto& m : sorted) {
    out << m.src << '\t' << m.dst << '\t' << m.joint_count << '\t' << m.src_count << '\n';
  }
}

std::vector<NgramMapping> read_mappings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing mapping header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw ParseError("bad mapping header", 1);
  std::vector<NgramMapping> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = io::split(line, '\t');
    if (f.size() != 4) throw ParseError("expected 4 tab-separated columns", line_no);
    validate_src(f[0], line_no);
    validate_dst(f[1], (f[0].size() + 1) / 2, line_no);
    NgramMapping m{std::string(f[0]), std::string(f[1]), io::parse_int(f[2], line_no),
                   io::parse_int(f[3], line_no)};
    if (m.joint_count <= 0 || m.src_count <= 0 || m.joint_count > m.src_count) {
      throw ParseError("counts must satisfy 0 < joint_count <= src_count", line_no);
    }
    out.push_back(std::move(m));
  }
  return out;
}

void save_mappings(const std::filesystem::path& path, std::span<const NgramMapping> mappings) {
  std::ostringstream out;
  write_mappings(out, mappings);
  io::write_file_atomic(path, out.str());
}

std::vector<NgramMapping> load_mappings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_mappings(in);
}

}  // namespace ctxspell
