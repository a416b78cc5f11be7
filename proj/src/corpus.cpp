#include "ctxspell/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include "ctxspell/errors.hpp"
#include "ctxspell/io.hpp"

namespace ctxspell {

std::vector<ParallelPair> read_corpus(std::istream& in) {
  std::vector<ParallelPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = io::split(line, '\t');
    if (f.size() != 2) throw ParseError("expected 2 tab-separated columns", line_no);
    try {
      ParallelPair pair{Phrase::normalize(f[0]), Phrase::normalize(f[1])};
      if (pair.correct.empty()) throw ParseError("empty correct phrase", line_no);
      out.push_back(std::move(pair));
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<ParallelPair> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_corpus(in);
}

void write_corpus(std::ostream& out, std::span<const ParallelPair> corpus) {
  for (const auto& p : corpus) out << p.correct.display() << '\t' << p.corrupted.display() << '\n';
}

std::vector<Utterance> read_utterances(std::istream& in) {
  std::vector<Utterance> out;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected 'id<TAB>text'", line_no);
    Utterance u{line.substr(0, tab), {}};
    if (u.id.empty()) throw ParseError("empty utterance id", line_no);
    if (!ids.insert(u.id).second) throw ParseError("duplicate utterance id '" + u.id + "'", line_no);
    try {
      u.words = normalize_words(std::string_view(line).substr(tab + 1));
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), line_no);
    }
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<Utterance> load_utterances(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_utterances(in);
}

void write_utterances(std::ostream& out, std::span<const Utterance> utterances) {
  for (const auto& u : utterances) {
    out << u.id << '\t';
    for (std::size_t i = 0; i < u.words.size(); ++i) out << (i ? " " : "") << u.words[i];
    out << '\n';
  }
}

}  // namespace ctxspell
