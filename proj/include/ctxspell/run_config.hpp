#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxspell/dataset.hpp"
#include "ctxspell/pipeline.hpp"
#include "ctxspell/vocab_index.hpp"

namespace ctxspell {

/// All tunables of the command-line tool, settable from a flat `key=value`
/// file. Command-line flags override file values.
struct RunConfig {
  IndexConfig index;
  PipelineConfig pipeline;  ///< includes retrieval and matcher settings
  int mapping_rounds = 3;
  int mapping_max_len = 5;
  double mapping_min_prob = kDefaultMinProb;
  DatasetConfig dataset;
  double corrupt_intensity = 1.0;
  std::uint64_t seed = 42;

  /// Sets one key; throws ConfigError for unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
  /// Value of `key` in the same textual form `set` accepts.
  std::string get(std::string_view key) const;

  /// Applies a `key=value` file. Blank lines and lines starting with '#'
  /// are ignored. Errors name the offending line.
  void load(const std::filesystem::path& path);
  void parse(std::string_view text);

  /// Range checks every module's settings; throws ConfigError.
  void validate() const;

  struct KeyInfo {
    std::string key;
    std::string help;
  };
  static const std::vector<KeyInfo>& keys();
};

}  // namespace ctxspell
