#pragma once

// Locale-independent number formatting and the key=value run manifest
// embedded in every output file.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qwsearch {

/// Shortest decimal that round-trips to the same double.
std::string format_shortest(double value);

/// 17 significant digits, general notation.
std::string format_fixed17(double value);

/// Ordered key=value record. Insertion order is preserved so that output
/// files are byte-stable.
class Manifest {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value) { set(std::move(key), format_shortest(value)); }
  void set(std::string key, int value) { set(std::move(key), std::to_string(value)); }

  std::optional<std::string> get(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

  /// "# key=value" lines.
  std::string to_comment_block() const;
  /// Parses the leading "# key=value" lines of a CSV document.
  static Manifest from_comment_block(std::string_view text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace qwsearch
