#include "qwsearch/format.hpp"

#include <array>
#include <charconv>
#include <sstream>

namespace qwsearch {

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string format_fixed17(double value) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void Manifest::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

std::optional<std::string> Manifest::get(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string Manifest::to_comment_block() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += "# " + k + "=" + v + "\n";
  return out;
}

Manifest Manifest::from_comment_block(std::string_view text) {
  Manifest m;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    m.set(line.substr(2, eq - 2), line.substr(eq + 1));
  }
  return m;
}

}  // namespace qwsearch
