#include "lead_time_arg.hpp"

#include <charconv>
#include <string_view>
#include <vector>

#include "bullwhip/errors.hpp"

namespace bullwhip::app {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view field, const std::string& whole) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw ConfigError("lead time '" + whole + "': bad number '" +
                      std::string(field) + "'");
  }
  return value;
}

}  // namespace

LeadTimeDistSpec parse_lead_time_arg(const std::string& text) {
  const auto parts = split(text, ':');
  const auto kind = parts.front();
  LeadTimeDistSpec spec;
  if (kind == "det" && parts.size() == 2) {
    spec = lead::Deterministic{parse_number<int>(parts[1], text)};
  } else if (kind == "uniform" && parts.size() == 3) {
    spec = lead::DiscreteUniform{parse_number<int>(parts[1], text),
                                 parse_number<int>(parts[2], text)};
  } else if (kind == "cat" && parts.size() == 2) {
    lead::Categorical cat;
    for (const auto p : split(parts[1], ',')) {
      cat.probabilities.push_back(parse_number<double>(p, text));
    }
    spec = cat;
  } else {
    throw ConfigError("lead time '" + text +
                      "': expected det:L, uniform:a:b or cat:p1,...,pM");
  }
  // Constructing the distribution checks the parameters.
  LeadTimeDist{spec};
  return spec;
}

}  // namespace bullwhip::app
