#include "oncs/coalition.hpp"

#include <ostream>

namespace oncs {

std::string default_player_name(PlayerId id) {
  return std::string(1, static_cast<char>('A' + id.index));
}

namespace {

std::string render(Coalition c, std::span<const std::string> names) {
  std::string out = "{";
  bool first = true;
  for (PlayerId p : c.members()) {
    if (!first) out += ", ";
    first = false;
    if (p.index < names.size()) {
      out += names[p.index];
    } else {
      out += default_player_name(p);
    }
  }
  out += "}";
  return out;
}

}  // namespace

std::string to_string(Coalition c) { return render(c, {}); }

std::string to_string(Coalition c, std::span<const std::string> names) { return render(c, names); }

std::ostream& operator<<(std::ostream& os, PlayerId p) { return os << default_player_name(p); }

std::ostream& operator<<(std::ostream& os, Coalition c) { return os << to_string(c); }

}  // namespace oncs
