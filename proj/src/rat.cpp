#include "probwb/rat.hpp"

#include <sstream>

namespace probwb {

Rat parse_rat(const std::string& text) {
  auto bad = [&] { throw BadRational("bad rational: '" + text + "'"); };
  std::string s = text;
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Nat(s));
    Nat num(s.substr(0, slash));
    Nat den(s.substr(slash + 1));
    if (den <= 0) bad();
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    bad();
  }
  return Rat(0);  // unreachable
}

std::string format_rat(const Rat& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

}  // namespace probwb
