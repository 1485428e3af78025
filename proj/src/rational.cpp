#include "gaudin/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace gaudin {

Rat rat_parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = std::string::npos;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '/') {
      if (slash != std::string::npos)
        throw std::invalid_argument("malformed rational literal: " + text);
      slash = i;
    } else if (!(std::isdigit(static_cast<unsigned char>(ch)) ||
                 ((ch == '-' || ch == '+') && (i == 0 || i == slash + 1)))) {
      throw std::invalid_argument("malformed rational literal: " + text);
    }
  }
  mpq_class q;
  if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + text);
  if (sgn(q.get_den()) == 0)
    throw std::invalid_argument("zero denominator in rational literal: " + text);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& x) { return x.get_str(); }

}  // namespace gaudin
