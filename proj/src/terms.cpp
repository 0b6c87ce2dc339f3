#include "convalg/terms.hpp"

#include "convalg/errors.hpp"

namespace convalg {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\n");
  return std::string(s.substr(b, e - b + 1));
}

} // namespace

std::vector<std::pair<std::string, Scalar>> split_terms(const RingDescriptor& ring, std::string_view text) {
  std::vector<std::pair<std::string, Scalar>> out;
  std::string all = trim(text);
  if (all == "0") return out;
  if (all.empty()) throw ParseError("empty element");
  std::vector<std::pair<bool, std::string>> pieces;
  int depth = 0;
  std::size_t start = 0;
  bool negative = false;
  bool expecting_first = true;
  for (std::size_t i = 0; i <= all.size(); ++i) {
    char c = i < all.size() ? all[i] : '\0';
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') {
      if (--depth < 0) throw ParseError("unbalanced '" + std::string(1, c) + "'", 1, i + 1);
    }
    bool split = c == '\0' || (depth == 0 && (c == '+' || c == '-'));
    if (!split) continue;
    std::string piece = trim(std::string_view(all).substr(start, i - start));
    if (piece.empty()) {
      if (!expecting_first || c == '\0') throw ParseError("missing term", 1, i + 1);
    } else {
      if (piece.back() == '*') throw ParseError("missing factor after '*'", 1, i + 1);
      pieces.emplace_back(negative, piece);
    }
    expecting_first = false;
    negative = c == '-';
    start = i + 1;
  }
  if (depth != 0) throw ParseError("unbalanced parentheses");
  for (const auto& [neg, piece] : pieces) {
    int d = 0;
    std::size_t star = std::string::npos;
    for (std::size_t i = 0; i < piece.size(); ++i) {
      if (piece[i] == '(' || piece[i] == '[') ++d;
      if (piece[i] == ')' || piece[i] == ']') --d;
      if (d == 0 && piece[i] == '*') {
        if (star != std::string::npos) throw ParseError("more than one '*' in '" + piece + "'");
        star = i;
      }
    }
    Scalar c = Scalar::one(ring);
    std::string label = piece;
    if (star != std::string::npos) {
      c = Scalar::parse(ring, trim(piece.substr(0, star)));
      label = trim(piece.substr(star + 1));
    }
    if (label.empty()) throw ParseError("missing label in '" + piece + "'");
    out.emplace_back(label, neg ? -c : c);
  }
  return out;
}

} // namespace convalg
