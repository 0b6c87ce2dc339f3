#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "convalg/scalar.hpp"

namespace convalg {

/// Splits `c1 * L1 + c2 * L2 - L3` into (label, coefficient) pairs. Signs and `+`
/// inside parentheses or brackets belong to the enclosing token. `0` gives no terms.
/// Labels are returned trimmed and unparsed. Throws ParseError.
std::vector<std::pair<std::string, Scalar>> split_terms(const RingDescriptor& ring, std::string_view text);

} // namespace convalg
