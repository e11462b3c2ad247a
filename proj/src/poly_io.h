#pragma once

#include "hofa/polynomial.h"
#include "text_reader.h"

namespace hofa::detail {

// Reads a "p n" header and the monomial lines that follow it. Stops at end of
// input or at the next line whose width differs from n + 2.
NonClassicalPoly read_poly(TextReader& reader);

}  // namespace hofa::detail
