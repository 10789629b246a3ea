#pragma once

#include <span>

#include "kanon/numtheory.hpp"

namespace kanon::clear {

/// sum_j query_bits[j] * values[j] over plain integers. The cleartext
/// reference for what every encrypted backend must compute; also the
/// protocol-overhead baseline (backend id 0 on the wire).
BigUint select_combine(std::span<const bool> query_bits, std::span<const BigUint> values);

}  // namespace kanon::clear
