#include "kanon/clear.hpp"

#include "kanon/errors.hpp"

namespace kanon::clear {

BigUint select_combine(std::span<const bool> query_bits, std::span<const BigUint> values) {
    if (query_bits.size() != values.size() || query_bits.empty())
        throw ProtocolError("clear::select_combine: query/values length mismatch");
    BigUint acc = 0;
    for (std::size_t j = 0; j < values.size(); ++j)
        if (query_bits[j]) acc += values[j];
    return acc;
}

}  // namespace kanon::clear
