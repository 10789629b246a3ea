#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kanon/backend.hpp"
#include "kanon/posting.hpp"

namespace kanon::protocol {

/// Session parameters: anonymity set size k, posting length p in bits, the
/// backend, and the modulus size the keys were generated at.
struct ProtocolParams {
    BackendId backend = BackendId::clear;
    std::size_t k = 0;
    std::size_t p = 0;
    unsigned modulus_bits = 0;

    /// Enforces k >= 2, p >= 1, modulus_bits even and >= 32.
    void validate() const;
};

/// The client's request: k ciphertexts encrypting the one-hot selector for
/// position i inside block block_id. All indices are zero-based; the upper
/// ends are exclusive.
struct SelectorQuery {
    std::uint32_t block_id = 0;
    std::vector<BigUint> ciphertexts;
};

struct EncryptedResponse {
    std::vector<BigUint> ciphertexts;
};

/// Encrypts the selector (1 at index_in_block, 0 elsewhere), fresh
/// randomness per entry. index_in_block out of [0, k) -> IndexOutOfRange.
SelectorQuery build_query(const ProtocolParams& params, const AnyPublicKey& pk,
                          std::uint32_t block_id, std::size_t index_in_block, RandomSource& rng);

/// Server side: combines the query with one block, k*p backend operations.
/// threads > 1 parallelizes across offsets (GM) or chunks (Paillier) with
/// order-preserving assembly.
EncryptedResponse evaluate_query(const ProtocolParams& params, const AnyPublicKey& pk,
                                 const SelectorQuery& query, const PostingBlock& block,
                                 RandomSource& rng, std::size_t threads = 1);

/// Client side: recovers the selected p-bit posting.
BitVec decrypt_response(const ProtocolParams& params, const AnySecretKey& sk,
                        const AnyPublicKey& pk, const EncryptedResponse& response);

/// Maps a term to its (block_id, index_in_block) under blocking size k, by
/// rank in the canonically ordered term list. Unknown term -> TermNotFound.
std::pair<std::uint32_t, std::uint32_t> locate_term(std::span<const std::string> terms,
                                                    std::string_view term, std::size_t k);

}  // namespace kanon::protocol
