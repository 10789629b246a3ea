#include "kanon/protocol.hpp"

#include <algorithm>

#include "kanon/errors.hpp"

namespace kanon::protocol {

void ProtocolParams::validate() const {
    if (k < 2) throw ProtocolError("params: k must be >= 2");
    if (p < 1) throw ProtocolError("params: p must be >= 1");
    if (modulus_bits < 32 || modulus_bits % 2 != 0)
        throw ProtocolError("params: modulus_bits must be even and >= 32");
}

SelectorQuery build_query(const ProtocolParams& params, const AnyPublicKey& pk,
                          std::uint32_t block_id, std::size_t index_in_block,
                          RandomSource& rng) {
    params.validate();
    if (index_in_block >= params.k)
        throw IndexOutOfRange("build_query: index " + std::to_string(index_in_block) +
                              " not in [0, " + std::to_string(params.k) + ")");
    const Backend& backend = backend_for(params.backend);
    SelectorQuery query;
    query.block_id = block_id;
    query.ciphertexts.reserve(params.k);
    for (std::size_t j = 0; j < params.k; ++j)
        query.ciphertexts.push_back(backend.encrypt_selector_bit(pk, j == index_in_block, rng));
    return query;
}

EncryptedResponse evaluate_query(const ProtocolParams& params, const AnyPublicKey& pk,
                                 const SelectorQuery& query, const PostingBlock& block,
                                 RandomSource& rng, std::size_t threads) {
    params.validate();
    if (query.ciphertexts.size() != params.k)
        throw ProtocolError("evaluate_query: query length != k");
    const Backend& backend = backend_for(params.backend);
    return {backend.evaluate(pk, query.ciphertexts, block, params.modulus_bits, rng, threads)};
}

BitVec decrypt_response(const ProtocolParams& params, const AnySecretKey& sk,
                        const AnyPublicKey& pk, const EncryptedResponse& response) {
    params.validate();
    const Backend& backend = backend_for(params.backend);
    const std::size_t want = backend.response_count(params.p, params.modulus_bits);
    if (response.ciphertexts.size() != want)
        throw ProtocolError("decrypt_response: expected " + std::to_string(want) +
                            " ciphertexts, got " + std::to_string(response.ciphertexts.size()));
    return backend.decrypt_response(sk, pk, response.ciphertexts, params.p, params.modulus_bits);
}

std::pair<std::uint32_t, std::uint32_t> locate_term(std::span<const std::string> terms,
                                                    std::string_view term, std::size_t k) {
    if (k < 1) throw ProtocolError("locate_term: k must be >= 1");
    const auto it = std::lower_bound(terms.begin(), terms.end(), term);
    if (it == terms.end() || *it != term)
        throw TermNotFound("term \"" + std::string(term) + "\" not in manifest");
    const auto rank = static_cast<std::size_t>(it - terms.begin());
    return {static_cast<std::uint32_t>(rank / k), static_cast<std::uint32_t>(rank % k)};
}

}  // namespace kanon::protocol
