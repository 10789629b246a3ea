#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "kanon/clear.hpp"
#include "kanon/gm.hpp"
#include "kanon/paillier.hpp"
#include "kanon/posting.hpp"

namespace kanon {

/// Wire identifiers of the homomorphic backends. Id 0 is the cleartext
/// reference; it provides no secrecy and exists as oracle and baseline.
enum class BackendId : std::uint8_t { clear = 0, gm = 1, paillier = 2 };

std::string_view backend_name(BackendId id);
BackendId backend_from_name(std::string_view name);

struct ClearPublicKey {
    bool operator==(const ClearPublicKey&) const = default;
};
struct ClearSecretKey {
    bool operator==(const ClearSecretKey&) const = default;
};

using AnyPublicKey = std::variant<ClearPublicKey, gm::PublicKey, paillier::PublicKey>;
using AnySecretKey = std::variant<ClearSecretKey, gm::SecretKey, paillier::SecretKey>;

struct KeyPair {
    BackendId backend = BackendId::clear;
    unsigned modulus_bits = 0;
    AnyPublicKey public_key;
    AnySecretKey secret_key;
};

/// Uniform interface over the three cryptosystems. Ciphertexts cross this
/// boundary as raw big integers; each implementation interprets them in its
/// own ciphertext space and rejects out-of-space values.
class Backend {
  public:
    virtual ~Backend() = default;

    virtual BackendId id() const noexcept = 0;

    virtual KeyPair keygen(unsigned modulus_bits, RandomSource& rng) const = 0;

    /// One selector entry Enc(b), b in {0, 1}.
    virtual BigUint encrypt_selector_bit(const AnyPublicKey& pk, bool b,
                                         RandomSource& rng) const = 0;

    /// Plaintext of one ciphertext value (selector entries and responses).
    virtual BigUint decrypt_value(const AnySecretKey& sk, const AnyPublicKey& pk,
                                  const BigUint& value) const = 0;

    /// Server side of the protocol: k selector ciphertexts against a block of
    /// k postings of p bits, producing response_count(p, modulus_bits)
    /// ciphertext values. threads > 1 splits the work across bit offsets
    /// (GM) or chunks (Paillier); assembly is order-preserving and each
    /// worker owns its randomness, so results decrypt identically.
    virtual std::vector<BigUint> evaluate(const AnyPublicKey& pk, std::span<const BigUint> query,
                                          const PostingBlock& block, unsigned modulus_bits,
                                          RandomSource& rng, std::size_t threads = 1) const = 0;

    /// Client side: response ciphertexts back to the p-bit posting.
    virtual BitVec decrypt_response(const AnySecretKey& sk, const AnyPublicKey& pk,
                                    std::span<const BigUint> response, std::size_t p,
                                    unsigned modulus_bits) const = 0;

    /// Number of response ciphertexts for a p-bit posting: p for GM (one per
    /// bit), ceil(p / (modulus_bits - 8)) for Paillier packing, 1 for clear.
    virtual std::size_t response_count(std::size_t p, unsigned modulus_bits) const = 0;

    /// Public key as wire integers (GM: n, y; Paillier: n; clear: none).
    virtual std::vector<BigUint> public_elements(const AnyPublicKey& pk) const = 0;
    virtual AnyPublicKey public_from_elements(std::span<const BigUint> elems) const = 0;
};

const Backend& backend_for(BackendId id);

/// Bits per Paillier plaintext chunk; the 8-bit margin keeps any packed
/// chunk strictly below the modulus.
inline std::size_t paillier_chunk_bits(unsigned modulus_bits) {
    return modulus_bits > 8 ? modulus_bits - 8 : 1;
}

}  // namespace kanon
