#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kanon {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A mathematical precondition was violated (even modulus, modulus < 2, ...).
struct DomainError : Error {
    using Error::Error;
};

/// mod_inverse on a pair with gcd != 1.
struct NotInvertible : Error {
    using Error::Error;
};

/// Ciphertext outside the valid space of the key (gcd with modulus != 1,
/// out of range, non-divisible L-function argument).
struct InvalidCiphertext : Error {
    using Error::Error;
};

/// Paillier plaintext >= n.
struct MessageTooLarge : Error {
    using Error::Error;
};

/// A packed posting chunk does not fit the plaintext space.
struct ChunkTooLarge : Error {
    using Error::Error;
};

/// Shape mismatch or malformed message at the protocol layer.
struct ProtocolError : Error {
    using Error::Error;
};

/// Selector index outside [0, k).
struct IndexOutOfRange : Error {
    using Error::Error;
};

struct TermNotFound : Error {
    using Error::Error;
};

struct BlockOutOfRange : Error {
    using Error::Error;
};

/// Malformed index file; line() is 1-based, 0 when not line-specific.
struct ParseError : Error {
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

struct DuplicateTerm : ParseError {
    using ParseError::ParseError;
};

struct PostingLengthMismatch : ParseError {
    using ParseError::ParseError;
};

/// Byte-stream level failure: truncation, bad magic, connection loss.
struct TransportError : Error {
    using Error::Error;
};

}  // namespace kanon
