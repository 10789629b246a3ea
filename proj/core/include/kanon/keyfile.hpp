#pragma once

#include <filesystem>
#include <utility>

#include "kanon/backend.hpp"

namespace kanon::keyfile {

/// Writes <backend>.pub.json and <backend>.key.json into dir (created if
/// missing). The .key.json file holds the factorization / trapdoor; only the
/// querying client should receive it.
void save_keypair(const KeyPair& keys, const std::filesystem::path& dir);

/// Public half only (what a server needs to evaluate queries).
std::pair<AnyPublicKey, unsigned> load_public(const std::filesystem::path& dir, BackendId backend);

/// Full key pair (what a client needs to decrypt).
KeyPair load_keypair(const std::filesystem::path& dir, BackendId backend);

}  // namespace kanon::keyfile
