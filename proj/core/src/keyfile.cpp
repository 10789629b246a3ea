#include "kanon/keyfile.hpp"

#include <fstream>

#include <json.hpp>

#include "kanon/errors.hpp"

namespace kanon::keyfile {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "kanon-key v1";

json public_json(const KeyPair& keys) {
    json pub;
    switch (keys.backend) {
        case BackendId::clear: break;
        case BackendId::gm: {
            const auto& pk = std::get<gm::PublicKey>(keys.public_key);
            pub["n"] = to_hex(pk.n);
            pub["y"] = to_hex(pk.y);
            break;
        }
        case BackendId::paillier: {
            const auto& pk = std::get<paillier::PublicKey>(keys.public_key);
            pub["n"] = to_hex(pk.n);
            break;
        }
    }
    return pub;
}

json secret_json(const KeyPair& keys) {
    json sec;
    switch (keys.backend) {
        case BackendId::clear: break;
        case BackendId::gm: {
            const auto& sk = std::get<gm::SecretKey>(keys.secret_key);
            sec["p"] = to_hex(sk.p);
            sec["q"] = to_hex(sk.q);
            break;
        }
        case BackendId::paillier: {
            const auto& sk = std::get<paillier::SecretKey>(keys.secret_key);
            sec["lambda"] = to_hex(sk.lambda);
            sec["mu"] = to_hex(sk.mu);
            break;
        }
    }
    return sec;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open key file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("bad key file " + path.string() + ": " + e.what());
    }
    if (j.value("format", "") != kFormat)
        throw ParseError("key file " + path.string() + " has unknown format");
    return j;
}

void check_backend(const json& j, BackendId backend, const std::filesystem::path& path) {
    if (j.value("backend", "") != backend_name(backend))
        throw ParseError("key file " + path.string() + " is for backend \"" +
                         j.value("backend", "?") + "\"");
}

BigUint field(const json& j, const char* section, const char* name) {
    if (!j.contains(section) || !j[section].contains(name))
        throw ParseError(std::string("key file missing ") + section + "." + name);
    return from_hex(j[section][name].get<std::string>());
}

}  // namespace

void save_keypair(const KeyPair& keys, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::string stem = std::string(backend_name(keys.backend));

    json pub;
    pub["format"] = kFormat;
    pub["backend"] = stem;
    pub["modulus_bits"] = keys.modulus_bits;
    pub["public"] = public_json(keys);

    json full = pub;
    full["secret"] = secret_json(keys);

    auto write = [&](const std::filesystem::path& path, const json& j) {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw Error("cannot write key file " + path.string());
        out << j.dump(2) << '\n';
    };
    write(dir / (stem + ".pub.json"), pub);
    write(dir / (stem + ".key.json"), full);
}

std::pair<AnyPublicKey, unsigned> load_public(const std::filesystem::path& dir,
                                              BackendId backend) {
    const std::string stem = std::string(backend_name(backend));
    // The full key file works too; the public half is all that is read here.
    std::filesystem::path path = dir / (stem + ".pub.json");
    if (!std::filesystem::exists(path)) path = dir / (stem + ".key.json");
    const json j = read_json(path);
    check_backend(j, backend, path);
    const auto modulus_bits = j.value("modulus_bits", 0u);
    switch (backend) {
        case BackendId::clear: return {ClearPublicKey{}, modulus_bits};
        case BackendId::gm:
            return {gm::PublicKey{field(j, "public", "n"), field(j, "public", "y")}, modulus_bits};
        case BackendId::paillier: {
            paillier::PublicKey pk;
            pk.n = field(j, "public", "n");
            pk.n_squared = pk.n * pk.n;
            pk.g = pk.n + 1;
            return {std::move(pk), modulus_bits};
        }
    }
    throw DomainError("unknown backend id");
}

KeyPair load_keypair(const std::filesystem::path& dir, BackendId backend) {
    const std::string stem = std::string(backend_name(backend));
    const std::filesystem::path path = dir / (stem + ".key.json");
    const json j = read_json(path);
    check_backend(j, backend, path);
    KeyPair keys;
    keys.backend = backend;
    keys.modulus_bits = j.value("modulus_bits", 0u);
    switch (backend) {
        case BackendId::clear:
            keys.public_key = ClearPublicKey{};
            keys.secret_key = ClearSecretKey{};
            return keys;
        case BackendId::gm:
            keys.public_key = gm::PublicKey{field(j, "public", "n"), field(j, "public", "y")};
            keys.secret_key = gm::SecretKey{field(j, "secret", "p"), field(j, "secret", "q")};
            return keys;
        case BackendId::paillier: {
            paillier::PublicKey pk;
            pk.n = field(j, "public", "n");
            pk.n_squared = pk.n * pk.n;
            pk.g = pk.n + 1;
            keys.public_key = std::move(pk);
            keys.secret_key =
                paillier::SecretKey{field(j, "secret", "lambda"), field(j, "secret", "mu")};
            return keys;
        }
    }
    throw DomainError("unknown backend id");
}

}  // namespace kanon::keyfile
