#include "kanon/index_store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>

#include "kanon/errors.hpp"

namespace kanon::index {
namespace {

constexpr std::string_view kHeaderPrefix = "#kanon-index v1 p=";

}  // namespace

InvertedIndex::InvertedIndex(std::size_t p, std::vector<IndexEntry> entries)
    : p_(p), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const IndexEntry& a, const IndexEntry& b) { return a.term < b.term; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].posting.size() != p_)
            throw PostingLengthMismatch("posting for \"" + entries_[i].term + "\" has " +
                                        std::to_string(entries_[i].posting.size()) +
                                        " bits, index declares " + std::to_string(p_));
        if (i > 0 && entries_[i].term == entries_[i - 1].term)
            throw DuplicateTerm("duplicate term \"" + entries_[i].term + "\"");
    }
}

std::vector<std::string> InvertedIndex::terms() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const IndexEntry& e : entries_) out.push_back(e.term);
    return out;
}

std::size_t InvertedIndex::block_count(std::size_t k) const {
    if (k < 1) throw DomainError("block_count: k must be >= 1");
    return entries_.empty() ? 0 : (entries_.size() + k - 1) / k;
}

InvertedIndex load_index(const std::filesystem::path& path, std::size_t expected_p) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open index file " + path.string());
    std::string line;
    if (!std::getline(in, line)) {
        // Zero-length file: an empty index, but only when the caller supplies p.
        if (expected_p == 0) throw ParseError("empty file and no expected posting length");
        return InvertedIndex(expected_p, {});
    }
    if (!line.starts_with(kHeaderPrefix))
        throw ParseError("missing header \"" + std::string(kHeaderPrefix) + "<p>\"", 1);
    std::size_t p = 0;
    try {
        std::size_t pos = 0;
        const std::string digits = line.substr(kHeaderPrefix.size());
        p = std::stoul(digits, &pos);
        if (pos != digits.size() || p < 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw ParseError("malformed posting length in header", 1);
    }
    if (expected_p != 0 && p != expected_p)
        throw PostingLengthMismatch("index declares p=" + std::to_string(p) + ", expected p=" +
                                        std::to_string(expected_p),
                                    1);
    std::vector<IndexEntry> entries;
    std::size_t lineno = 1;
    const std::size_t want_digits = 2 * ((p + 7) / 8);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw ParseError("expected `term<TAB>hex`", lineno);
        std::string term = line.substr(0, tab);
        std::string hex = line.substr(tab + 1);
        if (hex.size() != want_digits)
            throw PostingLengthMismatch("posting is " + std::to_string(hex.size()) +
                                            " hex digits, p=" + std::to_string(p) + " needs " +
                                            std::to_string(want_digits),
                                        lineno);
        try {
            entries.push_back({std::move(term), BitVec::from_hex(hex, p)});
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return InvertedIndex(p, std::move(entries));
}

void save_index(const InvertedIndex& index, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write index file " + path.string());
    out << kHeaderPrefix << index.p() << '\n';
    for (const IndexEntry& e : index.entries()) out << e.term << '\t' << e.posting.to_hex() << '\n';
    if (!out) throw Error("short write to " + path.string());
}

PostingBlock get_block(const InvertedIndex& index, std::size_t block_id, std::size_t k) {
    const std::size_t blocks = index.block_count(k);
    if (block_id >= blocks)
        throw BlockOutOfRange("block " + std::to_string(block_id) + " not in [0, " +
                              std::to_string(blocks) + ")");
    PostingBlock block;
    block.p = index.p();
    block.postings.reserve(k);
    const std::size_t begin = block_id * k;
    const std::size_t end = std::min(begin + k, index.size());
    for (std::size_t r = begin; r < end; ++r) block.postings.push_back(index.at(r).posting);
    while (block.postings.size() < k) block.postings.emplace_back(index.p());
    return block;
}

InvertedIndex gen_synthetic_index(std::size_t terms, std::size_t p, std::uint64_t seed) {
    if (terms < 1) throw DomainError("gen_synthetic_index: terms must be >= 1");
    if (p < 1) throw DomainError("gen_synthetic_index: p must be >= 1");
    std::mt19937_64 eng(seed);
    const std::size_t nbytes = (p + 7) / 8;
    std::vector<IndexEntry> entries;
    entries.reserve(terms);
    char name[24];
    for (std::size_t t = 0; t < terms; ++t) {
        std::snprintf(name, sizeof name, "t%06zu", t);
        BitVec posting(p);
        std::string hex;
        hex.reserve(nbytes * 2);
        // Draw whole bytes, then zero the pad bits to keep the vector canonical.
        std::vector<std::uint8_t> bytes(nbytes);
        for (std::size_t i = 0; i < nbytes; ++i)
            bytes[i] = static_cast<std::uint8_t>(eng() >> 56);
        const std::size_t pad = nbytes * 8 - p;
        if (pad) bytes.back() &= static_cast<std::uint8_t>(0xffu << pad);
        for (std::size_t s = 0; s < p; ++s)
            posting.set(s, (bytes[s / 8] >> (7 - s % 8)) & 1);
        entries.push_back({name, std::move(posting)});
    }
    return InvertedIndex(p, std::move(entries));
}

}  // namespace kanon::index
