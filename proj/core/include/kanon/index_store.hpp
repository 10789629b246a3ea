#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kanon/backend.hpp"
#include "kanon/posting.hpp"

namespace kanon::index {

struct IndexEntry {
    std::string term;
    BitVec posting;
};

/// Inverted index: unique terms in canonical (bytewise lexicographic) order,
/// every posting exactly p bits.
class InvertedIndex {
  public:
    InvertedIndex() = default;
    /// Sorts, validates uniqueness and posting lengths.
    InvertedIndex(std::size_t p, std::vector<IndexEntry> entries);

    std::size_t p() const noexcept { return p_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<IndexEntry>& entries() const noexcept { return entries_; }
    const IndexEntry& at(std::size_t rank) const { return entries_.at(rank); }

    std::vector<std::string> terms() const;
    std::size_t block_count(std::size_t k) const;

  private:
    std::size_t p_ = 0;
    std::vector<IndexEntry> entries_;
};

/// On-disk format: header line `#kanon-index v1 p=<p>`, then one record per
/// line, `term` TAB lowercase hex of ceil(p/8) posting bytes. A zero-length
/// file is accepted as an empty index when expected_p is given.
InvertedIndex load_index(const std::filesystem::path& path, std::size_t expected_p = 0);
void save_index(const InvertedIndex& index, const std::filesystem::path& path);

/// Entries [block_id*k, block_id*k + k), zero-padded to k postings.
PostingBlock get_block(const InvertedIndex& index, std::size_t block_id, std::size_t k);

/// Deterministic index for benchmarks: terms "t000000".. with pseudorandom
/// postings of density 1/2 derived from the seed.
InvertedIndex gen_synthetic_index(std::size_t terms, std::size_t p, std::uint64_t seed);

/// What the client needs to address the served index.
struct Manifest {
    std::size_t p = 0;
    std::size_t k = 0;
    std::vector<std::string> terms;
    BackendId backend = BackendId::clear;
    unsigned modulus_bits = 0;
};

}  // namespace kanon::index
