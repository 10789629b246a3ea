#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "kanon/index_store.hpp"

using namespace kanon;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("kanon-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("empty inputs") {
    TempDir dir;
    const fs::path file = dir.path / "idx";
    write_file(file, "");
    const auto idx = index::load_index(file, 16);
    CHECK(idx.empty());
    CHECK(idx.p() == 16);
    CHECK_THROWS_AS(index::load_index(file), ParseError);

    write_file(file, "#kanon-index v1 p=24\n");
    const auto headed = index::load_index(file);
    CHECK(headed.empty());
    CHECK(headed.p() == 24);
    CHECK(headed.block_count(10) == 0);
}

TEST_CASE("entries sort canonically regardless of file order") {
    TempDir dir;
    const fs::path file = dir.path / "idx";
    write_file(file, "#kanon-index v1 p=8\nb\tff\na\t01\n");
    const auto idx = index::load_index(file);
    CHECK(idx.size() == 2);
    CHECK(idx.at(0).term == "a");
    CHECK(idx.at(1).term == "b");
    CHECK(idx.terms() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("malformed files raise parse errors with line numbers") {
    TempDir dir;
    const fs::path file = dir.path / "idx";

    write_file(file, "#not-an-index\n");
    CHECK_THROWS_AS(index::load_index(file), ParseError);

    write_file(file, "#kanon-index v1 p=zero\n");
    CHECK_THROWS_AS(index::load_index(file), ParseError);

    write_file(file, "#kanon-index v1 p=8\nnotab\n");
    CHECK_THROWS_AS(index::load_index(file), ParseError);

    write_file(file, "#kanon-index v1 p=8\na\tff\nb\tffff\n");
    CHECK_THROWS_WITH_AS(index::load_index(file), doctest::Contains("line 3"),
                         PostingLengthMismatch);

    write_file(file, "#kanon-index v1 p=8\na\tgg\n");
    CHECK_THROWS_WITH_AS(index::load_index(file), doctest::Contains("line 2"), ParseError);

    write_file(file, "#kanon-index v1 p=8\na\tff\na\t00\n");
    CHECK_THROWS_AS(index::load_index(file), DuplicateTerm);

    // Nonzero pad bits in the final byte are rejected.
    write_file(file, "#kanon-index v1 p=4\na\tff\n");
    CHECK_THROWS_AS(index::load_index(file), ParseError);

    write_file(file, "#kanon-index v1 p=8\na\tff\n");
    CHECK_THROWS_AS(index::load_index(file, 16), PostingLengthMismatch);
}

TEST_CASE("save/load round-trips byte-identically") {
    TempDir dir;
    const fs::path file = dir.path / "idx";
    const auto idx = index::gen_synthetic_index(1000, 720, 99);
    index::save_index(idx, file);
    const auto loaded = index::load_index(file, 720);
    CHECK(loaded.size() == 1000);
    CHECK(loaded.p() == 720);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        CHECK(loaded.at(r).term == idx.at(r).term);
        CHECK(loaded.at(r).posting == idx.at(r).posting);
    }
    const fs::path file2 = dir.path / "idx2";
    index::save_index(loaded, file2);
    CHECK(read_file(file) == read_file(file2));
}

TEST_CASE("get_block pads the tail with zero postings") {
    const auto idx = index::gen_synthetic_index(25, 16, 7);
    CHECK(idx.block_count(10) == 3);
    const PostingBlock tail = index::get_block(idx, 2, 10);
    CHECK(tail.postings.size() == 10);
    for (std::size_t j = 0; j < 5; ++j) CHECK(tail.postings[j] == idx.at(20 + j).posting);
    for (std::size_t j = 5; j < 10; ++j) CHECK(tail.postings[j] == BitVec(16));

    const PostingBlock head = index::get_block(idx, 0, 10);
    for (std::size_t j = 0; j < 10; ++j) CHECK(head.postings[j] == idx.at(j).posting);

    CHECK_THROWS_AS(index::get_block(idx, 3, 10), BlockOutOfRange);
}

TEST_CASE("blocks partition the index") {
    const auto idx = index::gen_synthetic_index(47, 24, 11);
    const std::size_t k = 10;
    std::vector<BitVec> concat;
    for (std::size_t b = 0; b < idx.block_count(k); ++b) {
        const PostingBlock block = index::get_block(idx, b, k);
        concat.insert(concat.end(), block.postings.begin(), block.postings.end());
    }
    CHECK(concat.size() == 50);
    for (std::size_t r = 0; r < idx.size(); ++r) CHECK(concat[r] == idx.at(r).posting);
    for (std::size_t r = idx.size(); r < concat.size(); ++r) CHECK(concat[r] == BitVec(24));
}

TEST_CASE("synthetic index is deterministic with the right shape") {
    const auto a = index::gen_synthetic_index(100, 720, 5);
    const auto b = index::gen_synthetic_index(100, 720, 5);
    const auto c = index::gen_synthetic_index(100, 720, 6);
    CHECK(a.size() == 100);
    CHECK(a.p() == 720);
    CHECK(a.at(0).term == "t000000");
    CHECK(a.at(99).term == "t000099");
    bool same = true, differs = false;
    for (std::size_t r = 0; r < 100; ++r) {
        same = same && a.at(r).posting == b.at(r).posting;
        differs = differs || !(a.at(r).posting == c.at(r).posting);
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("synthetic posting density is close to one half") {
    const auto idx = index::gen_synthetic_index(200, 720, 12);
    std::size_t ones = 0;
    for (const auto& e : idx.entries())
        for (std::size_t s = 0; s < e.posting.size(); ++s) ones += e.posting.get(s);
    const double density = static_cast<double>(ones) / (200.0 * 720.0);
    CHECK(density > 0.45);
    CHECK(density < 0.55);
}

TEST_CASE("bitvec uint conversions respect the declared bit order") {
    // p=12: bits 0..11 MSB-first, value 0b1000'0000'0001 has bit 0 and bit 11.
    BitVec v(12);
    v.set(0, true);
    v.set(11, true);
    CHECK(v.to_uint() == 0x801);
    CHECK(v.bytes() == std::vector<std::uint8_t>{0x80, 0x10});
    CHECK(BitVec::from_uint(0x801, 12) == v);
    CHECK(v.to_hex() == "8010");
    CHECK(BitVec::from_hex("8010", 12) == v);
    CHECK_THROWS_AS(BitVec::from_uint(0x1000, 12), DomainError);
    CHECK_THROWS_AS(BitVec::from_hex("801", 12), ParseError);
}
