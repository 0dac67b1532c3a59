// Binary cache of per-segment count tables.
//
// Layout, every integer little-endian:
//   offset  0  char[4]  magic "GSMC"
//           4  u32      format version (1)
//           8  u32      code version (kCountCodeVersion)
//          12  u32      constraint (0 none, 1 lower, 2 upper)
//          16  u64      x_lo
//          24  u64      x_hi
//          32  u64      alpha, IEEE-754 bits
//          40  u64      beta, IEEE-754 bits
//          48  u32      segment width
//          52  u32      counts per record (kMaxOmega + 1)
//          56  u64      record count R
//          64  R records of { u64 lo, u64 hi, u64 counts[kMaxOmega + 1] }
// The file name is a hash of bytes [0, 56), so a key never reads another
// key's file; the header is still compared field by field on load.

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gsm/errors.hpp"
#include "gsm/prime_engine.hpp"

namespace gsm {

namespace {

constexpr char kMagic[4] = {'G', 'S', 'M', 'C'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 64;
constexpr std::size_t kKeyBytes = 56;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(const std::string& in, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[at + static_cast<std::size_t>(i)]);
    return v;
}

std::string encode_key(const CountCacheKey& key) {
    std::string out(kMagic, sizeof kMagic);
    put_u32(out, kFormatVersion);
    put_u32(out, kCountCodeVersion);
    put_u32(out, static_cast<std::uint32_t>(key.constraint));
    put_u64(out, key.x_lo);
    put_u64(out, key.x_hi);
    put_u64(out, std::bit_cast<std::uint64_t>(key.alpha));
    put_u64(out, std::bit_cast<std::uint64_t>(key.beta));
    put_u32(out, key.segment_width);
    put_u32(out, static_cast<std::uint32_t>(kMaxOmega + 1));
    return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::filesystem::path count_cache_file(const std::filesystem::path& dir, const CountCacheKey& key) {
    std::ostringstream name;
    name << "counts-" << std::hex;
    name.width(16);
    name.fill('0');
    name << fnv1a(encode_key(key)) << ".bin";
    return dir / name.str();
}

std::optional<std::vector<SegmentCounts>> load_count_cache(const std::filesystem::path& dir,
                                                           const CountCacheKey& key) {
    std::ifstream in(count_cache_file(dir, key), std::ios::binary);
    if (!in) return std::nullopt;
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string expected = encode_key(key);
    if (bytes.size() < kHeaderBytes || bytes.compare(0, kKeyBytes, expected) != 0) return std::nullopt;
    const std::uint64_t records = get_u64(bytes, kKeyBytes);
    constexpr std::size_t kRecordBytes = 8 * (2 + kMaxOmega + 1);
    if (records > (bytes.size() - kHeaderBytes) / kRecordBytes ||
        bytes.size() != kHeaderBytes + records * kRecordBytes) {
        return std::nullopt;
    }
    std::vector<SegmentCounts> out(static_cast<std::size_t>(records));
    std::size_t at = kHeaderBytes;
    for (auto& r : out) {
        r.lo = get_u64(bytes, at);
        r.hi = get_u64(bytes, at + 8);
        at += 16;
        for (auto& c : r.counts) {
            c = get_u64(bytes, at);
            at += 8;
        }
    }
    return out;
}

void store_count_cache(const std::filesystem::path& dir, const CountCacheKey& key,
                       std::span<const SegmentCounts> records) {
    std::filesystem::create_directories(dir);
    std::string bytes = encode_key(key);
    put_u64(bytes, records.size());
    for (const auto& r : records) {
        put_u64(bytes, r.lo);
        put_u64(bytes, r.hi);
        for (auto c : r.counts) put_u64(bytes, c);
    }
    const auto path = count_cache_file(dir, key);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write count cache " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("short write to count cache " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace gsm
