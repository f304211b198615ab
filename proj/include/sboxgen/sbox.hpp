#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sboxgen/rng.hpp"

namespace sboxgen {

struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotBijective : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct IdenticalIndices : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ZeroSelector : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kMinBits = 3;
inline constexpr int kMaxBits = 8;

inline void check_bit_width(int n) {
    if (n < kMinBits || n > kMaxBits)
        throw std::invalid_argument("bit width must be in [3, 8], got " + std::to_string(n));
}

// Bijective lookup table on 2^n values. Immutable after construction;
// every constructor path enforces the permutation invariant.
class SBox {
public:
    static SBox from_table(int n, std::span<const std::uint8_t> values) {
        check_bit_width(n);
        const std::size_t size = std::size_t{1} << n;
        if (values.size() != size)
            throw LengthMismatch("expected " + std::to_string(size) + " values, got " +
                                 std::to_string(values.size()));
        std::vector<bool> seen(size, false);
        for (std::uint8_t v : values) {
            if (v >= size)
                throw NotBijective("value " + std::to_string(v) + " out of range for n=" +
                                   std::to_string(n));
            if (seen[v])
                throw NotBijective("duplicate value " + std::to_string(v));
            seen[v] = true;
        }
        return SBox(n, std::vector<std::uint8_t>(values.begin(), values.end()));
    }

    static SBox from_table(int n, std::initializer_list<std::uint8_t> values) {
        return from_table(n, std::span<const std::uint8_t>(values.begin(), values.size()));
    }

    static SBox identity(int n) {
        check_bit_width(n);
        std::vector<std::uint8_t> t(std::size_t{1} << n);
        for (std::size_t x = 0; x < t.size(); ++x) t[x] = static_cast<std::uint8_t>(x);
        return SBox(n, std::move(t));
    }

    // Fisher-Yates shuffle of the identity table: uniform over all
    // permutations, bijective by construction.
    static SBox random(int n, SplitMix64& rng) {
        check_bit_width(n);
        const std::uint32_t size = 1u << n;
        std::vector<std::uint8_t> t(size);
        for (std::uint32_t x = 0; x < size; ++x) t[x] = static_cast<std::uint8_t>(x);
        for (std::uint32_t i = size - 1; i > 0; --i) {
            const std::uint32_t j = rng.below(i + 1);
            std::swap(t[i], t[j]);
        }
        return SBox(n, std::move(t));
    }

    int n() const { return n_; }
    int size() const { return 1 << n_; }
    std::uint8_t operator[](int x) const { return table_[static_cast<std::size_t>(x)]; }
    std::span<const std::uint8_t> table() const { return table_; }

    friend bool operator==(const SBox& a, const SBox& b) {
        return a.n_ == b.n_ && a.table_ == b.table_;
    }

private:
    SBox(int n, std::vector<std::uint8_t> table) : n_(n), table_(std::move(table)) {}
    friend SBox swap_mutate(const SBox&, int, int);

    int n_;
    std::vector<std::uint8_t> table_;
};

// One transposition. Involution; preserves bijectivity; input untouched.
inline SBox swap_mutate(const SBox& s, int i, int j) {
    if (i < 0 || j < 0 || i >= s.size() || j >= s.size())
        throw IndexOutOfRange("swap index out of range");
    if (i == j)
        throw IdenticalIndices("swap indices must be distinct");
    std::vector<std::uint8_t> t(s.table().begin(), s.table().end());
    std::swap(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]);
    return SBox(s.n(), std::move(t));
}

struct TruthTable {
    int n;
    std::vector<std::uint8_t> bits;  // one entry per point, 0 or 1
};

// Truth table of the component function x -> parity(b & S(x)).
inline TruthTable component_function(const SBox& s, unsigned b) {
    if (b == 0) throw ZeroSelector("component selector must be nonzero");
    if (b >= (1u << s.n()))
        throw IndexOutOfRange("component selector out of range");
    TruthTable tt{s.n(), std::vector<std::uint8_t>(static_cast<std::size_t>(s.size()))};
    for (int x = 0; x < s.size(); ++x)
        tt.bits[static_cast<std::size_t>(x)] =
            static_cast<std::uint8_t>(std::popcount(b & s[x]) & 1);
    return tt;
}

// --- text format ---
// First line: n. Then 2^n values in lowercase hex (two digits for n > 4,
// one otherwise), 16 per line, space-separated.

inline std::string to_text(const SBox& s) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = std::to_string(s.n());
    out.push_back('\n');
    const int width = s.n() > 4 ? 2 : 1;
    for (int x = 0; x < s.size(); ++x) {
        if (x % 16 != 0) out.push_back(' ');
        const std::uint8_t v = s[x];
        if (width == 2) out.push_back(digits[v >> 4]);
        out.push_back(digits[v & 0xf]);
        if (x % 16 == 15 || x == s.size() - 1) out.push_back('\n');
    }
    return out;
}

inline SBox parse_text(std::istream& in) {
    int n = 0;
    if (!(in >> n)) throw ParseError("missing bit width");
    if (n < kMinBits || n > kMaxBits)
        throw ParseError("bit width must be in [3, 8], got " + std::to_string(n));
    const int size = 1 << n;
    const std::size_t width = n > 4 ? 2 : 1;
    std::vector<std::uint8_t> values;
    values.reserve(static_cast<std::size_t>(size));
    std::string tok;
    for (int k = 0; k < size; ++k) {
        if (!(in >> tok)) throw ParseError("truncated table: expected " + std::to_string(size) +
                                           " values, got " + std::to_string(k));
        if (tok.size() != width)
            throw ParseError("bad token '" + tok + "': expected " + std::to_string(width) +
                             " hex digit(s)");
        unsigned v = 0;
        for (char c : tok) {
            if (c >= '0' && c <= '9') v = v * 16 + static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f') v = v * 16 + static_cast<unsigned>(c - 'a' + 10);
            else throw ParseError("bad hex digit in '" + tok + "'");
        }
        values.push_back(static_cast<std::uint8_t>(v));
    }
    if (in >> tok) throw ParseError("trailing content after table: '" + tok + "'");
    try {
        return SBox::from_table(n, values);
    } catch (const NotBijective& e) {
        throw ParseError(std::string("table is not a permutation: ") + e.what());
    }
}

inline SBox parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_text(in);
}

}  // namespace sboxgen
