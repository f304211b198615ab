#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sboxgen/sbox.hpp"
#include "sboxgen/spectral.hpp"

namespace sboxgen {

// Difference distribution: counts[a][b] = #{x : S(x) ^ S(x^a) = b}.
struct DifferenceTable {
    int n;
    std::vector<std::vector<int>> counts;
};

inline DifferenceTable difference_table(const SBox& s) {
    const int size = s.size();
    DifferenceTable t{s.n(), std::vector<std::vector<int>>(
                                 static_cast<std::size_t>(size),
                                 std::vector<int>(static_cast<std::size_t>(size), 0))};
    for (int a = 0; a < size; ++a)
        for (int x = 0; x < size; ++x)
            ++t.counts[static_cast<std::size_t>(a)]
                      [static_cast<std::size_t>(s[x] ^ s[x ^ a])];
    return t;
}

// Streaming max over a != 0; never materializes the full table.
inline int differential_uniformity(const SBox& s) {
    const int size = s.size();
    std::vector<int> row(static_cast<std::size_t>(size));
    int delta = 0;
    for (int a = 1; a < size; ++a) {
        std::fill(row.begin(), row.end(), 0);
        for (int x = 0; x < size; ++x) {
            const int c = ++row[static_cast<std::size_t>(s[x] ^ s[x ^ a])];
            if (c > delta) delta = c;
        }
    }
    return delta;
}

// In-place binary Moebius transform: truth table -> ANF coefficients.
inline void moebius_inplace(std::uint8_t* f, int n) {
    const int size = 1 << n;
    for (int step = 1; step < size; step <<= 1)
        for (int block = 0; block < size; block += step << 1)
            for (int k = block; k < block + step; ++k)
                f[k + step] ^= f[k];
}

// deg(S) = max over nonzero v of deg(v . S)
inline int algebraic_degree(const SBox& s) {
    const int n = s.n();
    const int size = s.size();
    std::vector<std::uint8_t> f(static_cast<std::size_t>(size));
    int deg = 0;
    for (int v = 1; v < size; ++v) {
        for (int x = 0; x < size; ++x)
            f[static_cast<std::size_t>(x)] =
                static_cast<std::uint8_t>(std::popcount(static_cast<unsigned>(v) & s[x]) & 1);
        moebius_inplace(f.data(), n);
        for (int u = 0; u < size; ++u)
            if (f[static_cast<std::size_t>(u)] && std::popcount(static_cast<unsigned>(u)) > deg)
                deg = std::popcount(static_cast<unsigned>(u));
    }
    return deg;
}

namespace detail {

// Incremental GF(2) basis over bit-packed columns of 2^n evaluation rows.
class Gf2Basis {
public:
    explicit Gf2Basis(int rows) : words_((rows + 63) / 64) {}

    // Reduces col against the basis; if independent, absorbs it and
    // returns true. Exact rank tracking, no randomization.
    bool insert(std::vector<std::uint64_t> col) {
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (get_bit(col, pivots_[i])) xor_into(col, basis_[i]);
        const int p = first_set(col);
        if (p < 0) return false;
        pivots_.push_back(p);
        basis_.push_back(std::move(col));
        return true;
    }

    int rank() const { return static_cast<int>(basis_.size()); }
    int words() const { return words_; }

private:
    static bool get_bit(const std::vector<std::uint64_t>& v, int bit) {
        return (v[static_cast<std::size_t>(bit >> 6)] >> (bit & 63)) & 1;
    }
    static void xor_into(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] ^= src[k];
    }
    static int first_set(const std::vector<std::uint64_t>& v) {
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k]) return static_cast<int>(k * 64) + std::countr_zero(v[k]);
        return -1;
    }

    int words_;
    std::vector<std::vector<std::uint64_t>> basis_;
    std::vector<int> pivots_;
};

// Next mask with the same popcount (Gosper's hack); masks of one weight
// come out in increasing numeric order, giving a fixed canonical
// monomial enumeration.
inline std::uint32_t next_same_weight(std::uint32_t v) {
    const std::uint32_t c = v & (0u - v);
    const std::uint32_t r = v + c;
    return (((r ^ v) >> 2) / c) | r;
}

}  // namespace detail

// AI(S): smallest d >= 1 such that some nonzero polynomial of degree <= d
// in the 2n graph variables vanishes on all points (x, S(x)). Found as the
// first degree where the monomial evaluation matrix develops a kernel.
inline int algebraic_immunity(const SBox& s) {
    const int n = s.n();
    const int nvars = 2 * n;
    const int pts = s.size();
    const int words = (pts + 63) / 64;

    // graph point x: bits 0..n-1 = x, bits n..2n-1 = S(x)
    std::vector<std::uint32_t> z(static_cast<std::size_t>(pts));
    for (int x = 0; x < pts; ++x)
        z[static_cast<std::size_t>(x)] =
            static_cast<std::uint32_t>(x) | (static_cast<std::uint32_t>(s[x]) << n);

    detail::Gf2Basis basis(pts);
    // constant monomial: ones on every evaluation row
    std::vector<std::uint64_t> ones(static_cast<std::size_t>(words), ~std::uint64_t{0});
    if (pts & 63) ones.back() = (std::uint64_t{1} << (pts & 63)) - 1;
    basis.insert(std::move(ones));

    std::vector<std::uint64_t> col(static_cast<std::size_t>(words));
    for (int d = 1; d <= nvars; ++d) {
        std::uint32_t m = (1u << d) - 1;
        const std::uint32_t limit = 1u << nvars;
        while (m < limit) {
            std::fill(col.begin(), col.end(), 0);
            for (int x = 0; x < pts; ++x)
                if ((z[static_cast<std::size_t>(x)] & m) == m)
                    col[static_cast<std::size_t>(x >> 6)] |= std::uint64_t{1} << (x & 63);
            if (!basis.insert(col)) return d;
            m = detail::next_same_weight(m);
        }
    }
    return nvars;  // unreachable for any permutation
}

struct PropertyReport {
    int nl = 0;
    int delta = 0;
    int degree = 0;
    int ai = 0;
    bool balanced = false;
};

inline PropertyReport full_report(const SBox& s) {
    PropertyReport r;
    r.nl = nonlinearity(s);
    r.delta = differential_uniformity(s);
    r.degree = algebraic_degree(s);
    r.ai = algebraic_immunity(s);
    r.balanced = true;  // every SBox instance is bijective by construction
    return r;
}

inline std::string report_kv(const PropertyReport& r) {
    std::ostringstream out;
    out << "nl=" << r.nl << '\n'
        << "delta=" << r.delta << '\n'
        << "degree=" << r.degree << '\n'
        << "ai=" << r.ai << '\n'
        << "balanced=" << (r.balanced ? "true" : "false") << '\n';
    return out.str();
}

}  // namespace sboxgen
