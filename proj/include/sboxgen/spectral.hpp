#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sboxgen/sbox.hpp"

namespace sboxgen {

struct WhsOverflow : std::overflow_error {
    using std::overflow_error::overflow_error;
};

using uint128 = unsigned __int128;

inline std::string to_string(uint128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    return std::string(out.rbegin(), out.rend());
}

// WHS cost value. The default configuration (integer X) is carried as an
// exact 128-bit integer so candidate ordering never depends on floating
// rounding; a non-integer X falls back to a real value.
class CostValue {
public:
    CostValue() : exact_(true), iv_(0), rv_(0.0) {}
    static CostValue exact(uint128 v) {
        CostValue c;
        c.exact_ = true;
        c.iv_ = v;
        return c;
    }
    static CostValue real(double v) {
        CostValue c;
        c.exact_ = false;
        c.rv_ = v;
        return c;
    }

    bool is_exact() const { return exact_; }
    uint128 int_value() const {
        if (!exact_) throw std::logic_error("cost is not on the exact integer path");
        return iv_;
    }
    double real_value() const {
        return exact_ ? static_cast<double>(iv_) : rv_;
    }
    std::string str() const {
        return exact_ ? to_string(iv_) : std::to_string(rv_);
    }

    friend bool operator<(const CostValue& a, const CostValue& b) {
        if (a.exact_ && b.exact_) return a.iv_ < b.iv_;
        return a.as_long_double() < b.as_long_double();
    }
    friend bool operator==(const CostValue& a, const CostValue& b) {
        if (a.exact_ && b.exact_) return a.iv_ == b.iv_;
        return a.as_long_double() == b.as_long_double();
    }

private:
    long double as_long_double() const {
        return exact_ ? static_cast<long double>(iv_) : static_cast<long double>(rv_);
    }

    bool exact_;
    uint128 iv_;
    double rv_;
};

struct CostParams {
    double x = 0.0;  // spectrum offset X
    int r = 12;      // exponent R
};

struct EvalResult {
    int nl = 0;
    CostValue cost;
};

namespace detail {

// parity(b & v) as +1/-1, for all byte pairs
inline const std::int32_t* sign_row(unsigned b) {
    static const auto table = [] {
        auto t = std::make_unique<std::array<std::array<std::int32_t, 256>, 256>>();
        for (unsigned i = 0; i < 256; ++i)
            for (unsigned j = 0; j < 256; ++j)
                (*t)[i][j] = (std::popcount(i & j) & 1) ? -1 : 1;
        return t;
    }();
    return (*table)[b].data();
}

inline uint128 checked_pow(std::uint64_t base, int exp) {
    uint128 acc = 1;
    for (int k = 0; k < exp; ++k) {
        if (base != 0 && acc > ~uint128{0} / base)
            throw WhsOverflow("|WHT - X|^R exceeds 128 bits");
        acc *= base;
    }
    return acc;
}

}  // namespace detail

// In-place fast butterfly over a +/-1 sign vector.
inline void fwht_inplace(std::int32_t* w, int size) {
    for (int step = 1; step < size; step <<= 1) {
        for (int block = 0; block < size; block += step << 1) {
            for (int k = block; k < block + step; ++k) {
                const std::int32_t a = w[k];
                const std::int32_t b = w[k + step];
                w[k] = a + b;
                w[k + step] = a - b;
            }
        }
    }
}

// W(a) = sum_x (-1)^(tt[x] xor parity(a & x)), all a at once, O(n 2^n).
inline std::vector<std::int32_t> walsh_transform(const TruthTable& tt) {
    const int size = 1 << tt.n;
    if (static_cast<int>(tt.bits.size()) != size)
        throw LengthMismatch("truth table length does not match bit width");
    std::vector<std::int32_t> w(static_cast<std::size_t>(size));
    for (int x = 0; x < size; ++x) w[static_cast<std::size_t>(x)] = tt.bits[static_cast<std::size_t>(x)] ? -1 : 1;
    fwht_inplace(w.data(), size);
    return w;
}

// Full spectrum WHT[b][a] for b = 1 .. 2^n-1. coeffs[b-1][a].
struct WalshSpectrum {
    int n;
    std::vector<std::vector<std::int32_t>> coeffs;
};

inline WalshSpectrum walsh_spectrum(const SBox& s) {
    const int size = s.size();
    WalshSpectrum ws{s.n(), {}};
    ws.coeffs.reserve(static_cast<std::size_t>(size - 1));
    for (int b = 1; b < size; ++b) {
        const std::int32_t* row = detail::sign_row(static_cast<unsigned>(b));
        std::vector<std::int32_t> w(static_cast<std::size_t>(size));
        for (int x = 0; x < size; ++x) w[static_cast<std::size_t>(x)] = row[s[x]];
        fwht_inplace(w.data(), size);
        ws.coeffs.push_back(std::move(w));
    }
    return ws;
}

// Single-pass evaluator: one spectrum sweep yields both nonlinearity and
// the WHS cost. Powers |W - X|^R are cached per CostParams since the GA
// calls this in its hot loop.
class Evaluator {
public:
    Evaluator(int n, CostParams params) : n_(n), params_(params) {
        check_bit_width(n);
        const double xr = std::round(params.x);
        if (params.r < 1) throw std::invalid_argument("cost exponent R must be >= 1");
        integer_x_ = std::isfinite(params.x) && params.x == xr &&
                     std::abs(xr) <= 1e6;
        if (integer_x_) {
            x_int_ = static_cast<std::int64_t>(xr);
            const std::int64_t max_abs = (std::int64_t{1} << n) + std::abs(x_int_);
            pow_table_.resize(static_cast<std::size_t>(max_abs) + 1);
            pow_valid_.resize(static_cast<std::size_t>(max_abs) + 1, true);
            for (std::int64_t v = 0; v <= max_abs; ++v) {
                try {
                    pow_table_[static_cast<std::size_t>(v)] =
                        detail::checked_pow(static_cast<std::uint64_t>(v), params.r);
                } catch (const WhsOverflow&) {
                    pow_valid_[static_cast<std::size_t>(v)] = false;
                }
            }
        }
    }

    EvalResult operator()(const SBox& s) const {
        if (s.n() != n_) throw std::invalid_argument("evaluator bit width mismatch");
        const int size = s.size();
        std::int32_t w[1 << kMaxBits];
        std::int32_t max_abs = 0;
        uint128 icost = 0;
        double rcost = 0.0;
        for (int b = 1; b < size; ++b) {
            const std::int32_t* row = detail::sign_row(static_cast<unsigned>(b));
            for (int x = 0; x < size; ++x) w[x] = row[s[x]];
            fwht_inplace(w, size);
            if (integer_x_) {
                for (int a = 0; a < size; ++a) {
                    const std::int32_t c = w[a];
                    const std::int32_t abs_c = c < 0 ? -c : c;
                    if (abs_c > max_abs) max_abs = abs_c;
                    std::int64_t d = static_cast<std::int64_t>(c) - x_int_;
                    if (d < 0) d = -d;
                    if (!pow_valid_[static_cast<std::size_t>(d)])
                        throw WhsOverflow("|WHT - X|^R exceeds 128 bits");
                    const uint128 term = pow_table_[static_cast<std::size_t>(d)];
                    if (icost > ~uint128{0} - term)
                        throw WhsOverflow("WHS sum exceeds 128 bits");
                    icost += term;
                }
            } else {
                for (int a = 0; a < size; ++a) {
                    const std::int32_t c = w[a];
                    const std::int32_t abs_c = c < 0 ? -c : c;
                    if (abs_c > max_abs) max_abs = abs_c;
                    rcost += std::pow(std::abs(static_cast<double>(c) - params_.x),
                                      static_cast<double>(params_.r));
                }
            }
        }
        EvalResult res;
        res.nl = (1 << (n_ - 1)) - max_abs / 2;
        res.cost = integer_x_ ? CostValue::exact(icost) : CostValue::real(rcost);
        return res;
    }

    const CostParams& params() const { return params_; }

private:
    int n_;
    CostParams params_;
    bool integer_x_ = true;
    std::int64_t x_int_ = 0;
    std::vector<uint128> pow_table_;
    std::vector<bool> pow_valid_;
};

inline EvalResult evaluate(const SBox& s, const CostParams& params = {}) {
    return Evaluator(s.n(), params)(s);
}

// NL(S) = 2^(n-1) - max_{b != 0, a} |WHT[b][a]| / 2
inline int nonlinearity(const SBox& s) {
    return Evaluator(s.n(), CostParams{0.0, 2})(s).nl;
}

// WHS = sum_{b != 0} sum_a |WHT[b][a] - X|^R
inline CostValue whs_cost(const SBox& s, const CostParams& params = {}) {
    return Evaluator(s.n(), params)(s).cost;
}

}  // namespace sboxgen
