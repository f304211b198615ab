#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "sboxgen/rng.hpp"
#include "sboxgen/sbox.hpp"
#include "sboxgen/spectral.hpp"

namespace sboxgen {

struct SearchParams {
    int n = 8;
    int k_pop = 1;           // elite population size
    int k_iter = 150000;     // iteration cap
    int k_mut = 7;           // children per surviving parent per iteration
    int target_nl = 104;
    CostParams cost{};       // X = 0, R = 12
    std::uint64_t seed = 0;
    int lanes = 8;           // worker lanes inside one run
    bool record_trace = false;
};

struct Candidate {
    SBox sbox;
    int nl;
    CostValue cost;
};

struct SearchOutcome {
    bool success = false;
    std::optional<SBox> sbox;           // winner on success, best-ever otherwise
    std::uint64_t k_sbox = 0;           // every evaluate() call, initial pop included
    int iterations_used = 0;
    std::vector<std::pair<int, CostValue>> trace;  // per-iteration elite best
};

// Truncation survival: (nl desc, cost asc), insertion order as the final
// tiebreak (stable sort), keep min(k_pop, |pop|).
inline std::vector<Candidate> elite_selection(std::vector<Candidate> pop, int k_pop) {
    if (pop.empty()) throw std::invalid_argument("elite_selection: empty population");
    if (k_pop < 1) throw std::invalid_argument("elite_selection: k_pop must be >= 1");
    std::stable_sort(pop.begin(), pop.end(), [](const Candidate& a, const Candidate& b) {
        if (a.nl != b.nl) return a.nl > b.nl;
        return a.cost < b.cost;
    });
    if (static_cast<int>(pop.size()) > k_pop)
        pop.erase(pop.begin() + k_pop, pop.end());
    return pop;
}

namespace detail {

// Persistent worker pool for the per-iteration child batch. Slots are
// claimed through an atomic counter; each slot's work is a pure function
// of its index, so the schedule cannot affect results.
class LanePool {
public:
    explicit LanePool(int lanes) : lanes_(lanes < 1 ? 1 : lanes) {
        for (int i = 0; i < lanes_ - 1; ++i)
            workers_.emplace_back([this] { worker_loop(); });
    }

    LanePool(const LanePool&) = delete;
    LanePool& operator=(const LanePool&) = delete;

    ~LanePool() {
        {
            std::lock_guard<std::mutex> lk(m_);
            stop_ = true;
        }
        cv_start_.notify_all();
        for (auto& t : workers_) t.join();
    }

    void run(int count, const std::function<void(int)>& fn) {
        if (lanes_ == 1 || count < 2) {
            for (int i = 0; i < count; ++i) fn(i);
            return;
        }
        {
            std::lock_guard<std::mutex> lk(m_);
            job_ = &fn;
            count_ = count;
            next_.store(0, std::memory_order_relaxed);
            idle_workers_ = 0;
            ++generation_;
        }
        cv_start_.notify_all();
        drain();
        std::unique_lock<std::mutex> lk(m_);
        cv_done_.wait(lk, [this] { return idle_workers_ == static_cast<int>(workers_.size()); });
        job_ = nullptr;
    }

private:
    void drain() {
        for (;;) {
            const int i = next_.fetch_add(1, std::memory_order_relaxed);
            if (i >= count_) break;
            (*job_)(i);
        }
    }

    void worker_loop() {
        std::uint64_t seen = 0;
        for (;;) {
            {
                std::unique_lock<std::mutex> lk(m_);
                cv_start_.wait(lk, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            drain();
            {
                std::lock_guard<std::mutex> lk(m_);
                ++idle_workers_;
            }
            cv_done_.notify_one();
        }
    }

    int lanes_;
    std::vector<std::thread> workers_;
    std::mutex m_;
    std::condition_variable cv_start_, cv_done_;
    const std::function<void(int)>* job_ = nullptr;
    int count_ = 0;
    std::atomic<int> next_{0};
    int idle_workers_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
};

inline void validate(const SearchParams& p) {
    check_bit_width(p.n);
    if (p.k_pop < 1 || p.k_mut < 1 || p.k_iter < 1 || p.lanes < 1)
        throw std::invalid_argument("k_pop, k_mut, k_iter and lanes must all be >= 1");
}

}  // namespace detail

// The modified genetic algorithm: prune to the elite k_pop, give every
// survivor k_mut single-transposition children, evaluate, stop at the
// first child reaching target_nl. Children join the pool and the next
// pruning decides. Each (iteration, parent, child) slot owns its own RNG
// substream and results merge in slot order, so the outcome does not
// depend on the lane count; "first success" is the smallest
// (iteration, parent, child) triple, matching a sequential sweep.
inline SearchOutcome ga_modified(const SearchParams& params) {
    detail::validate(params);
    const Evaluator eval(params.n, params.cost);
    const std::uint32_t size = 1u << params.n;

    SearchOutcome out;
    std::vector<Candidate> pool;
    pool.reserve(static_cast<std::size_t>(params.k_pop * (params.k_mut + 1)));

    for (int p = 0; p < params.k_pop; ++p) {
        SplitMix64 rng(derive_stream(params.seed, 0, static_cast<std::uint64_t>(p), 0));
        SBox sb = SBox::random(params.n, rng);
        EvalResult r = eval(sb);
        ++out.k_sbox;
        if (r.nl >= params.target_nl) {
            out.success = true;
            out.sbox = std::move(sb);
            return out;
        }
        pool.push_back(Candidate{std::move(sb), r.nl, r.cost});
    }

    const int slots = params.k_pop * params.k_mut;
    std::vector<std::optional<Candidate>> children(static_cast<std::size_t>(slots));
    detail::LanePool lanes(params.lanes);

    for (int t = 0; t < params.k_iter; ++t) {
        pool = elite_selection(std::move(pool), params.k_pop);
        if (params.record_trace) out.trace.emplace_back(pool.front().nl, pool.front().cost);

        lanes.run(slots, [&](int idx) {
            const int p = idx / params.k_mut;
            const int k = idx % params.k_mut;
            SplitMix64 rng(derive_stream(params.seed, static_cast<std::uint64_t>(t) + 1,
                                         static_cast<std::uint64_t>(p),
                                         static_cast<std::uint64_t>(k)));
            const int i = static_cast<int>(rng.below(size));
            int j;
            do {
                j = static_cast<int>(rng.below(size));
            } while (j == i);
            SBox child = swap_mutate(pool[static_cast<std::size_t>(p)].sbox, i, j);
            EvalResult r = eval(child);
            children[static_cast<std::size_t>(idx)] = Candidate{std::move(child), r.nl, r.cost};
        });

        for (int idx = 0; idx < slots; ++idx) {
            ++out.k_sbox;
            Candidate& c = *children[static_cast<std::size_t>(idx)];
            if (c.nl >= params.target_nl) {
                out.success = true;
                out.sbox = std::move(c.sbox);
                out.iterations_used = t + 1;
                return out;
            }
        }
        for (auto& c : children) pool.push_back(std::move(*c));
    }

    pool = elite_selection(std::move(pool), 1);
    out.sbox = std::move(pool.front().sbox);
    out.iterations_used = params.k_iter;
    return out;
}

// --- baseline generational GA ---

struct BaselineGaParams {
    int n = 8;
    int pop_size = 20;        // N, must be even
    int generations = 100;    // G
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    int tournament_size = 2;
    std::uint64_t seed = 0;
};

namespace detail {

// Two-point segment exchange with PMX repair: values displaced by the
// copied segment are mapped through the segment's positional pairing
// until a free value is found. Identical parents map to themselves.
inline SBox pmx_child(const SBox& base, const SBox& donor, int lo, int hi) {
    const int size = base.size();
    std::vector<std::uint8_t> t(base.table().begin(), base.table().end());
    std::vector<int> seg_pos(static_cast<std::size_t>(size), -1);
    for (int k = lo; k < hi; ++k) {
        t[static_cast<std::size_t>(k)] = donor[k];
        seg_pos[donor[k]] = k;
    }
    for (int k = 0; k < size; ++k) {
        if (k >= lo && k < hi) continue;
        std::uint8_t v = base[k];
        while (seg_pos[v] >= 0) v = base[seg_pos[v]];
        t[static_cast<std::size_t>(k)] = v;
    }
    return SBox::from_table(base.n(), t);
}

}  // namespace detail

inline std::pair<SBox, SBox> crossover_two_point(const SBox& p1, const SBox& p2,
                                                 int lo, int hi) {
    if (p1.n() != p2.n()) throw std::invalid_argument("crossover: bit width mismatch");
    if (lo < 0 || hi > p1.size() || lo >= hi)
        throw IndexOutOfRange("crossover: bad cut points");
    return {detail::pmx_child(p1, p2, lo, hi), detail::pmx_child(p2, p1, lo, hi)};
}

// Textbook generational GA: tournament selection, two-point repaired
// crossover, one-transposition mutation. Fitness compares
// (nl desc, cost asc). Unchanged children keep their parent's cached
// evaluation; only new tables count toward k_sbox.
inline SearchOutcome ga_baseline(const BaselineGaParams& params, int target_nl,
                                 const CostParams& cost = {}) {
    check_bit_width(params.n);
    if (params.pop_size < 2 || params.pop_size % 2 != 0)
        throw std::invalid_argument("pop_size must be even and >= 2");
    if (params.tournament_size < 2)
        throw std::invalid_argument("tournament_size must be >= 2");
    if (params.crossover_rate < 0 || params.crossover_rate > 1 ||
        params.mutation_rate < 0 || params.mutation_rate > 1)
        throw std::invalid_argument("rates must be in [0, 1]");

    const Evaluator eval(params.n, cost);
    const std::uint32_t size = 1u << params.n;
    SplitMix64 rng(derive_stream(params.seed, 0x6261736556c696eull, 0, 0));

    SearchOutcome out;
    auto better = [](const Candidate& a, const Candidate& b) {
        if (a.nl != b.nl) return a.nl > b.nl;
        return a.cost < b.cost;
    };

    std::vector<Candidate> pop;
    std::optional<Candidate> best;
    auto note = [&](const Candidate& c) {
        if (!best || better(c, *best)) best = c;
    };

    for (int i = 0; i < params.pop_size; ++i) {
        SBox sb = SBox::random(params.n, rng);
        EvalResult r = eval(sb);
        ++out.k_sbox;
        Candidate c{std::move(sb), r.nl, r.cost};
        note(c);
        if (c.nl >= target_nl) {
            out.success = true;
            out.sbox = std::move(c.sbox);
            return out;
        }
        pop.push_back(std::move(c));
    }

    auto tournament = [&]() -> const Candidate& {
        std::size_t winner = rng.below(static_cast<std::uint32_t>(pop.size()));
        for (int k = 1; k < params.tournament_size; ++k) {
            const std::size_t ch = rng.below(static_cast<std::uint32_t>(pop.size()));
            if (better(pop[ch], pop[winner])) winner = ch;
        }
        return pop[winner];
    };

    for (int g = 0; g < params.generations; ++g) {
        std::vector<Candidate> next;
        next.reserve(pop.size());
        for (int i = 0; i < params.pop_size / 2; ++i) {
            Candidate c1 = tournament();
            Candidate c2 = tournament();
            bool dirty1 = false, dirty2 = false;
            if (rng.unit_real() < params.crossover_rate) {
                const int lo = 1 + static_cast<int>(rng.below(size - 2));
                const int hi = lo + 1 + static_cast<int>(rng.below(size - static_cast<std::uint32_t>(lo)));
                auto [a, b] = crossover_two_point(c1.sbox, c2.sbox, lo, hi);
                dirty1 = !(a == c1.sbox);
                dirty2 = !(b == c2.sbox);
                c1.sbox = std::move(a);
                c2.sbox = std::move(b);
            }
            for (Candidate* c : {&c1, &c2}) {
                bool& dirty = (c == &c1) ? dirty1 : dirty2;
                if (rng.unit_real() < params.mutation_rate) {
                    const int i1 = static_cast<int>(rng.below(size));
                    int j1;
                    do {
                        j1 = static_cast<int>(rng.below(size));
                    } while (j1 == i1);
                    c->sbox = swap_mutate(c->sbox, i1, j1);
                    dirty = true;
                }
                if (dirty) {
                    EvalResult r = eval(c->sbox);
                    ++out.k_sbox;
                    c->nl = r.nl;
                    c->cost = r.cost;
                }
                note(*c);
                if (c->nl >= target_nl) {
                    out.success = true;
                    out.sbox = c->sbox;
                    out.iterations_used = g + 1;
                    return out;
                }
            }
            next.push_back(std::move(c1));
            next.push_back(std::move(c2));
        }
        pop = std::move(next);
    }
    out.iterations_used = params.generations;
    out.sbox = std::move(best->sbox);
    out.success = best->nl >= target_nl;
    return out;
}

struct RunRecord {
    SearchParams params;
    SearchOutcome outcome;
    double duration_ms = 0.0;
};

// Harness entry point: one ga_modified run with wall-clock timing and the
// resolved parameter record attached.
inline RunRecord run_single(const SearchParams& params) {
    const auto t0 = std::chrono::steady_clock::now();
    SearchOutcome outcome = ga_modified(params);
    const auto t1 = std::chrono::steady_clock::now();
    return RunRecord{params, std::move(outcome),
                     std::chrono::duration<double, std::milli>(t1 - t0).count()};
}

}  // namespace sboxgen
