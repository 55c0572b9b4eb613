#pragma once

#include <atomic>
#include <chrono>
#include <thread>

#include "kserver/potential.hpp"

namespace kserver {

struct TestCase {
    std::string name;
    SupportWF support;
};

// The three support-set test cases the canonical sweep runs against:
// (a) and (b) on the 8-point cycle with r = 4, (c) on the 3-cube with r = 7.
inline std::vector<TestCase> builtin_testcases() {
    auto cyc = make_space(std::make_shared<const FiniteMetric>(FiniteMetric::cycle(8)), 3);
    auto cube = make_space(std::make_shared<const FiniteMetric>(FiniteMetric::hypercube(3)), 3);
    auto C = [](std::vector<int> v) { return Config(std::move(v)); };

    TestCase a{"a", {cyc, 4, {}}};
    a.support.pairs = {{C({4, 5, 6}), 8},  {C({4, 5, 7}), 8},  {C({4, 3, 6}), 9},  {C({4, 3, 7}), 9},
                       {C({4, 1, 6}), 10}, {C({4, 1, 7}), 10}, {C({4, 2, 5}), 10}, {C({4, 2, 3}), 11}};

    TestCase b{"b", {cyc, 4, {}}};
    b.support.pairs = {{C({4, 5, 6}), 8},  {C({4, 0, 5}), 9},  {C({4, 1, 6}), 10}, {C({4, 2, 5}), 10},
                       {C({4, 4, 6}), 10}, {C({4, 0, 1}), 11}, {C({4, 0, 2}), 11}, {C({4, 2, 2}), 12}};

    TestCase c{"c", {cube, 7, {}}};
    c.support.pairs = {{C({7, 0, 1}), 0}, {C({7, 0, 2}), 0}, {C({7, 0, 4}), 0}};

    for (TestCase* t : {&a, &b, &c}) t->support.validate();
    return {a, b, c};
}

// Point-indexed tables for one test case (the support-induced work function
// materialized as base/wtab/dist).
inline PointTables precompute(const TestCase& tc) {
    return build_point_tables(from_support(tc.support));
}

namespace detail {

// Per-thread scratch for the bitmask check: three n^2 unary block tables and
// three n^2 x n^2 cross-block tables.
struct SweepWorkspace {
    std::array<std::vector<int>, 3> unary;
    std::array<std::vector<int>, 3> edge;
    std::vector<int> v02; // unary[2] + e02 row, rebuilt per outer slot
};

// Decomposed mask: intra-block bits fold into the unaries, cross-block pairs
// populate the edge tables (independent of u, so built once per mask).
inline void build_mask_edges(const PointTables& t, uint32_t mask, SweepWorkspace& ws,
                             std::array<bool, 3>& intra) {
    int n = t.n, nn = n * n;
    std::array<std::vector<std::array<int, 2>>, 3> cross;
    intra = {false, false, false};
    for (int bit = 0; bit < 15; ++bit) {
        if (!(mask & (1u << bit))) continue;
        auto [s1, s2] = k3_pairs()[static_cast<size_t>(bit)];
        int b1 = s1 / 2, b2 = s2 / 2;
        if (b1 == b2)
            intra[static_cast<size_t>(b1)] = true;
        else
            cross[static_cast<size_t>(b1 + b2 - 1)].push_back({s1 % 2, s2 % 2});
    }
    for (int e = 0; e < 3; ++e) {
        auto& tab = ws.edge[static_cast<size_t>(e)];
        tab.assign(static_cast<size_t>(nn) * nn, 0);
        for (const auto& jj : cross[static_cast<size_t>(e)]) {
            for (int s1 = 0; s1 < nn; ++s1) {
                int p1 = jj[0] == 0 ? s1 / n : s1 % n;
                const int* drow = t.dist.data() + static_cast<size_t>(p1) * n;
                int* row = tab.data() + static_cast<size_t>(s1) * nn;
                for (int s2 = 0; s2 < nn; ++s2) row[s2] -= drow[jj[1] == 0 ? s2 / n : s2 % n];
            }
        }
    }
}

inline void build_unaries(const PointTables& t, int u, const std::array<bool, 3>& intra,
                          SweepWorkspace& ws) {
    int n = t.n, nn = n * n;
    const int* wrow = t.wtab.data() + static_cast<size_t>(u) * nn;
    for (int i = 0; i < 3; ++i) {
        auto& tab = ws.unary[static_cast<size_t>(i)];
        tab.resize(static_cast<size_t>(nn));
        if (intra[static_cast<size_t>(i)]) {
            for (int s = 0; s < nn; ++s) tab[static_cast<size_t>(s)] = wrow[s] - t.dist[static_cast<size_t>(s)];
        } else {
            std::copy(wrow, wrow + nn, tab.begin());
        }
    }
}

// Exact minimum over all slot assignments for one u (plus base[u]).
inline long long min_at_u(const PointTables& t, int u, SweepWorkspace& ws) {
    int nn = t.n * t.n;
    const int* u0 = ws.unary[0].data();
    const int* u1 = ws.unary[1].data();
    const int* u2 = ws.unary[2].data();
    const int* e01 = ws.edge[0].data();
    const int* e02 = ws.edge[1].data();
    const int* e12 = ws.edge[2].data();
    ws.v02.resize(static_cast<size_t>(nn));
    int* v02 = ws.v02.data();
    long long best = std::numeric_limits<long long>::max();
    for (int s0 = 0; s0 < nn; ++s0) {
        const int* e02row = e02 + static_cast<size_t>(s0) * nn;
        for (int s2 = 0; s2 < nn; ++s2) v02[s2] = u2[s2] + e02row[s2];
        const int* e01row = e01 + static_cast<size_t>(s0) * nn;
        long long a0 = u0[s0];
        for (int s1 = 0; s1 < nn; ++s1) {
            long long a1 = a0 + u1[s1] + e01row[s1];
            const int* e12row = e12 + static_cast<size_t>(s1) * nn;
            int m = v02[0] + e12row[0];
            for (int s2 = 1; s2 < nn; ++s2) m = std::min(m, v02[s2] + e12row[s2]);
            best = std::min(best, a1 + m);
        }
    }
    return best + t.base[static_cast<size_t>(u)];
}

// Is there any slot assignment at this u with value strictly below bound?
inline bool below_at_u(const PointTables& t, int u, long long bound, SweepWorkspace& ws) {
    int nn = t.n * t.n;
    const int* u0 = ws.unary[0].data();
    const int* u1 = ws.unary[1].data();
    const int* u2 = ws.unary[2].data();
    const int* e01 = ws.edge[0].data();
    const int* e02 = ws.edge[1].data();
    const int* e12 = ws.edge[2].data();
    ws.v02.resize(static_cast<size_t>(nn));
    int* v02 = ws.v02.data();
    long long rel = bound - t.base[static_cast<size_t>(u)];
    for (int s0 = 0; s0 < nn; ++s0) {
        const int* e02row = e02 + static_cast<size_t>(s0) * nn;
        for (int s2 = 0; s2 < nn; ++s2) v02[s2] = u2[s2] + e02row[s2];
        const int* e01row = e01 + static_cast<size_t>(s0) * nn;
        long long a0 = u0[s0];
        for (int s1 = 0; s1 < nn; ++s1) {
            long long a1 = a0 + u1[s1] + e01row[s1];
            const int* e12row = e12 + static_cast<size_t>(s1) * nn;
            int m = v02[0] + e12row[0];
            for (int s2 = 1; s2 < nn; ++s2) m = std::min(m, v02[s2] + e12row[s2]);
            if (a1 + m < rel) return true;
        }
    }
    return false;
}

} // namespace detail

// Canonical argument for one bitmask against one precomputed test case:
// compute the exact minimum m_r at u = r, then scan u != r for any strictly
// smaller value (early exit). Pass means no such value exists.
inline bool check_bitmask(const PointTables& t, uint32_t mask, detail::SweepWorkspace& ws) {
    if (t.r < 0) throw std::invalid_argument("test-case tables carry no last request");
    std::array<bool, 3> intra{};
    detail::build_mask_edges(t, mask, ws, intra);
    detail::build_unaries(t, t.r, intra, ws);
    long long m_r = detail::min_at_u(t, t.r, ws);

    int nn = t.n * t.n;
    long long edge_floor = 0;
    for (const auto& e : ws.edge)
        edge_floor += *std::min_element(e.begin(), e.end());
    for (int u = 0; u < t.n; ++u) {
        if (u == t.r) continue;
        detail::build_unaries(t, u, intra, ws);
        long long lb = t.base[static_cast<size_t>(u)] + edge_floor;
        for (const auto& un : ws.unary) lb += *std::min_element(un.begin(), un.begin() + nn);
        if (lb >= m_r) continue;
        if (detail::below_at_u(t, u, m_r, ws)) return false;
    }
    return true;
}

inline bool check_bitmask(const PointTables& t, uint32_t mask) {
    detail::SweepWorkspace ws;
    return check_bitmask(t, mask, ws);
}

// Slot relabelings that leave every canonical potential's value unchanged:
// permute the three configurations and swap the two slots inside any of them
// (3! * 2^3 = 48 maps). Canonical representative = minimum bitmask on the
// orbit.
inline const std::array<std::array<uint8_t, 15>, 48>& orbit_bit_maps() {
    static const std::array<std::array<uint8_t, 15>, 48> maps = [] {
        std::array<std::array<uint8_t, 15>, 48> out{};
        int sigma[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        int g = 0;
        for (int p = 0; p < 6; ++p)
            for (int flips = 0; flips < 8; ++flips, ++g)
                for (int bit = 0; bit < 15; ++bit) {
                    auto [s1, s2] = k3_pairs()[static_cast<size_t>(bit)];
                    auto map_slot = [&](int s) {
                        int blk = s / 2, pos = s % 2;
                        if (flips & (1 << blk)) pos ^= 1;
                        return sigma[p][blk] * 2 + pos;
                    };
                    int a = map_slot(s1), b = map_slot(s2);
                    if (a > b) std::swap(a, b);
                    out[static_cast<size_t>(g)][static_cast<size_t>(bit)] =
                        static_cast<uint8_t>(pair_bit_k3(a, b));
                }
        return out;
    }();
    return maps;
}

inline uint32_t orbit_canonicalize(uint32_t mask) {
    if (mask >= (1u << 15)) throw std::invalid_argument("bitmask exceeds 15 bits");
    uint32_t best = mask;
    for (const auto& map : orbit_bit_maps()) {
        uint32_t img = 0;
        uint32_t rest = mask;
        while (rest) {
            int bit = __builtin_ctz(rest);
            rest &= rest - 1;
            img |= 1u << map[static_cast<size_t>(bit)];
        }
        best = std::min(best, img);
    }
    return best;
}

struct SweepReport {
    std::vector<std::string> case_names;
    uint32_t lo = 0, hi = 0;
    // matrix[mask - lo] bit c is set iff the mask passes case c
    std::vector<uint8_t> matrix;
    double seconds = 0;
    int threads = 1;

    long long pass_all_count() const {
        uint8_t all = static_cast<uint8_t>((1u << case_names.size()) - 1);
        long long c = 0;
        for (uint8_t row : matrix) c += (row & all) == all;
        return c;
    }

    // Masks passing every case in the index prefix [0, prefix_len).
    std::vector<uint32_t> survivors(size_t prefix_len) const {
        uint8_t want = static_cast<uint8_t>((1u << prefix_len) - 1);
        std::vector<uint32_t> out;
        for (uint32_t m = lo; m < hi; ++m)
            if ((matrix[static_cast<size_t>(m - lo)] & want) == want) out.push_back(m);
        return out;
    }

    std::vector<uint32_t> orbit_survivors(size_t prefix_len) const {
        std::vector<uint32_t> reps;
        for (uint32_t m : survivors(prefix_len)) reps.push_back(orbit_canonicalize(m));
        std::sort(reps.begin(), reps.end());
        reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
        return reps;
    }

    uint64_t matrix_hash() const {
        Fnv1a h;
        h.feed_u64(lo);
        h.feed_u64(hi);
        for (uint8_t row : matrix) h.feed_byte(row);
        return h.state;
    }
};

// Evaluate every bitmask in [lo, hi) against every test case. Workers own
// contiguous mask sub-ranges; the matrix layout makes the result independent
// of the partition.
inline SweepReport sweep(const std::vector<TestCase>& cases, uint32_t lo = 0, uint32_t hi = 1u << 15,
                         int threads = 1) {
    if (lo > hi || hi > (1u << 15)) throw std::invalid_argument("bitmask range out of bounds");
    if (threads < 1) threads = 1;
    auto t0 = std::chrono::steady_clock::now();

    std::vector<PointTables> tables;
    tables.reserve(cases.size());
    SweepReport rep;
    for (const TestCase& tc : cases) {
        rep.case_names.push_back(tc.name);
        tables.push_back(precompute(tc));
    }
    rep.lo = lo;
    rep.hi = hi;
    rep.threads = threads;
    rep.matrix.assign(static_cast<size_t>(hi - lo), 0);
    if (cases.size() > 8) throw std::invalid_argument("at most 8 test cases per sweep");

    auto worker = [&](uint32_t wlo, uint32_t whi) {
        detail::SweepWorkspace ws;
        for (uint32_t m = wlo; m < whi; ++m) {
            uint8_t row = 0;
            for (size_t c = 0; c < tables.size(); ++c)
                if (check_bitmask(tables[c], m, ws)) row |= static_cast<uint8_t>(1u << c);
            rep.matrix[static_cast<size_t>(m - lo)] = row;
        }
    };

    uint32_t total = hi - lo;
    if (threads == 1 || total < 2) {
        worker(lo, hi);
    } else {
        std::vector<std::thread> pool;
        uint32_t chunk = (total + static_cast<uint32_t>(threads) - 1) / static_cast<uint32_t>(threads);
        for (int i = 0; i < threads; ++i) {
            uint32_t wlo = lo + chunk * static_cast<uint32_t>(i);
            uint32_t whi = std::min(hi, wlo + chunk);
            if (wlo >= whi) break;
            pool.emplace_back(worker, wlo, whi);
        }
        for (auto& th : pool) th.join();
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace kserver
