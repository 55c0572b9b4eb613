#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "kserver/workfunction.hpp"

namespace kserver {

// ---------------------------------------------------------------------------
// Circle potential for k = 3 on antipode metrics:
//   Phi(w, u, x, y, z)  = w(bar(u)^3) + w(u x bar(y)) + w(u y bar(z)) + w(u z bar(x))
//                         - d(x,y) - d(y,z) - d(z,x)
//   Phi*(w, u, x, y, z) = the same without the distance terms.
// P is the set of triples whose pairwise distances sum to 2*diameter
// (not inside a common semicircle).
// ---------------------------------------------------------------------------

inline void require_phi_applicable(const WorkFunction& wf) {
    if (wf.k() != 3)
        throw std::invalid_argument("circle potential is defined for k = 3, got k = " +
                                    std::to_string(wf.k()));
    if (!wf.space().metric().has_antipodes())
        throw std::invalid_argument("circle potential needs a metric with antipodes");
}

inline bool in_P(const FiniteMetric& m, int x, int y, int z) {
    if (!m.has_antipodes())
        throw std::invalid_argument("semicircle set P needs a metric with antipodes");
    m.require_point(x);
    m.require_point(y);
    m.require_point(z);
    return m.dist(x, y) + m.dist(y, z) + m.dist(z, x) == 2 * m.diameter();
}

// Point-indexed lookup tables for k = 3 work functions; shared by every
// potential evaluation over one table.
//   base[u]        = w(bar(u)^3)
//   wtab[u][a][b]  = w({u, a, b})   (all ordered triples point to the same entry)
struct PointTables {
    int n = 0;
    int delta = 0;
    int r = -1; // last request, -1 if absent
    std::vector<int> base;
    std::vector<int> wtab;
    std::vector<int> dist;
    std::vector<int> antipode;

    int w3(int u, int a, int b) const {
        return wtab[(static_cast<size_t>(u) * n + static_cast<size_t>(a)) * n + static_cast<size_t>(b)];
    }
    int d(int a, int b) const { return dist[static_cast<size_t>(a) * n + b]; }
};

inline PointTables build_point_tables(const WorkFunction& wf) {
    require_phi_applicable(wf);
    const ConfigSpace& sp = wf.space();
    const FiniteMetric& m = sp.metric();
    int n = m.n();
    PointTables t;
    t.n = n;
    t.delta = m.diameter();
    t.r = wf.last_request().value_or(-1);
    t.base.resize(static_cast<size_t>(n));
    t.wtab.resize(static_cast<size_t>(n) * n * n);
    t.dist.assign(m.dist_row(0), m.dist_row(0) + static_cast<size_t>(n) * n);
    t.antipode.resize(static_cast<size_t>(n));
    for (int u = 0; u < n; ++u) {
        t.antipode[static_cast<size_t>(u)] = m.antipode(u);
        t.base[static_cast<size_t>(u)] = wf.value(point_power(m.antipode(u), 3));
    }
    for (int u = 0; u < n; ++u)
        for (int a = u; a < n; ++a)
            for (int b = a; b < n; ++b) {
                int v = wf.value(Config({u, a, b}));
                int pts[3] = {u, a, b};
                std::sort(pts, pts + 3);
                // fan the value out to all 27 (with repeats, fewer) orderings
                int perm[3] = {0, 1, 2};
                do {
                    t.wtab[(static_cast<size_t>(pts[perm[0]]) * n + static_cast<size_t>(pts[perm[1]])) * n +
                           static_cast<size_t>(pts[perm[2]])] = v;
                } while (std::next_permutation(perm, perm + 3));
            }
    return t;
}

inline long long phi_star(const PointTables& t, int u, int x, int y, int z) {
    return static_cast<long long>(t.base[static_cast<size_t>(u)]) +
           t.w3(u, x, t.antipode[static_cast<size_t>(y)]) +
           t.w3(u, y, t.antipode[static_cast<size_t>(z)]) +
           t.w3(u, z, t.antipode[static_cast<size_t>(x)]);
}

inline long long phi_circle(const PointTables& t, int u, int x, int y, int z) {
    return phi_star(t, u, x, y, z) - t.d(x, y) - t.d(y, z) - t.d(z, x);
}

inline long long phi_star(const WorkFunction& wf, int u, int x, int y, int z) {
    return phi_star(build_point_tables(wf), u, x, y, z);
}

inline long long phi_circle(const WorkFunction& wf, int u, int x, int y, int z) {
    return phi_circle(build_point_tables(wf), u, x, y, z);
}

struct PotentialWitness {
    long long value = 0;
    int u = -1;
    std::vector<int> slots; // circle potential: {x, y, z}
};

inline PotentialWitness phi_min_at(const PointTables& t, int u) {
    PotentialWitness best;
    best.value = std::numeric_limits<long long>::max();
    for (int x = 0; x < t.n; ++x)
        for (int y = 0; y < t.n; ++y)
            for (int z = 0; z < t.n; ++z) {
                long long v = phi_circle(t, u, x, y, z);
                if (v < best.value) best = {v, u, {x, y, z}};
            }
    return best;
}

inline PotentialWitness phi_min(const PointTables& t) {
    PotentialWitness best;
    best.value = std::numeric_limits<long long>::max();
    for (int u = 0; u < t.n; ++u) {
        PotentialWitness w = phi_min_at(t, u);
        if (w.value < best.value) best = std::move(w);
    }
    return best;
}

inline PotentialWitness phi_min_at(const WorkFunction& wf, int u) {
    wf.space().metric().require_point(u);
    return phi_min_at(build_point_tables(wf), u);
}

inline PotentialWitness phi_min(const WorkFunction& wf) { return phi_min(build_point_tables(wf)); }

// Minimizer-at-the-request property: the unrestricted potential minimum is
// already attained with u equal to the last request.
struct Lemma3Report {
    bool pass = false;
    PotentialWitness at_request;
    PotentialWitness global;
};

inline Lemma3Report check_lemma3(const WorkFunction& wf, int r) {
    wf.space().metric().require_point(r);
    PointTables t = build_point_tables(wf);
    Lemma3Report rep;
    rep.at_request = phi_min_at(t, r);
    rep.global = phi_min(t);
    rep.pass = rep.at_request.value == rep.global.value;
    return rep;
}

// Equivalence of the two potential forms:
//   min Phi  ==  min over u and (x,y,z) in P of Phi* - 2*diameter.
struct Lemma4Report {
    bool pass = false;
    long long phi_value = 0;
    long long restricted_star_value = 0;
};

inline Lemma4Report check_lemma4(const WorkFunction& wf) {
    PointTables t = build_point_tables(wf);
    long long best = std::numeric_limits<long long>::max();
    for (int x = 0; x < t.n; ++x)
        for (int y = 0; y < t.n; ++y)
            for (int z = 0; z < t.n; ++z) {
                if (t.d(x, y) + t.d(y, z) + t.d(z, x) != 2 * t.delta) continue;
                for (int u = 0; u < t.n; ++u)
                    best = std::min(best, phi_star(t, u, x, y, z));
            }
    Lemma4Report rep;
    rep.phi_value = phi_min(t).value;
    rep.restricted_star_value = best - 2 * t.delta;
    rep.pass = rep.phi_value == rep.restricted_star_value;
    return rep;
}

// ---------------------------------------------------------------------------
// Canonical potential family:
//   Phi(w, u, X) = w(bar(u)^k) + sum_i w(u X_i) - sum_{pairs} d(x_s, x_s')
// with X = (x_ij), i in [k], j in [k-1], and a chosen set of unordered slot
// pairs. Slots are flattened as (i-1)*(k-1) + (j-1). For k = 3 the 15
// possible pairs map onto bits 0..14 in lexicographic slot-pair order.
// ---------------------------------------------------------------------------

inline int slot_count(int k) { return k * (k - 1); }

inline int pair_bit_k3(int s1, int s2) {
    // lexicographic rank of (s1, s2), s1 < s2, among the 15 pairs of 6 slots
    return 5 * s1 - s1 * (s1 - 1) / 2 + (s2 - s1 - 1);
}

inline const std::array<std::pair<int, int>, 15>& k3_pairs() {
    static const std::array<std::pair<int, int>, 15> table = [] {
        std::array<std::pair<int, int>, 15> t{};
        for (int s1 = 0; s1 < 6; ++s1)
            for (int s2 = s1 + 1; s2 < 6; ++s2) t[static_cast<size_t>(pair_bit_k3(s1, s2))] = {s1, s2};
        return t;
    }();
    return table;
}

class CanonicalPotential {
public:
    CanonicalPotential(int k, std::vector<std::pair<int, int>> flat_pairs)
        : k_(k), pairs_(std::move(flat_pairs)) {
        if (k_ < 2) throw std::invalid_argument("canonical potential needs k >= 2");
        int ns = slot_count(k_);
        for (auto& [a, b] : pairs_) {
            if (a > b) std::swap(a, b);
            if (a < 0 || b >= ns || a == b)
                throw std::invalid_argument("invalid slot pair in canonical potential");
        }
        std::sort(pairs_.begin(), pairs_.end());
        if (std::adjacent_find(pairs_.begin(), pairs_.end()) != pairs_.end())
            throw std::invalid_argument("duplicate slot pair in canonical potential");
    }

    // Pairs given as 1-based ((i,j),(i',j')) slot coordinates.
    static CanonicalPotential from_slot_coords(
        int k, const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>& coords) {
        std::vector<std::pair<int, int>> flat;
        flat.reserve(coords.size());
        for (const auto& [a, b] : coords)
            flat.push_back({(a.first - 1) * (k - 1) + (a.second - 1),
                            (b.first - 1) * (k - 1) + (b.second - 1)});
        return CanonicalPotential(k, std::move(flat));
    }

    static CanonicalPotential from_bitmask(uint32_t mask) {
        if (mask >= (1u << 15)) throw std::invalid_argument("bitmask exceeds 15 bits");
        std::vector<std::pair<int, int>> flat;
        for (int b = 0; b < 15; ++b)
            if (mask & (1u << b)) flat.push_back(k3_pairs()[static_cast<size_t>(b)]);
        return CanonicalPotential(3, std::move(flat));
    }

    int k() const { return k_; }
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

    uint32_t bitmask() const {
        if (k_ != 3) throw std::invalid_argument("bitmask serialization is defined for k = 3");
        uint32_t m = 0;
        for (const auto& [a, b] : pairs_) m |= 1u << pair_bit_k3(a, b);
        return m;
    }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        uint32_t m = bitmask();
        std::string s(4, '0');
        for (int i = 3; i >= 0; --i) {
            s[static_cast<size_t>(i)] = digits[m & 0xf];
            m >>= 4;
        }
        return s;
    }

private:
    int k_;
    std::vector<std::pair<int, int>> pairs_;
};

inline CanonicalPotential bitmask_from_hex(const std::string& hex) {
    if (hex.size() != 4) throw std::invalid_argument("potential bitmask must be 4 hex digits");
    uint32_t m = 0;
    for (char c : hex) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = 10 + c - 'a';
        else if (c >= 'A' && c <= 'F') d = 10 + c - 'A';
        else throw std::invalid_argument("invalid hex digit in potential bitmask");
        m = (m << 4) | static_cast<uint32_t>(d);
    }
    return CanonicalPotential::from_bitmask(m);
}

// Single evaluation at a full slot assignment (slots[flat] = point).
inline long long eval_canonical(const CanonicalPotential& p, const WorkFunction& wf, int u,
                                const std::vector<int>& slots) {
    const ConfigSpace& sp = wf.space();
    const FiniteMetric& m = sp.metric();
    if (!m.has_antipodes())
        throw std::invalid_argument("canonical potential needs a metric with antipodes");
    if (p.k() != sp.k()) throw std::invalid_argument("canonical potential arity mismatch");
    if (static_cast<int>(slots.size()) != slot_count(p.k()))
        throw std::invalid_argument("slot assignment has wrong length");
    m.require_point(u);
    for (int s : slots) m.require_point(s);

    int k = p.k();
    long long v = wf.value(point_power(m.antipode(u), k));
    for (int i = 0; i < k; ++i) {
        std::vector<int> pts(static_cast<size_t>(k));
        pts[0] = u;
        for (int j = 0; j < k - 1; ++j) pts[static_cast<size_t>(j + 1)] = slots[static_cast<size_t>(i * (k - 1) + j)];
        v += wf.value(Config(std::move(pts)));
    }
    for (const auto& [a, b] : p.pairs()) v -= m.dist(slots[static_cast<size_t>(a)], slots[static_cast<size_t>(b)]);
    return v;
}

namespace detail {

// k = 3 minimization over one u: blocks s_i = (x_i1, x_i2) range over n^2
// super-states; intra-block distance folds into the unary table, cross-block
// pairs into three edge tables. Exhaustive n^6 scan with witness tracking.
struct K3BlockTables {
    int n = 0;
    int nn = 0;
    // e[0]: blocks (0,1), e[1]: blocks (0,2), e[2]: blocks (1,2); empty if no pairs
    std::array<std::vector<int>, 3> edge;
    std::array<bool, 3> intra{};

    static int block_pair_index(int b1, int b2) { return b1 + b2 - 1; } // (0,1)->0 (0,2)->1 (1,2)->2
};

inline K3BlockTables build_k3_blocks(const CanonicalPotential& p, const FiniteMetric& m) {
    K3BlockTables t;
    t.n = m.n();
    t.nn = t.n * t.n;
    std::array<std::vector<std::array<int, 2>>, 3> cross; // (j, j') per block pair
    for (const auto& [a, b] : p.pairs()) {
        int bi = a / 2, bj = b / 2;
        if (bi == bj) {
            t.intra[static_cast<size_t>(bi)] = true;
        } else {
            cross[static_cast<size_t>(K3BlockTables::block_pair_index(bi, bj))].push_back(
                {a % 2, b % 2});
        }
    }
    for (int e = 0; e < 3; ++e) {
        if (cross[static_cast<size_t>(e)].empty()) continue;
        auto& tab = t.edge[static_cast<size_t>(e)];
        tab.assign(static_cast<size_t>(t.nn) * t.nn, 0);
        for (int s1 = 0; s1 < t.nn; ++s1) {
            int v1[2] = {s1 / t.n, s1 % t.n};
            for (int s2 = 0; s2 < t.nn; ++s2) {
                int v2[2] = {s2 / t.n, s2 % t.n};
                int sum = 0;
                for (const auto& jj : cross[static_cast<size_t>(e)])
                    sum -= m.dist(v1[jj[0]], v2[jj[1]]);
                tab[static_cast<size_t>(s1) * t.nn + s2] = sum;
            }
        }
    }
    return t;
}

// Unary block tables for one u; unary[i][s] = w({u, a, b}) - [intra] d(a, b).
inline void fill_k3_unaries(const K3BlockTables& bt, const PointTables& pt, int u,
                            std::array<std::vector<int>, 3>& unary) {
    for (int i = 0; i < 3; ++i) {
        auto& tab = unary[static_cast<size_t>(i)];
        tab.resize(static_cast<size_t>(bt.nn));
        for (int s = 0; s < bt.nn; ++s) {
            int a = s / bt.n, b = s % bt.n;
            int v = pt.w3(u, a, b);
            if (bt.intra[static_cast<size_t>(i)]) v -= pt.d(a, b);
            tab[static_cast<size_t>(s)] = v;
        }
    }
}

} // namespace detail

// Exhaustive minimum of a canonical potential over u (or one fixed u) and all
// n^(k(k-1)) slot assignments. Supported for k = 2 and k = 3.
inline PotentialWitness canonical_min(const CanonicalPotential& p, const WorkFunction& wf,
                                      std::optional<int> restrict_u = std::nullopt) {
    const ConfigSpace& sp = wf.space();
    const FiniteMetric& m = sp.metric();
    if (!m.has_antipodes())
        throw std::invalid_argument("canonical potential needs a metric with antipodes");
    if (p.k() != sp.k()) throw std::invalid_argument("canonical potential arity mismatch");
    if (restrict_u) m.require_point(*restrict_u);
    int n = m.n();
    PotentialWitness best;
    best.value = std::numeric_limits<long long>::max();

    if (p.k() == 2) {
        bool pair_on = !p.pairs().empty(); // the single possible pair {(1,1),(2,1)}
        for (int u = 0; u < n; ++u) {
            if (restrict_u && u != *restrict_u) continue;
            long long base = wf.value(point_power(m.antipode(u), 2));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    long long v = base + wf.value(Config({u, a})) + wf.value(Config({u, b}));
                    if (pair_on) v -= m.dist(a, b);
                    if (v < best.value) best = {v, u, {a, b}};
                }
        }
        return best;
    }
    if (p.k() != 3)
        throw std::invalid_argument("canonical minimization is implemented for k = 2 and k = 3");

    PointTables pt = build_point_tables(wf);
    detail::K3BlockTables bt = detail::build_k3_blocks(p, m);
    const std::vector<int>& e01 = bt.edge[0];
    const std::vector<int>& e02 = bt.edge[1];
    const std::vector<int>& e12 = bt.edge[2];
    std::array<std::vector<int>, 3> unary;
    int nn = bt.nn;
    for (int u = 0; u < n; ++u) {
        if (restrict_u && u != *restrict_u) continue;
        detail::fill_k3_unaries(bt, pt, u, unary);
        long long base = pt.base[static_cast<size_t>(u)];
        for (int s0 = 0; s0 < nn; ++s0) {
            long long v0 = base + unary[0][static_cast<size_t>(s0)];
            const int* e01row = e01.empty() ? nullptr : e01.data() + static_cast<size_t>(s0) * nn;
            const int* e02row = e02.empty() ? nullptr : e02.data() + static_cast<size_t>(s0) * nn;
            for (int s1 = 0; s1 < nn; ++s1) {
                long long v1 = v0 + unary[1][static_cast<size_t>(s1)];
                if (e01row) v1 += e01row[s1];
                const int* e12row = e12.empty() ? nullptr : e12.data() + static_cast<size_t>(s1) * nn;
                for (int s2 = 0; s2 < nn; ++s2) {
                    long long v = v1 + unary[2][static_cast<size_t>(s2)];
                    if (e02row) v += e02row[s2];
                    if (e12row) v += e12row[s2];
                    if (v < best.value)
                        best = {v, u,
                                {s0 / n, s0 % n, s1 / n, s1 % n, s2 / n, s2 % n}};
                }
            }
        }
    }
    return best;
}

// Does the canonical argument hold for this support-induced work function:
// is the global minimum attained with u = r?
inline bool check_canonical_argument(const CanonicalPotential& p, const SupportWF& s) {
    WorkFunction wf = from_support(s);
    return canonical_min(p, wf, s.r).value == canonical_min(p, wf).value;
}

// The circle-survivor potential in its self-contained form: antipode ties
// binding each second slot to the antipode of the next block's first slot,
// plus both distance triangles (first slots and second slots). Satisfies the
// canonical argument on circle test cases and equals the circle potential up
// to a fixed 5*diameter shift.
inline CanonicalPotential paper_potential() {
    return CanonicalPotential::from_slot_coords(3, {{{1, 2}, {2, 1}},
                                                    {{2, 2}, {3, 1}},
                                                    {{3, 2}, {1, 1}},
                                                    {{1, 1}, {2, 1}},
                                                    {{2, 1}, {3, 1}},
                                                    {{3, 1}, {1, 1}},
                                                    {{1, 2}, {2, 2}},
                                                    {{2, 2}, {3, 2}},
                                                    {{3, 2}, {1, 2}}});
}

// Minimal 6-pair form of the same potential: antipode constraints across
// blocks plus the first-slot triangle only (the second-slot triangle is
// redundant once the ties hold). Also a circle survivor; equals the circle
// potential up to a fixed 3*diameter shift.
inline CanonicalPotential example1_potential() {
    return CanonicalPotential::from_slot_coords(3, {{{1, 2}, {2, 1}},
                                                    {{2, 2}, {3, 1}},
                                                    {{3, 2}, {1, 1}},
                                                    {{1, 1}, {2, 1}},
                                                    {{2, 1}, {3, 1}},
                                                    {{3, 1}, {1, 1}}});
}

// ---------------------------------------------------------------------------
// Classic potentials, original minimization forms and canonical pair sets.
// Original forms evaluate at the work function's last request.
// ---------------------------------------------------------------------------

inline int require_last_request(const WorkFunction& wf) {
    if (!wf.last_request())
        throw std::invalid_argument("potential needs a work function with a last request");
    return *wf.last_request();
}

// min_{x,y,z} w(r x) + w(r y) + w(r z) - d(r, x) - d(y, z)   (k = 2)
inline long long cl_original(const WorkFunction& wf) {
    if (wf.k() != 2) throw std::invalid_argument("CL potential needs k = 2");
    int r = require_last_request(wf);
    const FiniteMetric& m = wf.space().metric();
    int n = m.n();
    std::vector<long long> wr(static_cast<size_t>(n));
    for (int x = 0; x < n; ++x) wr[static_cast<size_t>(x)] = wf.value(Config({r, x}));
    long long best_x = std::numeric_limits<long long>::max();
    for (int x = 0; x < n; ++x) best_x = std::min(best_x, wr[static_cast<size_t>(x)] - m.dist(r, x));
    long long best_yz = std::numeric_limits<long long>::max();
    for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
            best_yz = std::min(best_yz, wr[static_cast<size_t>(y)] + wr[static_cast<size_t>(z)] - m.dist(y, z));
    return best_x + best_yz;
}

inline CanonicalPotential cl_canonical() {
    return CanonicalPotential::from_slot_coords(2, {{{1, 1}, {2, 1}}});
}

// min over C, p, b, b', a, a' of
//   w(C) + w(r p b) + w(r p b') + w(r a a') - d(C, r^3) - d(b,b') - d(p,a) - d(p,a')
// The C term separates; for each p the (b,b') and (a,a') parts separate too.
inline long long bcl_original(const WorkFunction& wf) {
    if (wf.k() != 3) throw std::invalid_argument("BCL potential needs k = 3");
    int r = require_last_request(wf);
    const ConfigSpace& sp = wf.space();
    const FiniteMetric& m = sp.metric();
    int n = m.n();

    long long best_c = std::numeric_limits<long long>::max();
    for (int i = 0; i < sp.size(); ++i)
        best_c = std::min(best_c,
                          static_cast<long long>(wf.value(i)) - dist_to_point_power(sp, i, r));

    long long best_p = std::numeric_limits<long long>::max();
    for (int p = 0; p < n; ++p) {
        long long bb = std::numeric_limits<long long>::max();
        for (int b1 = 0; b1 < n; ++b1)
            for (int b2 = 0; b2 < n; ++b2)
                bb = std::min(bb, static_cast<long long>(wf.value(Config({r, p, b1}))) +
                                      wf.value(Config({r, p, b2})) - m.dist(b1, b2));
        long long aa = std::numeric_limits<long long>::max();
        for (int a1 = 0; a1 < n; ++a1)
            for (int a2 = 0; a2 < n; ++a2)
                aa = std::min(aa, static_cast<long long>(wf.value(Config({r, a1, a2}))) -
                                      m.dist(p, a1) - m.dist(p, a2));
        best_p = std::min(best_p, bb + aa);
    }
    return best_c + best_p;
}

inline CanonicalPotential bcl_canonical() {
    return CanonicalPotential::from_slot_coords(3, {{{1, 2}, {2, 2}},
                                                    {{1, 1}, {3, 1}},
                                                    {{1, 1}, {3, 2}},
                                                    {{2, 1}, {3, 1}},
                                                    {{2, 1}, {3, 2}}});
}

// min over (x_1..x_k) of sum_{i=1}^{k+1} w(bar(x)_{i-1}^{i-1} x_i ... x_k)
inline long long ck_original(const WorkFunction& wf) {
    const ConfigSpace& sp = wf.space();
    const FiniteMetric& m = sp.metric();
    if (!m.has_antipodes()) throw std::invalid_argument("CK potential needs a metric with antipodes");
    int k = sp.k();
    int n = m.n();
    std::vector<int> x(static_cast<size_t>(k), 0);
    long long best = std::numeric_limits<long long>::max();
    while (true) {
        long long sum = 0;
        for (int i = 1; i <= k + 1; ++i) {
            std::vector<int> pts;
            pts.reserve(static_cast<size_t>(k));
            for (int c = 0; c < i - 1; ++c) pts.push_back(m.antipode(x[static_cast<size_t>(i - 2)]));
            for (int j = i - 1; j < k; ++j) pts.push_back(x[static_cast<size_t>(j)]);
            sum += wf.value(Config(std::move(pts)));
        }
        best = std::min(best, sum);
        int i = k - 1;
        while (i >= 0 && x[static_cast<size_t>(i)] == n - 1) --i;
        if (i < 0) break;
        ++x[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) x[static_cast<size_t>(j)] = 0;
    }
    return best;
}

// Pairs ((i,l),(j,i)) for 1 <= i < j <= k, i <= l <= k-1: antipode constraints
// that collapse the slot blocks onto the original form's point chain.
inline CanonicalPotential ck_canonical(int k) {
    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> coords;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
            for (int l = i; l <= k - 1; ++l) coords.push_back({{i, l}, {j, i}});
    return CanonicalPotential::from_slot_coords(k, coords);
}

} // namespace kserver
