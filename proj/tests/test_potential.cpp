#include "doctest.h"

#include "kserver/potential.hpp"
#include "kserver/wfa.hpp"

#include "oracles.hpp"

using namespace kserver;

namespace {

Config cfg(std::vector<int> pts) { return Config(std::move(pts)); }

std::shared_ptr<const ConfigSpace> cycle_space(int n, int k) {
    return make_space(std::make_shared<const FiniteMetric>(FiniteMetric::cycle(n)), k);
}

std::vector<int> random_requests(int n, int count, uint64_t seed) {
    auto rng = oracles::rng(seed);
    std::vector<int> out;
    for (int i = 0; i < count; ++i) out.push_back(static_cast<int>(rng() % static_cast<uint64_t>(n)));
    return out;
}

WorkFunction random_wf(std::shared_ptr<const ConfigSpace> sp, int steps, uint64_t seed) {
    int n = sp->metric().n();
    auto rng = oracles::rng(seed);
    std::vector<int> pts;
    for (int i = 0; i < sp->k(); ++i) pts.push_back(static_cast<int>(rng() % static_cast<uint64_t>(n)));
    WorkFunction wf = initial_wf(std::move(sp), Config(std::move(pts)));
    for (int r : random_requests(n, steps, seed + 1)) wf = update(wf, r);
    return wf;
}

SupportWF test_case_a(std::shared_ptr<const ConfigSpace> sp) {
    SupportWF s;
    s.space = std::move(sp);
    s.r = 4;
    s.pairs = {{cfg({4, 5, 6}), 8},  {cfg({4, 5, 7}), 8},  {cfg({4, 3, 6}), 9},  {cfg({4, 3, 7}), 9},
               {cfg({4, 1, 6}), 10}, {cfg({4, 1, 7}), 10}, {cfg({4, 2, 5}), 10}, {cfg({4, 2, 3}), 11}};
    return s;
}

SupportWF test_case_c() {
    SupportWF s;
    s.space = make_space(std::make_shared<const FiniteMetric>(FiniteMetric::hypercube(3)), 3);
    s.r = 7;
    s.pairs = {{cfg({7, 0, 1}), 0}, {cfg({7, 0, 2}), 0}, {cfg({7, 0, 4}), 0}};
    return s;
}

} // namespace

TEST_CASE("semicircle set P") {
    FiniteMetric m = FiniteMetric::cycle(8);
    for (int z = 0; z < 8; ++z) CHECK(in_P(m, 0, 4, z));
    CHECK(!in_P(m, 0, 1, 2));
    CHECK(in_P(m, 0, 3, 6));

    FiniteMetric path = FiniteMetric::from_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    CHECK_THROWS_AS(in_P(path, 0, 1, 2), std::invalid_argument);
}

TEST_CASE("phi and phi* relations and symmetries") {
    auto sp = cycle_space(8, 3);
    WorkFunction w = random_wf(sp, 6, 42);
    PointTables t = build_point_tables(w);
    const FiniteMetric& m = sp->metric();
    for (int u = 0; u < 8; ++u)
        for (int x = 0; x < 8; ++x)
            for (int y = 0; y < 8; ++y)
                for (int z = 0; z < 8; ++z) {
                    long long ph = phi_circle(t, u, x, y, z);
                    long long st = phi_star(t, u, x, y, z);
                    CHECK(st == ph + m.dist(x, y) + m.dist(y, z) + m.dist(z, x));
                    if (in_P(m, x, y, z)) CHECK(st == ph + 2 * m.diameter());
                    // cyclic shift, and odd permutation combined with antipodes
                    CHECK(ph == phi_circle(t, u, y, z, x));
                    CHECK(ph == phi_circle(t, u, m.antipode(y), m.antipode(x), m.antipode(z)));
                }
}

TEST_CASE("phi evaluation matches an independent re-implementation") {
    auto sp = cycle_space(8, 3);
    SUBCASE("fresh table, the (0,0,4,0) probe") {
        WorkFunction w = initial_wf(sp, cfg({0, 0, 0}));
        PointTables t = build_point_tables(w);
        CHECK(phi_circle(t, 0, 0, 4, 0) == oracles::phi_circle_direct(w, 0, 0, 4, 0));
        CHECK(phi_circle(w, 0, 0, 4, 0) == oracles::phi_circle_direct(w, 0, 0, 4, 0));
    }
    SUBCASE("random tables, all arguments") {
        WorkFunction w = random_wf(sp, 9, 4242);
        PointTables t = build_point_tables(w);
        for (int u = 0; u < 8; ++u)
            for (int x = 0; x < 8; ++x)
                for (int y = 0; y < 8; ++y)
                    for (int z = 0; z < 8; ++z)
                        CHECK(phi_circle(t, u, x, y, z) == oracles::phi_circle_direct(w, u, x, y, z));
    }
}

TEST_CASE("phi minimization and witnesses") {
    auto sp = cycle_space(8, 3);
    WorkFunction w0 = initial_wf(sp, cfg({1, 4, 6}));
    int delta = sp->metric().diameter();

    PotentialWitness glob = phi_min(w0);
    CHECK(glob.value >= -3 * delta);
    REQUIRE(glob.slots.size() == 3);
    CHECK(glob.value == phi_circle(w0, glob.u, glob.slots[0], glob.slots[1], glob.slots[2]));
    for (int u = 0; u < 8; ++u) {
        PotentialWitness at = phi_min_at(w0, u);
        CHECK(glob.value <= at.value);
        CHECK(at.value == phi_circle(w0, u, at.slots[0], at.slots[1], at.slots[2]));
    }
    CHECK(phi_circle(w0, 0, 0, 0, 0) >= glob.value);

    SUBCASE("k != 3 rejected") {
        auto sp2 = cycle_space(8, 2);
        WorkFunction w2 = initial_wf(sp2, cfg({0, 4}));
        CHECK_THROWS_AS(phi_min(w2), std::invalid_argument);
    }
}

TEST_CASE("lemma 3: minimum attained at the request on even cycles") {
    for (int n : {6, 8, 12}) {
        auto sp = cycle_space(n, 3);
        for (uint64_t seed : {11ull, 22ull}) {
            WorkFunction wf = initial_wf(sp, cfg({0, n / 2, n - 1}));
            for (int r : random_requests(n, 10, seed)) {
                wf = update(wf, r);
                Lemma3Report rep = check_lemma3(wf, r);
                CHECK(rep.pass);
                CHECK(rep.at_request.u == r);
            }
        }
    }
    SUBCASE("repeated request is stable") {
        auto sp = cycle_space(8, 3);
        WorkFunction wf = update(initial_wf(sp, cfg({0, 2, 4})), 6);
        long long before = phi_min(wf).value;
        WorkFunction again = update(wf, 6);
        CHECK(phi_min(again).value == before);
        CHECK(check_lemma3(again, 6).pass);
    }
}

TEST_CASE("lemma 4: P-restricted phi* minus 2*diameter equals phi") {
    auto sp = cycle_space(8, 3);
    WorkFunction wf = initial_wf(sp, cfg({0, 3, 5}));
    CHECK(check_lemma4(wf).pass);
    for (int r : random_requests(8, 8, 1234)) {
        wf = update(wf, r);
        Lemma4Report rep = check_lemma4(wf);
        CHECK(rep.pass);
        CHECK(rep.phi_value == rep.restricted_star_value);
    }
}

TEST_CASE("canonical pair <-> bit mapping") {
    int seen[15] = {};
    for (int s1 = 0; s1 < 6; ++s1)
        for (int s2 = s1 + 1; s2 < 6; ++s2) {
            int b = pair_bit_k3(s1, s2);
            REQUIRE(b >= 0);
            REQUIRE(b < 15);
            ++seen[b];
            CHECK(k3_pairs()[static_cast<size_t>(b)] == std::pair<int, int>{s1, s2});
        }
    for (int b = 0; b < 15; ++b) CHECK(seen[b] == 1);
    for (uint32_t mask : {0u, 1u, 0x357Au, 0x7FFFu, 0x143Au})
        CHECK(CanonicalPotential::from_bitmask(mask).bitmask() == mask);
    CHECK_THROWS_AS(CanonicalPotential::from_bitmask(1u << 15), std::invalid_argument);
}

TEST_CASE("named potentials") {
    CanonicalPotential paper = paper_potential();
    CanonicalPotential ex1 = example1_potential();
    CHECK(paper.pairs().size() == 9);
    CHECK(ex1.pairs().size() == 6);
    CHECK(paper.bitmask() != ex1.bitmask());
    CHECK(paper.hex() == "357a");
    CHECK(ex1.hex() == "143a");
    // the tie pairs plus both triangles contain the minimal form's pair set
    CHECK((paper.bitmask() & ex1.bitmask()) == ex1.bitmask());
    CHECK(bitmask_from_hex("357a").bitmask() == paper.bitmask());
    CHECK(bitmask_from_hex("357A").bitmask() == paper.bitmask());
    CHECK_THROWS_AS(bitmask_from_hex("xyzw"), std::invalid_argument);
}

TEST_CASE("eval_canonical") {
    auto sp = cycle_space(8, 3);
    WorkFunction w = random_wf(sp, 5, 7);
    const FiniteMetric& m = sp->metric();
    std::vector<int> slots = {3, 1, 4, 1, 5, 2};

    SUBCASE("empty pair set is the bare sum of k+1 work values") {
        CanonicalPotential none(3, {});
        long long expect = w.value(point_power(m.antipode(2), 3)) + w.value(cfg({2, 3, 1})) +
                           w.value(cfg({2, 4, 1})) + w.value(cfg({2, 5, 2}));
        CHECK(eval_canonical(none, w, 2, slots) == expect);
    }
    SUBCASE("full pair set subtracts all 15 distances") {
        CanonicalPotential full = CanonicalPotential::from_bitmask(0x7FFF);
        long long expect = eval_canonical(CanonicalPotential(3, {}), w, 2, slots);
        for (int a = 0; a < 6; ++a)
            for (int b = a + 1; b < 6; ++b)
                expect -= m.dist(slots[static_cast<size_t>(a)], slots[static_cast<size_t>(b)]);
        CHECK(eval_canonical(full, w, 2, slots) == expect);
    }
    SUBCASE("rejected without antipodes") {
        auto path = make_space(
            std::make_shared<const FiniteMetric>(FiniteMetric::from_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}})),
            3);
        WorkFunction pw = initial_wf(path, cfg({0, 1, 2}));
        CHECK_THROWS_AS(eval_canonical(paper_potential(), pw, 0, slots), std::invalid_argument);
    }
}

TEST_CASE("canonical_min matches the brute-force odometer") {
    auto sp = cycle_space(6, 3);
    WorkFunction w = random_wf(sp, 4, 99);
    for (uint32_t mask : {0x0000u, 0x254Au, 0x143Au, 0x7FFFu, 0x0C58u, 0x1111u}) {
        CanonicalPotential p = CanonicalPotential::from_bitmask(mask);
        PotentialWitness wit = canonical_min(p, w);
        CHECK(wit.value == oracles::canonical_min_brute(p, w));
        CHECK(wit.value == eval_canonical(p, w, wit.u, wit.slots));
        PotentialWitness at2 = canonical_min(p, w, 2);
        CHECK(at2.u == 2);
        CHECK(at2.value == oracles::canonical_min_brute(p, w, 2));
        CHECK(at2.value >= wit.value);
    }
}

TEST_CASE("canonical_min for k = 2 matches brute force") {
    auto sp = cycle_space(8, 2);
    WorkFunction w = random_wf(sp, 6, 3);
    for (const CanonicalPotential& p : {cl_canonical(), CanonicalPotential(2, {})}) {
        PotentialWitness wit = canonical_min(p, w);
        CHECK(wit.value == oracles::canonical_min_brute(p, w));
        CHECK(wit.value == eval_canonical(p, w, wit.u, wit.slots));
    }
}

TEST_CASE("canonical argument on the built-in style test cases") {
    auto sp = cycle_space(8, 3);
    SupportWF a = test_case_a(sp);
    SupportWF c = test_case_c();
    CHECK(check_canonical_argument(paper_potential(), a));
    CHECK(check_canonical_argument(example1_potential(), a));
    CHECK(!check_canonical_argument(paper_potential(), c));
    CHECK(!check_canonical_argument(example1_potential(), c));
    CHECK(!check_canonical_argument(CanonicalPotential(3, {}), a));
}

TEST_CASE("restricted canonical minimum equals unrestricted on test case a") {
    WorkFunction w = from_support(test_case_a(cycle_space(8, 3)));
    PotentialWitness restricted = canonical_min(paper_potential(), w, 4);
    PotentialWitness global = canonical_min(paper_potential(), w);
    CHECK(restricted.value == global.value);
}

TEST_CASE("classic potential equivalences up to a fixed constant") {
    auto m8 = std::make_shared<const FiniteMetric>(FiniteMetric::cycle(8));

    SUBCASE("CL, k = 2") {
        auto sp = make_space(m8, 2);
        std::optional<long long> c;
        for (uint64_t seed = 0; seed < 6; ++seed) {
            WorkFunction w = random_wf(sp, 8, 100 + seed);
            long long diff = cl_original(w) - canonical_min(cl_canonical(), w).value;
            if (!c) c = diff;
            CHECK(diff == *c);
        }
    }
    SUBCASE("BCL, k = 3") {
        auto sp = make_space(m8, 3);
        std::optional<long long> c;
        for (uint64_t seed = 0; seed < 6; ++seed) {
            WorkFunction w = random_wf(sp, 8, 200 + seed);
            long long diff = bcl_original(w) - canonical_min(bcl_canonical(), w).value;
            if (!c) c = diff;
            CHECK(diff == *c);
        }
    }
    SUBCASE("CK, k = 2 and k = 3") {
        for (int k : {2, 3}) {
            auto sp = make_space(m8, k);
            std::optional<long long> c;
            for (uint64_t seed = 0; seed < 6; ++seed) {
                WorkFunction w = random_wf(sp, 8, 300 + seed);
                long long diff = ck_original(w) - canonical_min(ck_canonical(k), w).value;
                if (!c) c = diff;
                CHECK(diff == *c);
            }
        }
    }
    SUBCASE("paper potential and its minimal form vs the circle potential") {
        auto sp = make_space(m8, 3);
        for (const CanonicalPotential& p : {paper_potential(), example1_potential()}) {
            std::optional<long long> c;
            for (uint64_t seed = 0; seed < 6; ++seed) {
                WorkFunction w = random_wf(sp, 8, 400 + seed);
                long long diff = phi_min(w).value - canonical_min(p, w).value;
                if (!c) c = diff;
                CHECK(diff == *c);
            }
        }
    }
}

TEST_CASE("BCL original agrees with a one-shot full brute force") {
    auto sp = cycle_space(8, 3);
    WorkFunction w = random_wf(sp, 5, 888);
    int r = *w.last_request();
    const FiniteMetric& m = sp->metric();
    long long brute = std::numeric_limits<long long>::max();
    for (int ci = 0; ci < sp->size(); ++ci) {
        long long cterm = w.value(ci) - dist_to_point_power(*sp, ci, r);
        for (int p = 0; p < 8; ++p)
            for (int b1 = 0; b1 < 8; ++b1)
                for (int b2 = 0; b2 < 8; ++b2)
                    for (int a1 = 0; a1 < 8; ++a1)
                        for (int a2 = 0; a2 < 8; ++a2) {
                            long long v = cterm + w.value(cfg({r, p, b1})) + w.value(cfg({r, p, b2})) +
                                          w.value(cfg({r, a1, a2})) - m.dist(b1, b2) - m.dist(p, a1) -
                                          m.dist(p, a2);
                            brute = std::min(brute, v);
                        }
    }
    CHECK(bcl_original(w) == brute);
}

TEST_CASE("CL original agrees with a direct triple loop") {
    auto sp = cycle_space(8, 2);
    WorkFunction w = random_wf(sp, 7, 555);
    int r = *w.last_request();
    const FiniteMetric& m = sp->metric();
    long long brute = std::numeric_limits<long long>::max();
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y)
            for (int z = 0; z < 8; ++z)
                brute = std::min(brute, static_cast<long long>(w.value(cfg({r, x}))) +
                                            w.value(cfg({r, y})) + w.value(cfg({r, z})) -
                                            m.dist(r, x) - m.dist(y, z));
    CHECK(cl_original(w) == brute);
}
