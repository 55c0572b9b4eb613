#pragma once

#include <random>

#include "kserver/potential.hpp"
#include "kserver/workfunction.hpp"

namespace kserver {

struct Instance {
    std::shared_ptr<const FiniteMetric> metric;
    int k = 0;
    Config x0;
    std::vector<int> requests;

    void validate() const {
        if (!metric) throw std::invalid_argument("instance has no metric");
        if (k < 1) throw std::invalid_argument("instance needs k >= 1");
        if (x0.k() != k) throw std::invalid_argument("initial configuration has wrong size");
        for (int p : x0.pts()) metric->require_point(p);
        for (int r : requests) metric->require_point(r);
    }
};

// The WFA selection: among configurations containing r, minimize
// w_t(X) + d(X, X_prev). X_prev is kept when it attains the minimum;
// otherwise the first minimizer in enumeration order wins.
inline std::pair<Config, int> wfa_step(const WorkFunction& prev_wf, const WorkFunction& next_wf,
                                       int r, const Config& x_prev) {
    require_same_space(prev_wf, next_wf);
    if (next_wf.last_request() != r)
        throw std::invalid_argument("wfa_step: next work function was not updated with request " +
                                    std::to_string(r));
    const ConfigSpace& sp = next_wf.space();
    int prev_idx = sp.index_of(x_prev);
    long long best = std::numeric_limits<long long>::max();
    int best_idx = -1;
    for (int i : sp.containing(r)) {
        long long v = static_cast<long long>(next_wf.value(i)) + sp.wdist(i, prev_idx);
        if (v < best) {
            best = v;
            best_idx = i;
        }
    }
    if (x_prev.contains(r) &&
        static_cast<long long>(next_wf.value(prev_idx)) == best)
        best_idx = prev_idx;
    return {sp.config(best_idx), sp.wdist(best_idx, prev_idx)};
}

inline long long opt_cost(const WorkFunction& final_wf) {
    long long best = final_wf.value(0);
    for (int i = 1; i < final_wf.space().size(); ++i)
        best = std::min(best, static_cast<long long>(final_wf.value(i)));
    return best;
}

struct TraceStep {
    int t = 0; // 1-based
    int request = -1;
    Config config;   // X_t
    int cost = 0;    // d(X_{t-1}, X_t)
    int ext_cost = 0;
    uint64_t wf_hash = 0;
    std::optional<long long> phi;
};

struct Trace {
    std::vector<TraceStep> steps;
    long long alg = 0;
    long long opt = 0;
    long long ext_sum = 0;
    std::optional<long long> phi0;
    uint64_t final_wf_hash = 0;
};

// Full WFA run. The circle potential is attached to every step when the
// metric has antipodes and k = 3 (and skipped otherwise).
inline Trace simulate(const Instance& inst, bool with_phi = true) {
    inst.validate();
    auto sp = make_space(inst.metric, inst.k);
    bool phi_on = with_phi && inst.metric->has_antipodes() && inst.k == 3;
    WorkFunction wf = initial_wf(sp, inst.x0);
    Config x = inst.x0;
    Trace tr;
    if (phi_on) tr.phi0 = phi_min(wf).value;
    int t = 0;
    for (int r : inst.requests) {
        ++t;
        WorkFunction next = update(wf, r);
        TraceStep step;
        step.t = t;
        step.request = r;
        step.ext_cost = extended_cost(wf, next);
        auto [xn, cost] = wfa_step(wf, next, r, x);
        step.config = xn;
        step.cost = cost;
        step.wf_hash = next.table_hash();
        if (phi_on) step.phi = phi_min(next).value;
        tr.alg += cost;
        tr.ext_sum += step.ext_cost;
        tr.steps.push_back(std::move(step));
        x = std::move(xn);
        wf = std::move(next);
    }
    tr.opt = opt_cost(wf);
    tr.final_wf_hash = wf.table_hash();
    return tr;
}

enum class RequestKind { UniformRandom, FarthestPoint, Antipodal };

inline RequestKind request_kind_from_string(const std::string& s) {
    if (s == "uniform-random") return RequestKind::UniformRandom;
    if (s == "farthest-point") return RequestKind::FarthestPoint;
    if (s == "antipodal") return RequestKind::Antipodal;
    throw std::invalid_argument("unknown request kind: " + s);
}

// Deterministic request generators. farthest-point and antipodal run the WFA
// alongside to see the algorithm's configuration.
inline std::vector<int> gen_requests(std::shared_ptr<const FiniteMetric> metric, const Config& x0,
                                     RequestKind kind, int count, uint64_t seed) {
    if (count < 0) throw std::invalid_argument("request count must be >= 0");
    const FiniteMetric& m = *metric;
    for (int p : x0.pts()) m.require_point(p);
    if (kind == RequestKind::Antipodal && !m.has_antipodes())
        throw std::invalid_argument("antipodal generator needs a metric with antipodes");

    std::vector<int> out;
    out.reserve(static_cast<size_t>(count));
    if (kind == RequestKind::UniformRandom) {
        std::mt19937_64 rng(seed);
        for (int i = 0; i < count; ++i)
            out.push_back(static_cast<int>(rng() % static_cast<uint64_t>(m.n())));
        return out;
    }

    auto sp = make_space(metric, x0.k());
    WorkFunction wf = initial_wf(sp, x0);
    Config x = x0;
    int last_moved = x0[0];
    for (int i = 0; i < count; ++i) {
        int r;
        if (kind == RequestKind::FarthestPoint) {
            // argmax over p of min distance to the current configuration
            int best_d = -1;
            r = 0;
            for (int p = 0; p < m.n(); ++p) {
                int dmin = std::numeric_limits<int>::max();
                for (int j = 0; j < x.k(); ++j) dmin = std::min(dmin, m.dist(p, x[j]));
                if (dmin > best_d) {
                    best_d = dmin;
                    r = p;
                }
            }
        } else {
            r = m.antipode(last_moved);
        }
        out.push_back(r);
        WorkFunction next = update(wf, r);
        auto [xn, cost] = wfa_step(wf, next, r, x);
        if (cost > 0) last_moved = r;
        x = std::move(xn);
        wf = std::move(next);
    }
    return out;
}

} // namespace kserver
