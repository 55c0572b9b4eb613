#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kserver/metric.hpp"

namespace kserver {

// Exact work-function table over all k-configurations of a finite metric,
// in ConfigSpace enumeration order. Immutable; update() returns a new table.
class WorkFunction {
public:
    WorkFunction(std::shared_ptr<const ConfigSpace> space, std::vector<int> values,
                 std::optional<int> last_request)
        : space_(std::move(space)), values_(std::move(values)), last_request_(last_request) {
        if (static_cast<int>(values_.size()) != space_->size())
            throw std::invalid_argument("work function table has wrong length");
        for (int v : values_)
            if (v < 0) throw std::invalid_argument("work function value is negative");
        if (last_request_) space_->metric().require_point(*last_request_);
    }

    const ConfigSpace& space() const { return *space_; }
    std::shared_ptr<const ConfigSpace> space_ptr() const { return space_; }
    int k() const { return space_->k(); }
    std::optional<int> last_request() const { return last_request_; }

    int value(int idx) const { return values_[static_cast<size_t>(idx)]; }
    int value(const Config& c) const { return values_[static_cast<size_t>(space_->index_of(c))]; }
    const std::vector<int>& values() const { return values_; }

    uint64_t table_hash() const {
        Fnv1a h;
        h.feed_i64(space_->metric().n());
        h.feed_i64(space_->k());
        h.feed_i64(last_request_ ? *last_request_ : -1);
        h.feed_ints(values_);
        return h.state;
    }

private:
    std::shared_ptr<const ConfigSpace> space_;
    std::vector<int> values_;
    std::optional<int> last_request_;
};

inline void require_same_space(const WorkFunction& a, const WorkFunction& b) {
    if (a.space_ptr() != b.space_ptr())
        throw std::invalid_argument("work functions live on different configuration spaces");
}

// w_0(X) = d(X0, X): the cost of just relocating from the initial configuration.
inline WorkFunction initial_wf(std::shared_ptr<const ConfigSpace> space, const Config& x0) {
    int i0 = space->index_of(x0);
    std::vector<int> vals(static_cast<size_t>(space->size()));
    for (int i = 0; i < space->size(); ++i) vals[static_cast<size_t>(i)] = space->wdist(i0, i);
    return WorkFunction(std::move(space), std::move(vals), std::nullopt);
}

// Single-move recurrence: w_t(X) = min_{x in X} w_{t-1}(X - x + r) + d(x, r).
// Mandatorily cross-checked against update_oracle in the test suites.
inline WorkFunction update(const WorkFunction& wf, int r) {
    const ConfigSpace& sp = wf.space();
    const FiniteMetric& m = sp.metric();
    m.require_point(r);
    std::vector<int> vals(static_cast<size_t>(sp.size()));
    for (int i = 0; i < sp.size(); ++i) {
        const Config& x = sp.config(i);
        int best = -1;
        int prev_pt = -1;
        for (int pos = 0; pos < sp.k(); ++pos) {
            if (x[pos] == prev_pt) continue; // same candidate as the last slot
            prev_pt = x[pos];
            int cand = wf.value(sp.index_of(x.replaced(pos, r))) + m.dist(x[pos], r);
            if (best < 0 || cand < best) best = cand;
        }
        vals[static_cast<size_t>(i)] = best;
    }
    return WorkFunction(wf.space_ptr(), std::move(vals), r);
}

// Definitional form: w_t(X) = min over Y containing r of w_{t-1}(Y) + d(Y, X).
// Slow; exists as ground truth for update().
inline WorkFunction update_oracle(const WorkFunction& wf, int r) {
    const ConfigSpace& sp = wf.space();
    sp.metric().require_point(r);
    const std::vector<int>& with_r = sp.containing(r);
    std::vector<int> vals(static_cast<size_t>(sp.size()));
    for (int i = 0; i < sp.size(); ++i) {
        int best = -1;
        for (int j : with_r) {
            int cand = wf.value(j) + sp.wdist(j, i);
            if (best < 0 || cand < best) best = cand;
        }
        vals[static_cast<size_t>(i)] = best;
    }
    return WorkFunction(wf.space_ptr(), std::move(vals), r);
}

// Work function induced by support-set/value pairs, all containing the last
// request r: w(X) = min_i (v_i + d(S_i, X)). The values need not come from
// any realizable request history.
struct SupportWF {
    std::shared_ptr<const ConfigSpace> space;
    int r = 0;
    std::vector<std::pair<Config, int>> pairs;

    void validate() const {
        if (!space) throw std::invalid_argument("support function has no configuration space");
        space->metric().require_point(r);
        if (pairs.empty()) throw std::invalid_argument("support set list is empty");
        for (const auto& [s, v] : pairs) {
            if (s.k() != space->k())
                throw std::invalid_argument("support set " + s.str() + " has wrong size");
            if (!s.contains(r))
                throw std::invalid_argument("support set " + s.str() + " does not contain the last request " +
                                            std::to_string(r));
            if (v < 0) throw std::invalid_argument("support value for " + s.str() + " is negative");
        }
    }
};

inline WorkFunction from_support(const SupportWF& s) {
    s.validate();
    const ConfigSpace& sp = *s.space;
    std::vector<int> sidx;
    sidx.reserve(s.pairs.size());
    for (const auto& [cfg, v] : s.pairs) sidx.push_back(sp.index_of(cfg));
    std::vector<int> vals(static_cast<size_t>(sp.size()));
    for (int i = 0; i < sp.size(); ++i) {
        int best = -1;
        for (size_t j = 0; j < sidx.size(); ++j) {
            int cand = s.pairs[j].second + sp.wdist(sidx[j], i);
            if (best < 0 || cand < best) best = cand;
        }
        vals[static_cast<size_t>(i)] = best;
    }
    return WorkFunction(s.space, std::move(vals), s.r);
}

// d(X, r^k) = sum of distances from X's points to r (every bijection ties).
inline int dist_to_point_power(const ConfigSpace& sp, int idx, int r) {
    const Config& x = sp.config(idx);
    int d = 0;
    for (int i = 0; i < sp.k(); ++i) d += sp.metric().dist(x[i], r);
    return d;
}

struct CheckReport {
    bool pass = true;
    std::vector<std::string> violations;

    void fail(std::string what) {
        pass = false;
        violations.push_back(std::move(what));
    }
};

// next >= prev pointwise, with equality on every configuration containing r.
inline CheckReport check_monotone_pair(const WorkFunction& prev, const WorkFunction& next, int r) {
    require_same_space(prev, next);
    const ConfigSpace& sp = prev.space();
    CheckReport rep;
    for (int i = 0; i < sp.size(); ++i) {
        if (next.value(i) < prev.value(i))
            rep.fail("monotonicity: w_t" + sp.config(i).str() + "=" + std::to_string(next.value(i)) +
                     " < w_{t-1}=" + std::to_string(prev.value(i)));
        else if (sp.config(i).contains(r) && next.value(i) != prev.value(i))
            rep.fail("monotonicity equality case: X=" + sp.config(i).str() + " contains r=" +
                     std::to_string(r) + " but w_t=" + std::to_string(next.value(i)) +
                     " != w_{t-1}=" + std::to_string(prev.value(i)));
    }
    return rep;
}

// |w(X) - w(Y)| <= d(X, Y) over all configuration pairs.
inline CheckReport check_lipschitz(const WorkFunction& wf) {
    const ConfigSpace& sp = wf.space();
    CheckReport rep;
    for (int i = 0; i < sp.size(); ++i)
        for (int j = i + 1; j < sp.size(); ++j) {
            int gap = std::abs(wf.value(i) - wf.value(j));
            int d = sp.wdist(i, j);
            if (gap > d)
                rep.fail("lipschitz: |w" + sp.config(i).str() + " - w" + sp.config(j).str() + "| = " +
                         std::to_string(gap) + " > d = " + std::to_string(d));
        }
    return rep;
}

struct QuasiconvexResult {
    bool ok = false;
    // Target point for each of X's k slots under the witness bijection.
    std::vector<int> bijection;
    std::string detail;
};

// Searches the bijections X -> Y that fix common points (copies distinct) for
// one satisfying the exchange inequality on every partition X = X1 | X2:
//   w(X) + w(Y) >= w(X1 u pi(X2)) + w(pi(X1) u X2).
// Runs on every configuration pair in the harnesses, so the inner loop stays
// allocation-free (k <= 8).
inline QuasiconvexResult check_quasiconvex(const WorkFunction& wf, const Config& x, const Config& y) {
    const ConfigSpace& sp = wf.space();
    if (x.k() != sp.k() || y.k() != sp.k())
        throw std::invalid_argument("quasi-convexity check needs configurations of size k");
    int k = sp.k();
    if (k > 8) throw std::invalid_argument("quasi-convexity search supports k <= 8");

    // Pin min(count_X(p), count_Y(p)) copies of every common point p. Both
    // sides are sorted, so a two-pointer pass finds the common multiset.
    int fixed[8];
    int free_targets[8];
    int nfree = 0;
    {
        int i = 0, j = 0;
        int taken[8]; // y positions consumed by fixed slots
        for (int t = 0; t < k; ++t) taken[t] = 0;
        for (int t = 0; t < k; ++t) fixed[t] = -1;
        while (i < k && j < k) {
            if (x[i] == y[j]) {
                fixed[i] = x[i];
                taken[j] = 1;
                ++i, ++j;
            } else if (x[i] < y[j]) {
                ++i;
            } else {
                ++j;
            }
        }
        for (int t = 0; t < k; ++t)
            if (!taken[t]) free_targets[nfree++] = y[t];
    }

    long long lhs = static_cast<long long>(wf.value(x)) + wf.value(y);
    QuasiconvexResult res;
    int pi[8];
    int a[8], b[8], sa[8], sb[8];
    do {
        int t = 0;
        for (int i = 0; i < k; ++i) pi[i] = fixed[i] >= 0 ? fixed[i] : free_targets[t++];
        bool all_ok = true;
        for (int mask = 0; mask < (1 << k) && all_ok; ++mask) {
            for (int i = 0; i < k; ++i) {
                if (mask & (1 << i)) {
                    a[i] = x[i];
                    b[i] = pi[i];
                } else {
                    a[i] = pi[i];
                    b[i] = x[i];
                }
            }
            for (int i = 0; i < k; ++i) {
                int va = a[i], vb = b[i];
                int p = i;
                while (p > 0 && sa[p - 1] > va) sa[p] = sa[p - 1], --p;
                sa[p] = va;
                p = i;
                while (p > 0 && sb[p - 1] > vb) sb[p] = sb[p - 1], --p;
                sb[p] = vb;
            }
            long long rhs = static_cast<long long>(wf.value(sp.index_of_sorted(sa))) +
                            wf.value(sp.index_of_sorted(sb));
            if (lhs < rhs) all_ok = false;
        }
        if (all_ok) {
            res.ok = true;
            res.bijection.assign(pi, pi + k);
            return res;
        }
    } while (std::next_permutation(free_targets, free_targets + nfree));
    res.detail = "no bijection " + x.str() + " -> " + y.str() + " satisfies all partitions";
    return res;
}

// Exchange property over every configuration pair; stops at the first failure.
inline CheckReport check_quasiconvex_all(const WorkFunction& wf) {
    const ConfigSpace& sp = wf.space();
    CheckReport rep;
    for (int i = 0; i < sp.size(); ++i)
        for (int j = i; j < sp.size(); ++j) {
            QuasiconvexResult q = check_quasiconvex(wf, sp.config(i), sp.config(j));
            if (!q.ok) {
                rep.fail(q.detail);
                return rep;
            }
        }
    return rep;
}

// argmin_X (w_{t-1}(X) - d(X, r^k))  must be contained in
// argmax_X (w_t(X) - w_{t-1}(X)); both sets computed exhaustively.
inline CheckReport check_duality(const WorkFunction& prev, const WorkFunction& next, int r) {
    require_same_space(prev, next);
    const ConfigSpace& sp = prev.space();
    int min_v = 0, max_v = 0;
    for (int i = 0; i < sp.size(); ++i) {
        int f = prev.value(i) - dist_to_point_power(sp, i, r);
        int g = next.value(i) - prev.value(i);
        if (i == 0 || f < min_v) min_v = f;
        if (i == 0 || g > max_v) max_v = g;
    }
    CheckReport rep;
    for (int i = 0; i < sp.size(); ++i) {
        int f = prev.value(i) - dist_to_point_power(sp, i, r);
        int g = next.value(i) - prev.value(i);
        if (f == min_v && g != max_v)
            rep.fail("duality: X=" + sp.config(i).str() + " attains argmin (" + std::to_string(f) +
                     ") but w_t - w_{t-1} = " + std::to_string(g) + " < max " + std::to_string(max_v));
    }
    return rep;
}

// On antipode metrics, bar(r)^k attains min_X (w_{t-1}(X) - d(X, r^k)).
inline CheckReport check_antipode_minimizer(const WorkFunction& prev, int r) {
    const ConfigSpace& sp = prev.space();
    const FiniteMetric& m = sp.metric();
    if (!m.has_antipodes())
        throw std::invalid_argument("antipode-minimizer check needs a metric with antipodes");
    m.require_point(r);
    int min_v = 0;
    int argmin = 0;
    for (int i = 0; i < sp.size(); ++i) {
        int f = prev.value(i) - dist_to_point_power(sp, i, r);
        if (i == 0 || f < min_v) {
            min_v = f;
            argmin = i;
        }
    }
    Config anti = point_power(m.antipode(r), sp.k());
    int at_anti = prev.value(anti) - dist_to_point_power(sp, sp.index_of(anti), r);
    CheckReport rep;
    if (at_anti != min_v)
        rep.fail("antipode minimizer: value at " + anti.str() + " is " + std::to_string(at_anti) +
                 " but minimum " + std::to_string(min_v) + " is attained at " +
                 sp.config(argmin).str());
    return rep;
}

// max_X (w_t(X) - w_{t-1}(X)).
inline int extended_cost(const WorkFunction& prev, const WorkFunction& next) {
    require_same_space(prev, next);
    int best = next.value(0) - prev.value(0);
    for (int i = 1; i < prev.space().size(); ++i)
        best = std::max(best, next.value(i) - prev.value(i));
    return best;
}

// w(X) resolves from x (w.r.t. request r) iff w(X) = w(X - x + r) + d(x, r).
inline bool resolves_from(const WorkFunction& wf, const Config& x, int from, int r) {
    const ConfigSpace& sp = wf.space();
    sp.metric().require_point(r);
    int pos = -1;
    for (int i = 0; i < x.k(); ++i)
        if (x[i] == from) {
            pos = i;
            break;
        }
    if (pos < 0)
        throw std::invalid_argument("resolving point " + std::to_string(from) + " is not in " + x.str());
    return wf.value(x) == wf.value(x.replaced(pos, r)) + sp.metric().dist(from, r);
}

} // namespace kserver
