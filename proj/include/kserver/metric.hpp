#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "kserver/hash.hpp"

namespace kserver {

// Finite metric space with exact integer distances. Immutable after
// construction; the validating constructor is the only way in, so every
// instance satisfies symmetry, zero diagonal and the triangle inequality.
//
// A metric may carry an antipode map: an involution a -> bar(a) with
// d(a,b) + d(bar(a),b) = diameter for all a,b. Cycles of even length and
// hypercubes always have one; arbitrary matrices are probed for it.
class FiniteMetric {
public:
    static FiniteMetric cycle(int n) {
        if (n < 4 || n % 2 != 0)
            throw std::invalid_argument(
                "cycle metric needs an even point count n >= 4 (antipodes require even n), got n=" +
                std::to_string(n));
        std::vector<int> d(static_cast<size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                int w = std::abs(a - b);
                d[static_cast<size_t>(a) * n + b] = std::min(w, n - w);
            }
        FiniteMetric m(n, std::move(d));
        m.antipodes_.resize(n);
        for (int a = 0; a < n; ++a) m.antipodes_[a] = (a + n / 2) % n;
        return m;
    }

    static FiniteMetric hypercube(int dim) {
        if (dim < 1) throw std::invalid_argument("hypercube dimension must be >= 1");
        if (dim > 12)
            throw std::invalid_argument("hypercube dimension " + std::to_string(dim) +
                                        " exceeds the supported point-id width (max 12)");
        int n = 1 << dim;
        std::vector<int> d(static_cast<size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                d[static_cast<size_t>(a) * n + b] = __builtin_popcount(static_cast<unsigned>(a ^ b));
        FiniteMetric m(n, std::move(d));
        int full = n - 1;
        m.antipodes_.resize(n);
        for (int a = 0; a < n; ++a) m.antipodes_[a] = a ^ full;
        return m;
    }

    static FiniteMetric from_matrix(const std::vector<std::vector<int>>& rows) {
        int n = static_cast<int>(rows.size());
        if (n < 1) throw std::invalid_argument("distance matrix is empty");
        std::vector<int> d(static_cast<size_t>(n) * n);
        for (int a = 0; a < n; ++a) {
            if (static_cast<int>(rows[a].size()) != n)
                throw std::invalid_argument("distance matrix is not square at row " + std::to_string(a));
            for (int b = 0; b < n; ++b) d[static_cast<size_t>(a) * n + b] = rows[a][b];
        }
        FiniteMetric m(n, std::move(d));
        m.detect_antipodes();
        return m;
    }

    int n() const { return n_; }
    int diameter() const { return diameter_; }

    int dist(int a, int b) const { return dist_[static_cast<size_t>(a) * n_ + b]; }
    const int* dist_row(int a) const { return dist_.data() + static_cast<size_t>(a) * n_; }

    bool has_antipodes() const { return !antipodes_.empty(); }

    int antipode(int a) const {
        if (antipodes_.empty())
            throw std::invalid_argument("metric has no antipode map");
        return antipodes_[a];
    }

    bool valid_point(int p) const { return p >= 0 && p < n_; }

    void require_point(int p) const {
        if (!valid_point(p))
            throw std::invalid_argument("point id " + std::to_string(p) + " out of range [0, " +
                                        std::to_string(n_) + ")");
    }

private:
    FiniteMetric(int n, std::vector<int> d) : n_(n), dist_(std::move(d)) {
        for (int a = 0; a < n_; ++a) {
            if (dist(a, a) != 0)
                throw std::invalid_argument("nonzero diagonal at point " + std::to_string(a));
            for (int b = 0; b < n_; ++b) {
                if (dist(a, b) < 0)
                    throw std::invalid_argument("negative distance at (" + std::to_string(a) + "," +
                                                std::to_string(b) + ")");
                if (dist(a, b) != dist(b, a))
                    throw std::invalid_argument("asymmetric distance at (" + std::to_string(a) + "," +
                                                std::to_string(b) + ")");
                diameter_ = std::max(diameter_, dist(a, b));
            }
        }
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b)
                for (int c = 0; c < n_; ++c)
                    if (dist(a, c) > dist(a, b) + dist(b, c))
                        throw std::invalid_argument("triangle inequality violated on (" +
                                                    std::to_string(a) + "," + std::to_string(b) + "," +
                                                    std::to_string(c) + ")");
    }

    // The antipode of a, if any, is pinned pointwise by d(bar(a), b) =
    // diameter - d(a, b); scan candidates, then confirm the map is an
    // involution. No consistent involution -> the map stays absent.
    void detect_antipodes() {
        std::vector<int> cand(n_, -1);
        for (int a = 0; a < n_; ++a) {
            for (int c = 0; c < n_; ++c) {
                bool ok = true;
                for (int b = 0; b < n_ && ok; ++b) ok = dist(c, b) == diameter_ - dist(a, b);
                if (ok) {
                    cand[a] = c;
                    break;
                }
            }
            if (cand[a] < 0) return;
        }
        for (int a = 0; a < n_; ++a)
            if (cand[cand[a]] != a) return;
        antipodes_ = std::move(cand);
    }

    int n_ = 0;
    int diameter_ = 0;
    std::vector<int> dist_;
    std::vector<int> antipodes_;
};

// Sorted multiset of k server positions.
class Config {
public:
    Config() = default;
    explicit Config(std::vector<int> pts) : pts_(std::move(pts)) {
        std::sort(pts_.begin(), pts_.end());
    }

    int k() const { return static_cast<int>(pts_.size()); }
    int operator[](int i) const { return pts_[static_cast<size_t>(i)]; }
    const std::vector<int>& pts() const { return pts_; }

    bool contains(int p) const { return std::binary_search(pts_.begin(), pts_.end(), p); }

    // X - pts[pos] + p, re-sorted.
    Config replaced(int pos, int p) const {
        std::vector<int> v = pts_;
        v[static_cast<size_t>(pos)] = p;
        return Config(std::move(v));
    }

    friend bool operator==(const Config& a, const Config& b) { return a.pts_ == b.pts_; }
    friend bool operator<(const Config& a, const Config& b) { return a.pts_ < b.pts_; }

    std::string str() const {
        std::string s = "{";
        for (int i = 0; i < k(); ++i) {
            if (i) s += ",";
            s += std::to_string(pts_[static_cast<size_t>(i)]);
        }
        return s + "}";
    }

private:
    std::vector<int> pts_;
};

inline Config point_power(int p, int k) {
    return Config(std::vector<int>(static_cast<size_t>(k), p));
}

// Min-cost bijection between two k-point multisets (copies of a point are
// matched as distinct objects). k stays tiny here, so enumerating the k!
// bijections is exact and fast; an independent Hungarian solver cross-checks
// this in the test suite.
inline int wasserstein(const FiniteMetric& m, const Config& x, const Config& y) {
    if (x.k() != y.k())
        throw std::invalid_argument("wasserstein: configurations of different size " +
                                    std::to_string(x.k()) + " vs " + std::to_string(y.k()));
    int k = x.k();
    std::vector<int> perm(y.pts());
    int best = -1;
    do {
        int c = 0;
        for (int i = 0; i < k; ++i) c += m.dist(x[i], perm[static_cast<size_t>(i)]);
        if (best < 0 || c < best) best = c;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// All k-point multisets of an n-point metric in lexicographic order. This
// order is the table-index contract shared by every module that stores
// per-configuration values.
inline std::vector<Config> enumerate_configs(int n, int k) {
    if (k < 1) throw std::invalid_argument("configuration size k must be >= 1");
    std::vector<Config> out;
    std::vector<int> cur(static_cast<size_t>(k), 0);
    while (true) {
        out.push_back(Config(cur));
        int i = k - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == n - 1) --i;
        if (i < 0) break;
        int v = cur[static_cast<size_t>(i)] + 1;
        for (int j = i; j < k; ++j) cur[static_cast<size_t>(j)] = v;
    }
    return out;
}

// Shared immutable context for one (metric, k): the configuration list, an
// index lookup, per-point membership lists and (for small spaces) the full
// pairwise Wasserstein matrix.
class ConfigSpace {
public:
    ConfigSpace(std::shared_ptr<const FiniteMetric> metric, int k)
        : metric_(std::move(metric)), k_(k), configs_(enumerate_configs(metric_->n(), k)) {
        int n = metric_->n();
        size_t dense = 1;
        bool fits = true;
        for (int i = 0; i < k_; ++i) {
            dense *= static_cast<size_t>(n);
            if (dense > (1u << 22)) {
                fits = false;
                break;
            }
        }
        if (fits) {
            rank_.assign(dense, -1);
            for (size_t idx = 0; idx < configs_.size(); ++idx)
                rank_[dense_key(configs_[idx])] = static_cast<int>(idx);
        }
        containing_.assign(static_cast<size_t>(n), {});
        for (size_t idx = 0; idx < configs_.size(); ++idx) {
            const auto& pts = configs_[idx].pts();
            int prev = -1;
            for (int p : pts) {
                if (p != prev) containing_[static_cast<size_t>(p)].push_back(static_cast<int>(idx));
                prev = p;
            }
        }
        if (configs_.size() <= 1024) {
            size_t c = configs_.size();
            pairdist_.assign(c * c, 0);
            for (size_t i = 0; i < c; ++i)
                for (size_t j = i + 1; j < c; ++j) {
                    int d = kserver::wasserstein(*metric_, configs_[i], configs_[j]);
                    pairdist_[i * c + j] = d;
                    pairdist_[j * c + i] = d;
                }
        }
    }

    const FiniteMetric& metric() const { return *metric_; }
    std::shared_ptr<const FiniteMetric> metric_ptr() const { return metric_; }
    int k() const { return k_; }
    int size() const { return static_cast<int>(configs_.size()); }
    const Config& config(int idx) const { return configs_[static_cast<size_t>(idx)]; }
    const std::vector<Config>& configs() const { return configs_; }

    int index_of(const Config& c) const {
        if (c.k() != k_) throw std::invalid_argument("configuration has wrong size for this space");
        for (int p : c.pts()) metric_->require_point(p);
        if (!rank_.empty()) return rank_[dense_key(c)];
        auto it = std::lower_bound(configs_.begin(), configs_.end(), c);
        return static_cast<int>(it - configs_.begin());
    }

    // Low-level lookup for hot loops: pts must be k sorted valid point ids.
    int index_of_sorted(const int* pts) const {
        if (!rank_.empty()) {
            size_t key = 0;
            for (int i = 0; i < k_; ++i) key = key * static_cast<size_t>(metric_->n()) + static_cast<size_t>(pts[i]);
            return rank_[key];
        }
        return index_of(Config(std::vector<int>(pts, pts + k_)));
    }

    // Wasserstein distance between configs by table index.
    int wdist(int i, int j) const {
        if (!pairdist_.empty()) return pairdist_[static_cast<size_t>(i) * configs_.size() + j];
        return kserver::wasserstein(*metric_, configs_[static_cast<size_t>(i)],
                                    configs_[static_cast<size_t>(j)]);
    }

    // Indices of configurations containing point p.
    const std::vector<int>& containing(int p) const { return containing_[static_cast<size_t>(p)]; }

    // Golden hash of the enumeration order (stability contract).
    uint64_t order_hash() const {
        Fnv1a h;
        h.feed_i64(metric_->n());
        h.feed_i64(k_);
        for (const auto& c : configs_) h.feed_ints(c.pts());
        return h.state;
    }

private:
    size_t dense_key(const Config& c) const {
        size_t key = 0;
        for (int i = 0; i < k_; ++i) key = key * static_cast<size_t>(metric_->n()) + static_cast<size_t>(c[i]);
        return key;
    }

    std::shared_ptr<const FiniteMetric> metric_;
    int k_;
    std::vector<Config> configs_;
    std::vector<int> rank_;
    std::vector<std::vector<int>> containing_;
    std::vector<int> pairdist_;
};

inline std::shared_ptr<const ConfigSpace> make_space(std::shared_ptr<const FiniteMetric> m, int k) {
    return std::make_shared<const ConfigSpace>(std::move(m), k);
}

} // namespace kserver
