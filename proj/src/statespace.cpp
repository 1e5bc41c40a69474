#include "gaplab/statespace.hpp"

#include <algorithm>
#include <cstdlib>

namespace gaplab {

std::vector<int> SiteSet::displacement(int x, int z) const {
    std::vector<int> d(dim, 0);
    for (int k = 0; k < dim; ++k) {
        int v = coords[x][k] - coords[z][k];
        if (periodic && period > 0) {
            v = ((v % period) + period) % period;  // minimal image
            if (v > period / 2) v -= period;
        }
        d[k] = v;
    }
    return d;
}

SiteSet SiteSet::complete(int n) {
    SiteSet s;
    s.dim = 1;
    s.coords.resize(n);
    for (int i = 0; i < n; ++i) s.coords[i] = {i};
    return s;
}

SiteSet SiteSet::segment(int L) {
    SiteSet s = complete(L);
    for (int i = 0; i + 1 < L; ++i) s.adjacency.emplace_back(i, i + 1);
    return s;
}

SiteSet SiteSet::ring(int L) {
    SiteSet s = complete(L);
    s.periodic = true;
    s.period = L;
    for (int i = 0; i < L; ++i) {
        int j = (i + 1) % L;
        if (i != j) s.adjacency.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(s.adjacency.begin(), s.adjacency.end());
    s.adjacency.erase(std::unique(s.adjacency.begin(), s.adjacency.end()), s.adjacency.end());
    return s;
}

SiteSet SiteSet::torus(int L, int d) {
    if (d == 1) return ring(L);
    SiteSet s;
    s.dim = d;
    s.periodic = true;
    s.period = L;
    int n = 1;
    for (int k = 0; k < d; ++k) n *= L;
    s.coords.resize(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> c(d);
        int t = i;
        for (int k = 0; k < d; ++k) {
            c[k] = t % L;
            t /= L;
        }
        s.coords[i] = c;
    }
    auto site_of = [&](const std::vector<int>& c) {
        int idx = 0, mul = 1;
        for (int k = 0; k < d; ++k) {
            idx += ((c[k] % L + L) % L) * mul;
            mul *= L;
        }
        return idx;
    };
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
            std::vector<int> c = s.coords[i];
            c[k] += 1;
            int j = site_of(c);
            if (i != j) s.adjacency.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    std::sort(s.adjacency.begin(), s.adjacency.end());
    s.adjacency.erase(std::unique(s.adjacency.begin(), s.adjacency.end()), s.adjacency.end());
    return s;
}

int Configuration::sum() const {
    int t = 0;
    for (int v : occ) t += v;
    return t;
}

namespace {

std::size_t binomial_capped(int n, int k, std::size_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n - k + i) / i, watching the cap to avoid overflow
        if (r > (cap * 4) / static_cast<std::size_t>(n - k + i) + 1) return cap + 1;
        r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
        if (r > cap * 4) return cap + 1;
    }
    return r;
}

void gen_binary(int n, int N, std::vector<int>& cur, std::vector<Configuration>& out) {
    int pos = static_cast<int>(cur.size());
    if (pos == n) {
        if (N == 0) out.push_back(Configuration{cur});
        return;
    }
    int rem = n - pos;
    for (int v = 0; v <= 1; ++v) {
        if (N - v < 0 || N - v > rem - 1) continue;
        cur.push_back(v);
        gen_binary(n, N - v, cur, out);
        cur.pop_back();
    }
}

void gen_comp(int n, int N, std::vector<int>& cur, std::vector<Configuration>& out) {
    int pos = static_cast<int>(cur.size());
    if (pos == n - 1) {
        cur.push_back(N);
        out.push_back(Configuration{cur});
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= N; ++v) {
        cur.push_back(v);
        gen_comp(n, N - v, cur, out);
        cur.pop_back();
    }
}

void gen_product(int n, int M, std::vector<int>& cur, std::vector<Configuration>& out) {
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(Configuration{cur});
        return;
    }
    for (int v = 0; v <= M; ++v) {
        cur.push_back(v);
        gen_product(n, M, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::size_t state_count(SpaceKind kind, int n_sites, int n_or_m, std::size_t capacity) {
    std::size_t count = 0;
    switch (kind) {
        case SpaceKind::FixedNBinary:
            if (n_or_m > n_sites)
                throw InfeasibleError("fixed-N binary space needs N <= n (N=" + std::to_string(n_or_m) +
                                      ", n=" + std::to_string(n_sites) + ")");
            count = binomial_capped(n_sites, n_or_m, capacity);
            break;
        case SpaceKind::FixedNComposition:
            count = binomial_capped(n_or_m + n_sites - 1, n_sites - 1, capacity);
            break;
        case SpaceKind::TruncatedProduct: {
            if (n_or_m < 0) throw InfeasibleError("truncation cap must be >= 0");
            count = 1;
            for (int i = 0; i < n_sites; ++i) {
                count *= static_cast<std::size_t>(n_or_m) + 1;
                if (count > capacity) return count;
            }
            break;
        }
    }
    return count;
}

StateSpace StateSpace::enumerate(SpaceKind kind, int n_sites, int n_or_m, std::size_t capacity) {
    if (n_sites <= 0) throw InfeasibleError("state space needs at least one site");
    std::size_t count = state_count(kind, n_sites, n_or_m, capacity);
    if (count > capacity)
        throw CapacityError("state space would exceed capacity cap of " + std::to_string(capacity) +
                            " states");

    StateSpace s;
    s.kind_ = kind;
    s.n_sites_ = n_sites;
    s.param_ = n_or_m;
    s.configs_.reserve(count);
    std::vector<int> cur;
    cur.reserve(n_sites);
    switch (kind) {
        case SpaceKind::FixedNBinary:
            gen_binary(n_sites, n_or_m, cur, s.configs_);
            break;
        case SpaceKind::FixedNComposition:
            gen_comp(n_sites, n_or_m, cur, s.configs_);
            break;
        case SpaceKind::TruncatedProduct:
            gen_product(n_sites, n_or_m, cur, s.configs_);
            break;
    }
    // recursion emits lexicographic order already; keep the invariant explicit
    s.index_.reserve(s.configs_.size() * 2);
    for (int i = 0; i < static_cast<int>(s.configs_.size()); ++i) s.index_[s.configs_[i]] = i;
    return s;
}

int StateSpace::index_of(const Configuration& c) const {
    auto it = index_.find(c);
    return it == index_.end() ? -1 : it->second;
}

Configuration apply_exchange(const Configuration& eta, int x, int z) {
    if (x == z) throw InvalidMoveError("exchange needs two distinct sites");
    Configuration out = eta;
    std::swap(out.occ[x], out.occ[z]);
    return out;
}

Configuration apply_move(const Configuration& eta, int x, int z) {
    if (x == z || eta.occ[x] == 0) return eta;
    Configuration out = eta;
    out.occ[x] -= 1;
    out.occ[z] += 1;
    return out;
}

std::optional<Configuration> apply_birth(const Configuration& eta, int x, int cap) {
    if (eta.occ[x] >= cap) return std::nullopt;
    Configuration out = eta;
    out.occ[x] += 1;
    return out;
}

Configuration apply_death(const Configuration& eta, int x) {
    if (eta.occ[x] == 0) return eta;
    Configuration out = eta;
    out.occ[x] -= 1;
    return out;
}

}  // namespace gaplab
