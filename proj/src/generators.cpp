#include "gaplab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gaplab {

std::string to_string(const MoveLabel& m) {
    switch (m.kind) {
        case MoveKind::Exchange:
            return "xchg(" + std::to_string(m.x) + "," + std::to_string(m.z) + ")";
        case MoveKind::Move:
            return "move(" + std::to_string(m.x) + "->" + std::to_string(m.z) + ")";
        case MoveKind::Birth:
            return "birth(" + std::to_string(m.x) + ")";
        case MoveKind::Death:
            return "death(" + std::to_string(m.x) + ")";
    }
    return "?";
}

namespace {

MoveLabel inverse_of(const MoveLabel& m) {
    switch (m.kind) {
        case MoveKind::Exchange:
            return m;
        case MoveKind::Move:
            return MoveLabel{MoveKind::Move, m.z, m.x};
        case MoveKind::Birth:
            return MoveLabel{MoveKind::Death, m.x, -1};
        case MoveKind::Death:
            return MoveLabel{MoveKind::Birth, m.x, -1};
    }
    return m;
}

Eigen::VectorXd nu_from_logw(const std::vector<double>& logw) {
    double mx = *std::max_element(logw.begin(), logw.end());
    Eigen::VectorXd nu(static_cast<int>(logw.size()));
    for (int i = 0; i < nu.size(); ++i) nu[i] = std::exp(logw[i] - mx);
    nu /= nu.sum();
    return nu;
}

bool connected(const SiteSet& sites) {
    int n = sites.n();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
    for (auto [x, z] : sites.adjacency) parent[find(x)] = find(z);
    for (int i = 1; i < n; ++i)
        if (find(i) != find(0)) return false;
    return true;
}

}  // namespace

Configuration ReversibleGenerator::apply(const Configuration& eta, const MoveLabel& m) const {
    switch (m.kind) {
        case MoveKind::Exchange:
            return apply_exchange(eta, m.x, m.z);
        case MoveKind::Move:
            return apply_move(eta, m.x, m.z);
        case MoveKind::Birth: {
            auto r = apply_birth(eta, m.x, space->kind() == SpaceKind::TruncatedProduct
                                              ? space->param()
                                              : std::numeric_limits<int>::max());
            return r ? *r : eta;  // saturated births act as the identity
        }
        case MoveKind::Death:
            return apply_death(eta, m.x);
    }
    return eta;
}

ReversibleGenerator ReversibleGenerator::assemble(
    std::shared_ptr<const StateSpace> space, std::vector<MoveLabel> move_set,
    const std::function<double(int, const MoveLabel&)>& rate_fn,
    const std::function<double(const Configuration&)>& logweight_fn, std::string tag, int n_sites) {
    ReversibleGenerator g;
    g.space = std::move(space);
    g.move_set = std::move(move_set);
    g.model_tag = std::move(tag);
    g.n_sites = n_sites;

    const int S = g.states();
    const int M = g.moves();
    g.inverse_move.resize(M);
    for (int m = 0; m < M; ++m) {
        MoveLabel inv = inverse_of(g.move_set[m]);
        auto it = std::find(g.move_set.begin(), g.move_set.end(), inv);
        if (it == g.move_set.end())
            throw InvalidRatesError("move set is not closed under inversion: " + to_string(inv));
        g.inverse_move[m] = static_cast<std::int32_t>(it - g.move_set.begin());
    }

    g.rate_.assign(static_cast<std::size_t>(S) * M, 0.0);
    g.target_.assign(static_cast<std::size_t>(S) * M, 0);
    std::vector<double> logw(S);
    for (int s = 0; s < S; ++s) {
        const Configuration& eta = g.space->config(s);
        logw[s] = logweight_fn(eta);
        for (int m = 0; m < M; ++m) {
            Configuration t = g.apply(eta, g.move_set[m]);
            int ti = (t == eta) ? s : g.space->index_of(t);
            if (ti < 0) throw InfeasibleError("move " + to_string(g.move_set[m]) + " leaves the space");
            g.target_[static_cast<std::size_t>(s) * M + m] = ti;
            g.rate_[static_cast<std::size_t>(s) * M + m] = rate_fn(s, g.move_set[m]);
        }
    }
    g.nu = nu_from_logw(logw);
    g.rebuild_matrix();
    return g;
}

void ReversibleGenerator::rebuild_matrix() {
    const int S = states();
    const int M = moves();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(S) * (M + 1));
    for (int s = 0; s < S; ++s) {
        double out = 0;
        for (int m = 0; m < M; ++m) {
            int t = target(s, m);
            double r = rate(s, m);
            if (t == s || r == 0.0) continue;
            trip.emplace_back(s, t, r);
            out += r;
        }
        trip.emplace_back(s, s, -out);
    }
    L.resize(S, S);
    L.setFromTriplets(trip.begin(), trip.end());
    L.makeCompressed();
}

void ReversibleGenerator::corrupt_rate(int s, int m, double factor) {
    rate_[static_cast<std::size_t>(s) * move_set.size() + m] *= factor;
    rebuild_matrix();
}

double check_detailed_balance(const ReversibleGenerator& gen) {
    const auto& L = gen.L;
    double worst = 0;
    for (int i = 0; i < L.outerSize(); ++i) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(L, i); it; ++it) {
            int j = static_cast<int>(it.col());
            if (j == i) continue;
            double fwd = gen.nu[i] * it.value();
            double bwd = gen.nu[j] * L.coeff(j, i);
            double denom = std::max({fwd, bwd, 1e-300});
            worst = std::max(worst, std::abs(fwd - bwd) / denom);
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Kawasaki
// ---------------------------------------------------------------------------

namespace {

KawasakiModel build_kawasaki(const SiteSet& sites, LatticePotential potential, double beta, int N,
                             bool complete, std::size_t capacity) {
    int n = sites.n();
    if (N > n)
        throw InfeasibleError("kawasaki needs N <= n");
    if (!complete) {
        if (sites.adjacency.empty()) throw ReducibilityError("nearest-neighbor kawasaki needs adjacency");
        if (!connected(sites)) throw ReducibilityError("adjacency graph is disconnected");
    }
    auto space = std::make_shared<StateSpace>(
        StateSpace::enumerate(SpaceKind::FixedNBinary, n, N, capacity));

    std::vector<MoveLabel> moves;
    if (complete) {
        for (int x = 0; x < n; ++x)
            for (int z = x + 1; z < n; ++z) moves.push_back(MoveLabel{MoveKind::Exchange, x, z});
    } else {
        for (auto [x, z] : sites.adjacency) moves.push_back(MoveLabel{MoveKind::Exchange, x, z});
    }

    KawasakiModel model;
    model.sites = sites;
    model.potential = std::move(potential);
    model.beta = beta;
    model.complete = complete;
    const LatticePotential& pot = model.potential;
    double pref = complete ? 1.0 / n : 1.0;

    auto rate_fn = [&sites, &pot, beta, pref, space](int s, const MoveLabel& m) {
        const Configuration& eta = space->config(s);
        double grad = pot.grad_exchange(eta, sites, m.x, m.z);
        return pref * std::exp(-0.5 * beta * grad);
    };
    auto logw = [&sites, &pot, beta](const Configuration& eta) { return -beta * pot.energy(eta, sites); };
    model.gen = ReversibleGenerator::assemble(space, std::move(moves), rate_fn, logw,
                                              complete ? "kawasaki_complete" : "kawasaki_nn", n);
    return model;
}

}  // namespace

KawasakiModel build_kawasaki_complete(const SiteSet& sites, LatticePotential potential, double beta,
                                      int N, std::size_t capacity) {
    return build_kawasaki(sites, std::move(potential), beta, N, true, capacity);
}

KawasakiModel build_kawasaki_nn(const SiteSet& sites, LatticePotential potential, double beta, int N,
                                std::size_t capacity) {
    return build_kawasaki(sites, std::move(potential), beta, N, false, capacity);
}

// ---------------------------------------------------------------------------
// zero range
// ---------------------------------------------------------------------------

RateFamily RateFamily::linear() {
    return RateFamily{"linear", [](int, int k) { return static_cast<double>(k); }};
}

RateFamily RateFamily::constant() {
    return RateFamily{"constant", [](int, int k) { return k >= 1 ? 1.0 : 0.0; }};
}

RateFamily RateFamily::exponential() {
    return RateFamily{"exponential", [](int, int k) { return k >= 1 ? std::exp(k) : 0.0; }};
}

double ZeroRangeModel::c(const Configuration& eta, int x) const {
    int k = eta.occ[x];
    if (k == 0) return 0.0;
    double n = static_cast<double>(gen.n_sites);
    return rates.g(x, k) * std::exp(-energy.grad_death(eta, x)) / n;
}

ZeroRangeModel build_zero_range(const SiteSet& sites, RateFamily rates, QuadraticEnergy energy, int N,
                                std::size_t capacity) {
    int n = sites.n();
    if (energy.J.size() != 0 && energy.n() != n)
        throw InvalidRatesError("quadratic energy dimension must match the site count");
    for (int x = 0; x < n; ++x) {
        if (rates.g(x, 0) != 0.0) throw InvalidRatesError("rate family needs g_x(0) = 0");
        for (int k = 1; k <= N; ++k)
            if (rates.g(x, k) < 1.0)
                throw InvalidRatesError("rate family needs g_x(k) >= 1 for k >= 1 (site " +
                                        std::to_string(x) + ", k=" + std::to_string(k) + ")");
    }
    auto space = std::make_shared<StateSpace>(
        StateSpace::enumerate(SpaceKind::FixedNComposition, n, N, capacity));

    std::vector<MoveLabel> moves;
    for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z)
            if (x != z) moves.push_back(MoveLabel{MoveKind::Move, x, z});

    ZeroRangeModel model;
    model.sites = sites;
    model.rates = std::move(rates);
    model.energy = std::move(energy);
    const RateFamily& g = model.rates;
    const QuadraticEnergy& H = model.energy;

    auto rate_fn = [&g, &H, n, space](int s, const MoveLabel& m) {
        const Configuration& eta = space->config(s);
        int k = eta.occ[m.x];
        if (k == 0) return 0.0;
        return g.g(m.x, k) * std::exp(-H.grad_death(eta, m.x)) / n;
    };
    auto logw = [&g, &H](const Configuration& eta) {
        double lw = -H.energy(eta);
        for (std::size_t x = 0; x < eta.occ.size(); ++x)
            for (int l = 1; l <= eta.occ[x]; ++l) lw -= std::log(g.g(static_cast<int>(x), l));
        return lw;
    };
    model.gen = ReversibleGenerator::assemble(space, std::move(moves), rate_fn, logw, "zero_range", n);
    return model;
}

ZeroRangeModel build_zero_range_uno(int L, int d, double lambda, double beta, RateFamily rates, int N,
                                    std::size_t capacity) {
    SiteSet sites = SiteSet::torus(L, d);
    int n = sites.n();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) J(x, x) = lambda;
    for (auto [x, z] : sites.adjacency) {
        J(x, z) += beta / 2;
        J(z, x) += beta / 2;
    }
    ZeroRangeModel model = build_zero_range(sites, std::move(rates), QuadraticEnergy(J), N, capacity);
    model.uno = UnoShape{true, lambda, beta, d};
    return model;
}

// ---------------------------------------------------------------------------
// Glauber
// ---------------------------------------------------------------------------

double GlauberModel::logweight(const Configuration& eta) const {
    int n = sites.n();
    double lw = 0;
    for (int x = 0; x < n; ++x) {
        lw += eta.occ[x] * std::log(lambda) - std::lgamma(eta.occ[x] + 1.0);
    }
    double pair = 0;
    if (table) {
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y) pair += table->phi(x, y, eta.occ[x], eta.occ[y]);
    } else if (!kernel.empty()) {
        for (int x = 0; x < n; ++x) {
            if (eta.occ[x] == 0) continue;
            for (int y = x + 1; y < n; ++y)
                pair += kernel.at(sites.displacement(x, y)) * eta.occ[x] * eta.occ[y];
            for (std::size_t b = 0; b < sites.boundary_coords.size(); ++b) {
                if (b >= sites.tau.size())
                    throw MissingBoundaryError("boundary site without tau value");
                std::vector<int> disp(sites.dim);
                for (int k = 0; k < sites.dim; ++k)
                    disp[k] = sites.coords[x][k] - sites.boundary_coords[b][k];
                pair += kernel.at(disp) * eta.occ[x] * sites.tau[b];
            }
        }
    }
    return lw - beta * pair;
}

namespace {

GlauberModel build_glauber(const SiteSet& sites, double lambda, OccupationKernel kernel,
                           std::optional<OccupationTable> table, double beta, int M,
                           std::size_t capacity, std::string tag) {
    if (M < 1) throw InfeasibleError("glauber truncation cap must be >= 1");
    if (lambda <= 0) throw InvalidRatesError("glauber needs lambda > 0");
    int n = sites.n();
    auto space = std::make_shared<StateSpace>(
        StateSpace::enumerate(SpaceKind::TruncatedProduct, n, M, capacity));

    std::vector<MoveLabel> moves;
    for (int x = 0; x < n; ++x) moves.push_back(MoveLabel{MoveKind::Birth, x, -1});
    for (int x = 0; x < n; ++x) moves.push_back(MoveLabel{MoveKind::Death, x, -1});

    GlauberModel model;
    model.sites = sites;
    model.lambda = lambda;
    model.beta = beta;
    model.kernel = std::move(kernel);
    model.table = std::move(table);
    model.cap = M;

    const GlauberModel& ref = model;
    auto rate_fn = [&ref, M, space](int s, const MoveLabel& m) {
        const Configuration& eta = space->config(s);
        if (m.kind == MoveKind::Death) return static_cast<double>(eta.occ[m.x]);
        if (eta.occ[m.x] >= M) return 0.0;  // births suppressed at the cap
        Configuration up = eta;
        up.occ[m.x] += 1;
        return (eta.occ[m.x] + 1) * std::exp(ref.logweight(up) - ref.logweight(eta));
    };
    auto logw = [&ref](const Configuration& eta) { return ref.logweight(eta); };
    model.gen = ReversibleGenerator::assemble(space, std::move(moves), rate_fn, logw, tag, n);
    return model;
}

}  // namespace

GlauberModel build_glauber_discrete(const SiteSet& sites, double lambda, OccupationKernel kernel,
                                    double beta, int M, std::size_t capacity) {
    return build_glauber(sites, lambda, std::move(kernel), std::nullopt, beta, M, capacity, "glauber");
}

GlauberModel build_glauber_discrete_table(const SiteSet& sites, double lambda, OccupationTable table,
                                          double beta, int M, std::size_t capacity) {
    return build_glauber(sites, lambda, OccupationKernel{}, std::move(table), beta, M, capacity,
                         "glauber_table");
}

// ---------------------------------------------------------------------------
// discretized continuum models
// ---------------------------------------------------------------------------

double MoveKawasakiModel::insertion_energy(const Configuration& eta, int v) const {
    double s = 0;
    for (int w = 0; w < ncells; ++w)
        if (eta.occ[w]) s += eta.occ[w] * phi_cells(w, v);
    return s;
}

MoveKawasakiModel build_continuum_kawasaki_discretized(double box_len, const RadialProfile& phi,
                                                       double beta, int N, double h,
                                                       std::size_t capacity) {
    if (box_len <= 0 || h <= 0) throw InfeasibleError("continuum discretization needs box, h > 0");
    int n = static_cast<int>(std::ceil(box_len / h - 1e-12));
    auto space = std::make_shared<StateSpace>(
        StateSpace::enumerate(SpaceKind::FixedNComposition, n, N, capacity));

    MoveKawasakiModel model;
    model.beta = beta;
    model.ncells = n;
    model.N = N;
    model.h = h;
    model.volume = box_len;
    model.phi_cells.resize(n, n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) model.phi_cells(u, v) = phi(std::abs(u - v) * h);

    std::vector<MoveLabel> moves;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) moves.push_back(MoveLabel{MoveKind::Move, u, v});

    const MoveKawasakiModel& ref = model;
    auto rate_fn = [&ref, n, space](int s, const MoveLabel& m) {
        const Configuration& eta = space->config(s);
        if (eta.occ[m.x] == 0) return 0.0;
        Configuration minus = eta;
        minus.occ[m.x] -= 1;
        return eta.occ[m.x] * std::exp(-ref.beta * ref.insertion_energy(minus, m.z)) / n;
    };
    auto logw = [&ref](const Configuration& eta) {
        double pair = 0;
        for (int a = 0; a < ref.ncells; ++a) {
            if (eta.occ[a] == 0) continue;
            pair += 0.5 * eta.occ[a] * (eta.occ[a] - 1) * ref.phi_cells(a, a);
            for (int b = a + 1; b < ref.ncells; ++b)
                pair += eta.occ[a] * eta.occ[b] * ref.phi_cells(a, b);
        }
        double lw = -ref.beta * pair;
        for (int a = 0; a < ref.ncells; ++a) lw -= std::lgamma(eta.occ[a] + 1.0);
        return lw;
    };
    model.gen =
        ReversibleGenerator::assemble(space, std::move(moves), rate_fn, logw, "continuum_kawasaki", n);
    return model;
}

GlauberModel build_continuum_glauber_discretized(double box_len, const RadialProfile& phi, double beta,
                                                 double z, double h, int M, std::size_t capacity) {
    if (box_len <= 0 || h <= 0) throw InfeasibleError("continuum discretization needs box, h > 0");
    int n = static_cast<int>(std::ceil(box_len / h - 1e-12));
    SiteSet grid = SiteSet::segment(n);
    double lambda = z * h;  // cell activity z h^d, d = 1
    OccupationKernel kernel = OccupationKernel::from_profile(phi, h, 1, box_len);
    GlauberModel model = build_glauber_discrete(grid, lambda, std::move(kernel), beta, M, capacity);
    model.gen.model_tag = "continuum_glauber";
    return model;
}

}  // namespace gaplab
