#include "gaplab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gaplab {

void LatticePotential::add_term(PotentialTerm term) {
    if (term.support.empty()) throw InvalidMoveError("potential term needs a nonempty support");
    if (term.table.size() != (std::size_t(1) << term.support.size()))
        throw InvalidMoveError("potential term table must have 2^|A| entries");
    bool touches_volume = false;
    for (const auto& s : term.support)
        if (!s.boundary) touches_volume = true;
    if (!touches_volume) throw InvalidMoveError("potential term must intersect the volume");
    int idx = static_cast<int>(terms_.size());
    terms_.push_back(std::move(term));
    for (const auto& s : terms_.back().support) {
        if (s.boundary) continue;
        if (s.idx >= static_cast<int>(by_site_.size())) by_site_.resize(s.idx + 1);
        by_site_[s.idx].push_back(idx);
    }
}

double LatticePotential::term_value(const PotentialTerm& t, const Configuration& eta,
                                    const SiteSet& sites) const {
    std::size_t bits = 0;
    for (std::size_t k = 0; k < t.support.size(); ++k) {
        const SiteRef& s = t.support[k];
        int occ;
        if (s.boundary) {
            if (s.idx >= static_cast<int>(sites.tau.size()))
                throw MissingBoundaryError("term references boundary site " + std::to_string(s.idx) +
                                           " with no tau value");
            occ = sites.tau[s.idx];
        } else {
            occ = eta.occ[s.idx];
        }
        if (occ) bits |= (std::size_t(1) << k);
    }
    return t.table[bits];
}

double LatticePotential::energy(const Configuration& eta, const SiteSet& sites) const {
    double h = 0;
    for (const auto& t : terms_) h += term_value(t, eta, sites);
    return h;
}

double LatticePotential::grad_exchange(const Configuration& eta, const SiteSet& sites, int x,
                                       int z) const {
    if (eta.occ[x] == eta.occ[z]) return 0.0;
    Configuration swapped = apply_exchange(eta, x, z);
    double d = 0;
    auto visit = [&](int site) {
        if (site >= static_cast<int>(by_site_.size())) return;
        for (int ti : by_site_[site]) {
            const auto& t = terms_[ti];
            // count each term once: skip terms containing x when visiting z
            if (site == z) {
                bool has_x = false;
                for (const auto& s : t.support)
                    if (!s.boundary && s.idx == x) has_x = true;
                if (has_x) continue;
            }
            d += term_value(t, swapped, sites) - term_value(t, eta, sites);
        }
    };
    visit(x);
    visit(z);
    return d;
}

std::pair<double, double> LatticePotential::norms() const {
    // key a site by (boundary flag, index)
    std::map<std::pair<int, int>, std::pair<double, double>> per_site;
    for (const auto& t : terms_) {
        double sup = 0;
        for (double v : t.table) sup = std::max(sup, std::abs(v));
        double card = static_cast<double>(t.support.size());
        for (const auto& s : t.support) {
            auto& acc = per_site[{s.boundary ? 1 : 0, s.idx}];
            acc.first += sup;
            acc.second += card * sup;
        }
    }
    double n1 = 0, n3 = 0;
    for (const auto& [k, v] : per_site) {
        n1 = std::max(n1, v.first);
        n3 = std::max(n3, v.second);
    }
    return {n1, n3};
}

int LatticePotential::range() const {
    int r = 0;
    for (const auto& t : terms_) {
        for (const auto& a : t.support)
            for (const auto& b : t.support)
                if (!a.boundary && !b.boundary) r = std::max(r, std::abs(a.idx - b.idx));
    }
    return r;
}

LatticePotential LatticePotential::nn_pair(const SiteSet& sites, double coupling) {
    LatticePotential p;
    for (auto [x, z] : sites.adjacency) {
        PotentialTerm t;
        t.support = {SiteRef{false, x}, SiteRef{false, z}};
        t.table = {0.0, 0.0, 0.0, coupling};
        p.add_term(std::move(t));
    }
    return p;
}

QuadraticEnergy::QuadraticEnergy(Eigen::MatrixXd j) : J(std::move(j)) {
    if (J.rows() != J.cols()) throw InvalidRatesError("quadratic energy matrix must be square");
    if ((J - J.transpose()).cwiseAbs().maxCoeff() > 1e-14)
        throw InvalidRatesError("quadratic energy matrix must be symmetric");
}

bool QuadraticEnergy::zero() const {
    return J.size() == 0 || J.cwiseAbs().maxCoeff() == 0.0;
}

double QuadraticEnergy::energy(const Configuration& eta) const {
    if (J.size() == 0) return 0.0;
    double h = 0;
    int m = n();
    for (int x = 0; x < m; ++x) {
        if (eta.occ[x] == 0) continue;
        for (int y = 0; y < m; ++y) h += J(x, y) * eta.occ[x] * eta.occ[y];
    }
    return h;
}

double QuadraticEnergy::grad_birth(const Configuration& eta, int x) const {
    if (J.size() == 0) return 0.0;
    double s = 0;
    for (int z = 0; z < n(); ++z)
        if (z != x) s += J(x, z) * eta.occ[z];
    return 2.0 * s + J(x, x) * (2.0 * eta.occ[x] + 1.0);
}

double QuadraticEnergy::grad_death(const Configuration& eta, int x) const {
    if (eta.occ[x] == 0 || J.size() == 0) return 0.0;
    double s = 0;
    for (int z = 0; z < n(); ++z)
        if (z != x) s += J(x, z) * eta.occ[z];
    return -2.0 * s - J(x, x) * (2.0 * eta.occ[x] - 1.0);
}

RadialProfile RadialProfile::indicator(double theta, double radius) {
    if (theta < 0 || radius < 0) throw InvalidRatesError("indicator profile needs theta, radius >= 0");
    RadialProfile p;
    p.kind_ = Kind::Indicator;
    p.p1_ = theta;
    p.p2_ = radius;
    return p;
}

RadialProfile RadialProfile::exp_decay(double amplitude, double rate) {
    if (amplitude < 0 || rate <= 0) throw InvalidRatesError("exp profile needs amplitude >= 0, rate > 0");
    RadialProfile p;
    p.kind_ = Kind::ExpDecay;
    p.p1_ = amplitude;
    p.p2_ = rate;
    return p;
}

RadialProfile RadialProfile::tabulated(std::vector<double> r, std::vector<double> phi) {
    if (r.size() != phi.size() || r.size() < 2)
        throw InvalidRatesError("tabulated profile needs matching r/phi arrays of length >= 2");
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
        if (r[i + 1] <= r[i]) throw InvalidRatesError("tabulated radii must increase");
    for (double v : phi)
        if (v < 0) throw InvalidRatesError("profile values must be nonnegative");
    RadialProfile p;
    p.kind_ = Kind::Tabulated;
    p.tab_r_ = std::move(r);
    p.tab_phi_ = std::move(phi);
    return p;
}

double RadialProfile::operator()(double r) const {
    r = std::abs(r);
    switch (kind_) {
        case Kind::Indicator:
            return r <= p2_ ? p1_ : 0.0;
        case Kind::ExpDecay:
            return p1_ * std::exp(-p2_ * r);
        case Kind::Tabulated: {
            if (r >= tab_r_.back()) return 0.0;
            if (r <= tab_r_.front()) return tab_phi_.front();
            auto it = std::upper_bound(tab_r_.begin(), tab_r_.end(), r);
            std::size_t i = static_cast<std::size_t>(it - tab_r_.begin()) - 1;
            double t = (r - tab_r_[i]) / (tab_r_[i + 1] - tab_r_[i]);
            return tab_phi_[i] + t * (tab_phi_[i + 1] - tab_phi_[i]);
        }
    }
    return 0.0;
}

double RadialProfile::support_radius() const {
    switch (kind_) {
        case Kind::Indicator:
            return p2_;
        case Kind::ExpDecay:
            return std::numeric_limits<double>::infinity();
        case Kind::Tabulated:
            return tab_r_.back();
    }
    return 0.0;
}

std::vector<double> RadialProfile::breakpoints() const {
    switch (kind_) {
        case Kind::Indicator:
            return {p2_};
        case Kind::ExpDecay:
            return {};
        case Kind::Tabulated:
            return tab_r_;
    }
    return {};
}

void RadialProfile::tail(double& amplitude, double& rate) const {
    if (kind_ == Kind::ExpDecay) {
        amplitude = p1_;
        rate = p2_;
    } else {
        amplitude = 0.0;  // compact support, no tail
        rate = 1.0;
    }
}

void OccupationKernel::set(const std::vector<int>& dx, double v) {
    bool zero_disp = true;
    for (int c : dx) zero_disp = zero_disp && c == 0;
    if (zero_disp) {
        if (v != 0.0) throw InvalidRatesError("occupation kernel requires K(0) = 0");
        return;
    }
    if (v < 0) throw InvalidRatesError("occupation kernel must be nonnegative");
    std::vector<int> neg(dx.size());
    for (std::size_t i = 0; i < dx.size(); ++i) neg[i] = -dx[i];
    values[dx] = v;
    values[neg] = v;
}

double OccupationKernel::at(const std::vector<int>& dx) const {
    auto it = values.find(dx);
    return it == values.end() ? 0.0 : it->second;
}

double OccupationKernel::total() const {
    double t = 0;
    for (const auto& [k, v] : values) t += v;
    return t;
}

OccupationKernel OccupationKernel::nn(double kappa, int dim) {
    OccupationKernel k;
    k.dim = dim;
    for (int axis = 0; axis < dim; ++axis) {
        std::vector<int> dx(dim, 0);
        dx[axis] = 1;
        k.set(dx, kappa);
    }
    return k;
}

OccupationKernel OccupationKernel::from_profile(const RadialProfile& phi, double h, int dim,
                                                double box_len) {
    OccupationKernel k;
    k.dim = dim;
    int reach = static_cast<int>(std::ceil(box_len / h)) + 1;
    if (dim != 1) throw InvalidRatesError("grid kernels are built for dim = 1");
    for (int j = 1; j <= reach; ++j) {
        double v = phi(j * h);
        if (v > 0) k.set({j}, v);
    }
    return k;
}

}  // namespace gaplab
