#include "gaplab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace gaplab {

BoundReport make_bound(std::string name, double value, std::map<std::string, double> inputs,
                       std::string formula) {
    BoundReport b;
    b.name = std::move(name);
    if (!std::isfinite(value)) value = -std::numeric_limits<double>::max();
    b.value = value;
    b.vacuous = value <= 0.0;
    b.inputs = std::move(inputs);
    b.formula = std::move(formula);
    return b;
}

double kawasaki_k(double beta, double phi_norm, double phi_triple_norm) {
    // long double keeps huge exponentials from overflowing before the sign
    // of k is settled
    long double eps = static_cast<long double>(beta) * phi_norm;
    long double e = std::exp(eps);
    long double k = 0.5L - e * (e - 1.0L) - 4.0L * beta * std::exp(5.0L * eps) * phi_triple_norm;
    if (!std::isfinite(static_cast<double>(k))) return -std::numeric_limits<double>::max();
    return static_cast<double>(k);
}

BoundReport kawasaki_bound(double beta, double phi_norm, double phi_triple_norm) {
    double k = kawasaki_k(beta, phi_norm, phi_triple_norm);
    return make_bound("kawasaki_high_temperature", 2.0 * k,
                      {{"beta", beta},
                       {"phi_norm", phi_norm},
                       {"phi_triple_norm", phi_triple_norm},
                       {"k", k}},
                      "2 * (1/2 - e^eps (e^eps - 1) - 4 beta e^{5 eps} |||Phi|||), eps = beta ||Phi||");
}

double beta_lambda(double lambda_target, double phi_norm, double phi_triple_norm) {
    if (lambda_target >= 1.0 || lambda_target <= 0.0)
        throw InfeasibleError("beta_lambda needs 0 < lambda < 1; the bound cannot exceed 1");
    if (phi_norm == 0.0 && phi_triple_norm == 0.0)
        return std::numeric_limits<double>::infinity();  // free dynamics, bound is 1 for all beta

    auto val = [&](double b) { return 2.0 * kawasaki_k(b, phi_norm, phi_triple_norm); };
    // k is strictly decreasing in beta for a nonzero potential
    double lo = 0.0, hi = 1.0;
    while (val(hi) >= lambda_target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw DivergenceError("beta_lambda bracket failed to close");
    }
    if (val(lo) < lambda_target) throw InfeasibleError("beta_lambda: target not attained at beta = 0");
    while (hi - lo > 1e-8) {
        double mid = 0.5 * (lo + hi);
        (val(mid) >= lambda_target ? lo : hi) = mid;
    }
    return lo;
}

std::vector<BoundReport> zero_range_bounds(const ZeroRangeModel& model) {
    std::vector<BoundReport> out;
    const ReversibleGenerator& gen = model.gen;
    const int n = gen.n_sites;
    const int N = gen.space->param();
    const auto& g = model.rates.g;
    const bool has_energy = model.energy.J.size() != 0 && !model.energy.zero();

    bool nondecreasing = true;
    double min_increment = std::numeric_limits<double>::infinity();
    for (int x = 0; x < n; ++x) {
        for (int k = 0; k < N; ++k) {
            double inc = g(x, k + 1) - g(x, k);
            min_increment = std::min(min_increment, inc);
            if (inc < 0) nondecreasing = false;
        }
    }

    if (!has_energy) {
        out.push_back(make_bound("uniform_rate_increment", min_increment, {{"delta", min_increment}},
                                 "min_{x,k} [g_x(k+1) - g_x(k)]"));
        return out;
    }

    const Eigen::MatrixXd& J = model.energy.J;

    // state-minimized closed form of the quadratic case; the annihilation
    // differences of H(eta) = sum_{x,y} J_xy eta_x eta_y give the 2J factors
    double jb = std::numeric_limits<double>::infinity();
    for (int s = 0; s < gen.states(); ++s) {
        const Configuration& eta = gen.space->config(s);
        for (int x = 0; x < n; ++x) {
            if (eta.occ[x] == 0) continue;
            double sumJ = 0;
            for (int z = 0; z < n; ++z) sumJ += J(x, z) * eta.occ[z];
            double pref = std::exp(2.0 * sumJ - J(x, x));
            double epsx = 0;
            for (int y = 0; y < n; ++y)
                if (y != x) epsx += std::abs(1.0 - std::exp(-2.0 * J(x, y)));
            double gk = g(x, eta.occ[x]);
            double gkm = eta.occ[x] >= 1 ? g(x, eta.occ[x] - 1) : 0.0;
            jb = std::min(jb, pref * (gk - gkm * std::exp(-2.0 * J(x, x)) - gk * epsx));
        }
    }
    out.push_back(make_bound(
        "quadratic_state_minimum", jb, {},
        "min_{eta,x} e^{2 sum_z J_xz eta_z - J_xx} [g - g^- e^{-2 J_xx} - g eps_x]"));

    bool j_nonneg = J.minCoeff() >= 0.0;
    if (j_nonneg && nondecreasing) {
        double a = std::numeric_limits<double>::infinity();
        double b = 0;
        int K = 0;
        for (int x = 0; x < n; ++x) {
            a = std::min(a, J(x, x));
            int cnt = 0;
            for (int y = 0; y < n; ++y) {
                if (y == x) continue;
                b = std::max(b, J(x, y));
                if (J(x, y) != 0.0) ++cnt;
            }
            K = std::max(K, cnt);
        }
        double val = std::exp(a) * (1.0 - std::exp(-a) - K * (1.0 - std::exp(-b)));
        out.push_back(make_bound("uniform_quadratic", val,
                                 {{"a", a}, {"b", b}, {"K", static_cast<double>(K)}},
                                 "e^a [1 - e^{-a} - K (1 - e^{-b})]"));
    } else {
        BoundReport na;
        na.name = "uniform_quadratic";
        na.applicable = false;
        na.formula = "needs J >= 0 and nondecreasing rates";
        out.push_back(na);
    }

    if (model.uno.valid) {
        double lam = model.uno.lambda;
        double bet = model.uno.beta;
        int d = model.uno.d;
        if (lam > 0) {
            double val = std::exp(lam) * (1.0 - std::exp(-lam) - 2.0 * d * (1.0 - std::exp(-bet)));
            out.push_back(make_bound("torus_quadratic", val,
                                     {{"lambda", lam}, {"beta", bet}, {"d", static_cast<double>(d)}},
                                     "e^lambda [1 - e^{-lambda} - 2d (1 - e^{-beta})]"));
        } else {
            // increment-ratio bound for the massless torus case
            double epsN = std::numeric_limits<double>::infinity();
            for (int x = 0; x < n; ++x)
                for (int k = 1; k <= N; ++k) epsN = std::min(epsN, (g(x, k) - g(x, k - 1)) / g(x, k));
            double val = epsN - 2.0 * d * (1.0 - std::exp(-bet / 2.0));
            out.push_back(make_bound("increment_ratio", val,
                                     {{"eps_N", epsN}, {"beta", bet}, {"d", static_cast<double>(d)}},
                                     "eps(N) - 2d (1 - e^{-beta/2})"));
        }
    } else {
        BoundReport na;
        na.name = "torus_quadratic";
        na.applicable = false;
        na.formula = "needs the torus-shaped quadratic energy";
        out.push_back(na);
    }
    return out;
}

double glauber_eps_kernel(const OccupationKernel& kernel, double beta) {
    double eps = 0;
    for (const auto& [dx, v] : kernel.values) eps += 1.0 - std::exp(-beta * v);
    return eps;
}

double glauber_eps_table(const OccupationTable& table, const SiteSet& sites, double beta,
                         int box_cap) {
    const int n = sites.n();
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) {
        count *= static_cast<std::size_t>(box_cap) + 1;
        if (count > 2000000) throw CapacityError("occupancy box too large for the table sup");
    }
    auto pair_grad_z = [&](const std::vector<int>& occ, int z) {
        // sum_y [phi(z,y,occ_z+1,occ_y) - phi(z,y,occ_z,occ_y)]
        double s = 0;
        for (int y = 0; y < n; ++y) {
            if (y == z) continue;
            s += table.phi(z, y, occ[z] + 1, occ[y]) - table.phi(z, y, occ[z], occ[y]);
        }
        return s;
    };
    double sup = 0;
    std::vector<int> occ(n, 0);
    for (std::size_t it = 0; it < count; ++it) {
        std::size_t t = it;
        for (int i = 0; i < n; ++i) {
            occ[i] = static_cast<int>(t % (box_cap + 1));
            t /= box_cap + 1;
        }
        for (int x = 0; x < n; ++x) {
            double total = 0;
            for (int z = 0; z < n; ++z) {
                double w = std::exp(-beta * pair_grad_z(occ, z));
                double d2 = (table.phi(z, x, occ[z] + 1, occ[x] + 1) - table.phi(z, x, occ[z], occ[x] + 1)) -
                            (table.phi(z, x, occ[z] + 1, occ[x]) - table.phi(z, x, occ[z], occ[x]));
                total += w * std::abs(1.0 - std::exp(-beta * d2));
            }
            sup = std::max(sup, total);
        }
    }
    return sup;
}

BoundReport glauber_bound(double lambda, double eps) {
    return make_bound("glauber_kernel", 1.0 - lambda * eps, {{"lambda", lambda}, {"eps", eps}},
                      "1 - lambda eps(beta)");
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double sphere_surface(int d) {
    switch (d) {
        case 1:
            return 2.0;
        case 2:
            return 2.0 * kPi;
        case 3:
            return 4.0 * kPi;
        default:
            throw InfeasibleError("radial quadrature supports d in {1,2,3}");
    }
}

struct Simpson {
    const std::function<double(double)>& f;
    int max_depth = 60;

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) const {
        double m = 0.5 * (a + b);
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = f(lm), frm = f(rm);
        double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        double delta = left + right - whole;
        if (depth >= max_depth) return left + right + delta / 15.0;
        if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }

    double integrate(double a, double b, double tol) const {
        if (b <= a) return 0.0;
        double m = 0.5 * (a + b);
        double fa = f(a), fm = f(m), fb = f(b);
        double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(a, b, fa, fm, fb, whole, tol, 0);
    }
};

}  // namespace

double continuum_eps(const RadialProfile& profile, double beta, const QuadratureSpec& spec) {
    if (beta < 0) throw InfeasibleError("eps(beta) needs beta >= 0");
    double surf = sphere_surface(spec.dim);
    std::function<double(double)> integrand = [&](double r) {
        return -std::expm1(-beta * profile(r)) * std::pow(r, spec.dim - 1);
    };

    double cutoff = profile.support_radius();
    double tail = 0;
    double tol = spec.abs_tol / std::max(surf, 1.0);
    if (!std::isfinite(cutoff)) {
        // exp-decay dominating tail: 1 - e^{-beta phi} <= beta * amp * e^{-rate r}
        double amp, rate;
        profile.tail(amp, rate);
        cutoff = 1.0;
        auto tail_integral = [&](double R) {
            double poly = 0;
            switch (spec.dim) {
                case 1:
                    poly = 1.0 / rate;
                    break;
                case 2:
                    poly = R / rate + 1.0 / (rate * rate);
                    break;
                case 3:
                    poly = R * R / rate + 2.0 * R / (rate * rate) + 2.0 / (rate * rate * rate);
                    break;
            }
            return beta * amp * std::exp(-rate * R) * poly;
        };
        while (tail_integral(cutoff) > 0.5 * tol) {
            cutoff *= 2.0;
            if (cutoff > spec.max_cutoff)
                throw DivergenceError("radial tail does not shrink below tolerance; eps diverges");
        }
        tail = tail_integral(cutoff);
        tol *= 0.5;
    }

    // split at the profile's non-smooth points
    std::vector<double> cuts = {0.0};
    for (double b : profile.breakpoints())
        if (b > 0 && b < cutoff) cuts.push_back(b);
    cuts.push_back(cutoff);
    std::sort(cuts.begin(), cuts.end());

    Simpson simp{integrand};
    double total = 0;
    double seg_tol = tol / std::max<std::size_t>(cuts.size() - 1, 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += simp.integrate(cuts[i], cuts[i + 1], seg_tol);
    return surf * (total + tail);
}

std::vector<BoundReport> continuum_kawasaki_bounds(int N, double volume, double eps) {
    double dens = 3.0 * (N - 1) * eps / volume;
    double eps1 = (N - 1) * eps / volume;
    double eps2 = 2.0 * (N - 1) * eps / volume;
    std::vector<BoundReport> out;
    out.push_back(make_bound("continuum_density", 1.0 - dens,
                             {{"N", static_cast<double>(N)}, {"volume", volume}, {"eps", eps}},
                             "1 - 3 (N-1) eps / |Lambda|"));
    out.push_back(make_bound("continuum_pair", 1.0 - eps1 - eps2,
                             {{"eps1_upper", eps1}, {"eps2_upper", eps2}},
                             "1 - eps1 - eps2, eps1 <= (N-1) eps/|Lambda|, eps2 <= 2 (N-1) eps/|Lambda|"));
    return out;
}

BoundReport continuum_glauber_bound(double z, double eps) {
    return make_bound("continuum_glauber", 1.0 - z * eps, {{"z", z}, {"eps", eps}},
                      "1 - z eps(beta)");
}

}  // namespace gaplab
