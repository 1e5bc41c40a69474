#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gaplab/statespace.hpp"

namespace gaplab {

// Reference to a site inside the volume or a boundary site carrying a fixed
// tau occupation.
struct SiteRef {
    bool boundary = false;
    int idx = 0;
};

// One interaction term: a finite support and a value table indexed by the
// occupation bits of the support (bit k = occupation of support[k]).
struct PotentialTerm {
    std::vector<SiteRef> support;
    std::vector<double> table;  // size 2^|support|
};

// Finite term list (Phi_A)_A over binary configurations.  No translation
// invariance is assumed; terms whose support misses the volume entirely are
// rejected at insertion.
class LatticePotential {
  public:
    void add_term(PotentialTerm term);

    double energy(const Configuration& eta, const SiteSet& sites) const;
    // energy difference under exchanging occupations at x and z, evaluated
    // via the terms meeting {x, z} only
    double grad_exchange(const Configuration& eta, const SiteSet& sites, int x, int z) const;

    // (|Phi|-norm, cardinality-weighted norm): sup over sites appearing in
    // any support of sum_{A ni x} sup|Phi_A| and sum_{A ni x} |A| sup|Phi_A|
    std::pair<double, double> norms() const;

    const std::vector<PotentialTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    int range() const;  // max support diameter in site-index distance, 0 if empty

    // pair potential J * eta_x eta_z on every adjacency edge of the site set
    static LatticePotential nn_pair(const SiteSet& sites, double coupling);

  private:
    double term_value(const PotentialTerm& t, const Configuration& eta, const SiteSet& sites) const;
    std::vector<PotentialTerm> terms_;
    std::vector<std::vector<int>> by_site_;  // volume site -> indices of terms touching it
};

// H(eta) = sum_{x,y} J_{x,y} eta_x eta_y over ordered pairs, J symmetric.
struct QuadraticEnergy {
    Eigen::MatrixXd J;

    explicit QuadraticEnergy(Eigen::MatrixXd j);
    QuadraticEnergy() = default;

    int n() const { return static_cast<int>(J.rows()); }
    bool zero() const;
    double energy(const Configuration& eta) const;
    // exact energy differences of the creation / annihilation maps
    double grad_birth(const Configuration& eta, int x) const;
    double grad_death(const Configuration& eta, int x) const;
    // constant second difference of two annihilations at distinct sites
    double second_diff_death(int x, int y) const { return 2.0 * J(x, y); }
};

// Radial pair profile phi(|x|) >= 0, even by construction.
class RadialProfile {
  public:
    enum class Kind { Indicator, ExpDecay, Tabulated };

    static RadialProfile indicator(double theta, double radius);
    static RadialProfile exp_decay(double amplitude, double rate);
    static RadialProfile tabulated(std::vector<double> r, std::vector<double> phi);

    double operator()(double r) const;
    Kind kind() const { return kind_; }
    // radius beyond which phi vanishes; infinity for exp decay
    double support_radius() const;
    // points where the integrand may be non-smooth (quadrature split points)
    std::vector<double> breakpoints() const;
    // parameters of a dominating tail phi(r) <= amp * exp(-rate r) for r >= r0
    void tail(double& amplitude, double& rate) const;

    double param1() const { return p1_; }
    double param2() const { return p2_; }

  private:
    Kind kind_ = Kind::Indicator;
    double p1_ = 0, p2_ = 0;  // indicator: theta, radius; exp: amplitude, rate
    std::vector<double> tab_r_, tab_phi_;
};

// Summable occupation-pair kernel K with K(0) = 0, K(-x) = K(x); interaction
// phi(x,y,m,n) = K(x-y) m n.
struct OccupationKernel {
    int dim = 1;
    std::map<std::vector<int>, double> values;  // finite support, canonical +/- entries

    void set(const std::vector<int>& dx, double v);
    double at(const std::vector<int>& dx) const;
    double total() const;  // sum over the support
    bool empty() const { return values.empty(); }

    static OccupationKernel nn(double kappa, int dim = 1);
    static OccupationKernel from_profile(const RadialProfile& phi, double h, int dim, double box_len);
};

// General symmetric pair table phi(x,y,m,n) with phi(x,x,.,.) = 0.
struct OccupationTable {
    std::function<double(int x, int y, int m, int n)> phi;
};

}  // namespace gaplab
