#pragma once

#include <map>
#include <string>
#include <vector>

#include "gaplab/generators.hpp"

namespace gaplab {

// A closed-form lower bound on a spectral gap, with its inputs and a
// self-describing formula string.
struct BoundReport {
    std::string name;
    double value = 0;
    bool vacuous = false;      // value <= 0 carries no information
    bool applicable = true;    // false: requested for a model of the wrong shape
    std::map<std::string, double> inputs;
    std::string formula;
};

BoundReport make_bound(std::string name, double value, std::map<std::string, double> inputs,
                       std::string formula);

// high-temperature exchange bound: with eps = beta * norm,
// k(beta) = 1/2 - e^eps (e^eps - 1) - 4 beta e^{5 eps} * triple_norm and the
// reported gap bound is 2 k(beta)
double kawasaki_k(double beta, double phi_norm, double phi_triple_norm);
BoundReport kawasaki_bound(double beta, double phi_norm, double phi_triple_norm);

// largest beta with 2 k(beta) >= lambda_target, by bisection to 1e-8;
// +infinity for the zero potential (the bound is 1 for every beta)
double beta_lambda(double lambda_target, double phi_norm, double phi_triple_norm);

// every applicable closed form for a zero-range model: uniform rate-increment
// bound (H = 0), the state-minimized quadratic form, its uniform (a, b, K)
// coarsening, the torus display, and the increment-ratio bound at lambda = 0
std::vector<BoundReport> zero_range_bounds(const ZeroRangeModel& model);

// sum_z (1 - exp(-beta K(z))) over the kernel support
double glauber_eps_kernel(const OccupationKernel& kernel, double beta);
// sup over sites and over occupancies in {0..box_cap}^n of the birth-rate
// weighted second-difference sum; finite surrogate for general pair tables
double glauber_eps_table(const OccupationTable& table, const SiteSet& sites, double beta, int box_cap);
BoundReport glauber_bound(double lambda, double eps);

// d-dimensional radial integral of (1 - exp(-beta phi(|x|))) via adaptive
// quadrature with a certified tail bound
struct QuadratureSpec {
    int dim = 1;
    double abs_tol = 1e-10;
    double max_cutoff = 1e6;
};
double continuum_eps(const RadialProfile& profile, double beta, const QuadratureSpec& spec);

// conservative continuum bounds from eps(beta): the density form
// 1 - 3 (N-1) eps / |Lambda| and its (eps1, eps2) split
std::vector<BoundReport> continuum_kawasaki_bounds(int N, double volume, double eps);
BoundReport continuum_glauber_bound(double z, double eps);

}  // namespace gaplab
