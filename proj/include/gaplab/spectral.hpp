#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <vector>

#include "gaplab/generators.hpp"

namespace gaplab {

struct SpectralResult {
    double gap = 0;
    Eigen::VectorXd gap_eigenvector;   // in L^2(nu) coordinates (f, not sqrt(nu) f)
    std::vector<double> spectrum_head; // k smallest eigenvalues of -L, including 0
    std::string method;                // "dense" | "iterative"
    double eigen_residual = 0;         // ||A v - lambda v|| / ||v|| for the gap pair
    double zero_mode_residual = 0;     // |smallest eigenvalue| (dense path)
};

enum class EigenMethod { Auto, Dense, Iterative };

struct SolverSettings {
    int dense_cap = 4000;
    double iterative_tol = 1e-10;
    int max_lanczos_iters = 200000;
    std::uint64_t seed = 1u;
};

// similarity transform D_nu^{1/2} (-L) D_nu^{-1/2}, explicitly symmetrized;
// refuses when detailed balance fails
Eigen::MatrixXd symmetrized_dense(const ReversibleGenerator& gen, double db_tol = 1e-9);
Eigen::SparseMatrix<double, Eigen::RowMajor> symmetrized_sparse(const ReversibleGenerator& gen,
                                                                double db_tol = 1e-9);

SpectralResult spectral_gap(const ReversibleGenerator& gen, EigenMethod method = EigenMethod::Auto,
                            const SolverSettings& settings = {}, int head = 6);

// E(f,f) = nu[f (-L f)], cross-checked against the half-sum of squared
// gradients over jumps
double dirichlet_form(const ReversibleGenerator& gen, const Eigen::VectorXd& f);
double variance(const ReversibleGenerator& gen, const Eigen::VectorXd& f);
double nu_mean(const ReversibleGenerator& gen, const Eigen::VectorXd& f);

// max over random f of the (relative) violation of gap * E(f,f) <= nu[(Lf)^2];
// also checks equality at the gap eigenvector
struct BakryEmeryReport {
    double max_violation = 0;       // positive part of gap*E - nu[(Lf)^2], scaled
    double eigvec_equality_err = 0; // |gap*E(v,v) - nu[(Lv)^2]| scaled
};
BakryEmeryReport bakry_emery_check(const ReversibleGenerator& gen, const SpectralResult& spec,
                                   int n_random_f, std::uint64_t seed);

}  // namespace gaplab
