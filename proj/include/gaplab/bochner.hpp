#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "gaplab/generators.hpp"

namespace gaplab {

// Density r(eta, gamma, delta) of the measure R with respect to
// nu(d eta) c(eta, d gamma) c(eta, d delta), evaluated on move-set indices of
// a fixed generator.  r vanishes outside the commuting-move support.
struct RKernel {
    std::function<double(int state, int move_a, int move_b)> r;
    std::string model_tag;
};

// exchange dynamics: r = [1 + c(eta^gamma, delta)/c(eta, delta)]/2 on pairs
// of exchanges with disjoint supports, 0 otherwise (covers complete-graph and
// nearest-neighbor Kawasaki)
RKernel r_kawasaki(const ReversibleGenerator& gen);

// zero-range dynamics: r = c_y(eta^{x-}) / c_y(eta), independent of targets
RKernel r_zero_range(const ZeroRangeModel& model);

// birth-death dynamics: birth-birth rate ratios, death-death table, mixed 1
RKernel r_glauber(const GlauberModel& model);

// discretized continuum conservative dynamics: r = exp(-beta phi(z - v)) on
// move pairs (u->z), (y->v) with {u,z} and {y,v} disjoint, 0 otherwise; the
// disjointness keeps the commutation and change-of-variable identities exact
// on the finite grid, where target collisions are no longer null events
RKernel r_move_kawasaki(const MoveKawasakiModel& model);

// Cached triple weights w(s,a,b) = nu_s c(s,a) c(s,b) r(s,a,b).
class KernelWeights {
  public:
    KernelWeights(const ReversibleGenerator& gen, const RKernel& kernel,
                  std::size_t max_entries = 50000000);

    double w(int s, int a, int b) const {
        return w_[(static_cast<std::size_t>(s) * M_ + a) * M_ + b];
    }
    double total_mass() const { return mass_; }
    const ReversibleGenerator& gen() const { return *gen_; }

  private:
    const ReversibleGenerator* gen_;
    std::size_t M_;
    std::vector<double> w_;
    double mass_ = 0;
};

struct AxiomResiduals {
    double a2_violations = 0;  // count of commutation failures on the support
    double a3 = 0;
    double a4 = 0;
};

// A2 exactly on the support of R; A3/A4 as integral invariance over
// n_random_F hashed test functions on (state, move, move) triples.  Residuals
// are relative to max(|lhs|, |rhs|, total R mass).
AxiomResiduals verify_axioms(const ReversibleGenerator& gen, const RKernel& kernel, int n_random_F,
                             std::uint64_t seed);
AxiomResiduals verify_axioms(const KernelWeights& weights, const RKernel& kernel, int n_random_F,
                             std::uint64_t seed);

struct IdentityReport {
    double lhs = 0;
    double rhs = 0;
    double rel_error = 0;
    std::string instance;
    std::uint64_t seed = 0;
};

// int [grad_gamma grad_delta f]^2 dR  vs  4 int grad_gamma f grad_delta f dR
IdentityReport check_bochner_identity(const KernelWeights& weights, const Eigen::VectorXd& f,
                                      const std::string& instance = "", std::uint64_t seed = 0);

// nu[(Lf)^2] - (1/4) int [grad grad f]^2 dR  vs  the (1-r) cross form
IdentityReport check_corollary1(const KernelWeights& weights, const Eigen::VectorXd& f,
                                const std::string& instance = "", std::uint64_t seed = 0);

// Smallest generalized eigenvalue k* of the pair
//   Q(f) = sum nu c c (1-r) grad_gamma f grad_delta f
//   D(f) = sum nu c (grad_gamma f)^2            (D = 2 E)
// restricted to the complement of constants in L^2(nu); the exact gap
// dominates 2 k* whenever k* > 0.
double certified_k(const KernelWeights& weights, int dense_cap = 2000);

struct MMatrixBounds {
    double teom_delta = 0;  // min over states of the smallest restricted eigenvalue of M(eta)
    double cobound = 0;     // diagonal-domination coarsening
};

// M_{x,y}(eta) = n sqrt(c_x c_y) (1 - r_{x,y}(eta)) on occupied coordinates
MMatrixBounds m_matrix_bound(const ZeroRangeModel& model);

}  // namespace gaplab
