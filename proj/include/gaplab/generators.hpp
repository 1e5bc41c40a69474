#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/potentials.hpp"
#include "gaplab/statespace.hpp"

namespace gaplab {

enum class MoveKind : std::uint8_t { Exchange, Move, Birth, Death };

// Exchange labels are unordered pairs (stored x < z), move labels are ordered
// pairs, birth/death carry one site.
struct MoveLabel {
    MoveKind kind;
    int x = 0;
    int z = -1;

    bool operator==(const MoveLabel& o) const { return kind == o.kind && x == o.x && z == o.z; }
};

std::string to_string(const MoveLabel& m);

// Sparse rate matrix over a StateSpace together with its stationary Gibbs
// weights and the full move structure: for every state, the rate and target
// of every move of the global move set G.  Moves acting as the identity at a
// state keep their rate (they matter for the Bochner triple sums) but do not
// enter the matrix.  Immutable after assembly.
class ReversibleGenerator {
  public:
    std::shared_ptr<const StateSpace> space;
    std::vector<MoveLabel> move_set;
    std::vector<std::int32_t> inverse_move;  // index of gamma^{-1} within move_set
    Eigen::VectorXd nu;
    Eigen::SparseMatrix<double, Eigen::RowMajor> L;  // diagonal = -row sum
    std::string model_tag;
    int n_sites = 0;

    int states() const { return space ? space->size() : 0; }
    int moves() const { return static_cast<int>(move_set.size()); }

    double rate(int s, int m) const { return rate_[static_cast<std::size_t>(s) * move_set.size() + m]; }
    int target(int s, int m) const { return target_[static_cast<std::size_t>(s) * move_set.size() + m]; }

    // apply a move label to a raw configuration (birth uses the space cap,
    // saturating to the identity)
    Configuration apply(const Configuration& eta, const MoveLabel& m) const;

    Eigen::VectorXd apply_L(const Eigen::VectorXd& f) const { return L * f; }

    static ReversibleGenerator assemble(
        std::shared_ptr<const StateSpace> space, std::vector<MoveLabel> move_set,
        const std::function<double(int state, const MoveLabel&)>& rate_fn,
        const std::function<double(const Configuration&)>& logweight_fn, std::string tag,
        int n_sites);

    // mutate one directed rate (test fixtures only: fault injection)
    void corrupt_rate(int s, int m, double factor);

  private:
    std::vector<double> rate_;
    std::vector<std::int32_t> target_;
    void rebuild_matrix();
};

// max over state pairs of |nu_i r_ij - nu_j r_ji| / max(nu_i r_ij, nu_j r_ji)
double check_detailed_balance(const ReversibleGenerator& gen);

// ---------------------------------------------------------------------------
// model families
// ---------------------------------------------------------------------------

struct KawasakiModel {
    ReversibleGenerator gen;
    SiteSet sites;
    LatticePotential potential;
    double beta = 0;
    bool complete = true;
};

// per-site jump rates g_x with g_x(0) = 0 and inf_{k>=1} g_x(k) >= 1
struct RateFamily {
    std::string name;
    std::function<double(int site, int k)> g;

    static RateFamily linear();       // g(k) = k
    static RateFamily constant();     // g(k) = 1 for k >= 1
    static RateFamily exponential();  // g(k) = e^k
};

struct UnoShape {
    bool valid = false;
    double lambda = 0;  // on-site coefficient
    double beta = 0;    // pair coefficient of the torus display (J_offdiag = beta/2)
    int d = 1;
};

struct ZeroRangeModel {
    ReversibleGenerator gen;
    SiteSet sites;
    RateFamily rates;
    QuadraticEnergy energy;
    UnoShape uno;

    // c_x(eta) = (1/n) g_x(eta_x) exp(-grad_death H); valid for configurations
    // off the enumerated space as well (the R kernel needs eta^{x-})
    double c(const Configuration& eta, int x) const;
};

struct GlauberModel {
    ReversibleGenerator gen;
    SiteSet sites;
    double lambda = 1.0;
    double beta = 0;
    OccupationKernel kernel;                // kernel form K(x-y) m n
    std::optional<OccupationTable> table;   // general pair table alternative
    int cap = 0;

    double logweight(const Configuration& eta) const;
};

// lattice discretization of the continuum conservative dynamics: N particles
// on grid cells, a particle at cell u moves to cell v with rate
// (eta_u / n) exp(-beta sum_w (eta - e_u)_w phi(c_w - c_v))
struct MoveKawasakiModel {
    ReversibleGenerator gen;
    Eigen::MatrixXd phi_cells;  // phi at inter-cell displacements, diagonal phi(0)
    double beta = 0;
    int ncells = 0;
    int N = 0;
    double h = 0;
    double volume = 0;

    double insertion_energy(const Configuration& eta, int v) const;
};

KawasakiModel build_kawasaki_complete(const SiteSet& sites, LatticePotential potential, double beta,
                                      int N, std::size_t capacity = StateSpace::kDefaultCapacity);
KawasakiModel build_kawasaki_nn(const SiteSet& sites, LatticePotential potential, double beta, int N,
                                std::size_t capacity = StateSpace::kDefaultCapacity);
ZeroRangeModel build_zero_range(const SiteSet& sites, RateFamily rates, QuadraticEnergy energy, int N,
                                std::size_t capacity = StateSpace::kDefaultCapacity);
// quadratic energy of the torus display: J_xx = lambda, J_xy = beta/2 on
// nearest-neighbor pairs of (Z/LZ)^d
ZeroRangeModel build_zero_range_uno(int L, int d, double lambda, double beta, RateFamily rates, int N,
                                    std::size_t capacity = StateSpace::kDefaultCapacity);
GlauberModel build_glauber_discrete(const SiteSet& sites, double lambda, OccupationKernel kernel,
                                    double beta, int M,
                                    std::size_t capacity = StateSpace::kDefaultCapacity);
GlauberModel build_glauber_discrete_table(const SiteSet& sites, double lambda, OccupationTable table,
                                          double beta, int M,
                                          std::size_t capacity = StateSpace::kDefaultCapacity);
MoveKawasakiModel build_continuum_kawasaki_discretized(double box_len, const RadialProfile& phi,
                                                       double beta, int N, double h,
                                                       std::size_t capacity = StateSpace::kDefaultCapacity);
GlauberModel build_continuum_glauber_discretized(double box_len, const RadialProfile& phi, double beta,
                                                 double z, double h, int M,
                                                 std::size_t capacity = StateSpace::kDefaultCapacity);

}  // namespace gaplab
