#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gaplab/common.hpp"

namespace gaplab {

// Finite ordered set of sites, either abstract labels or lattice points in
// Z^d.  `adjacency` is optional (nearest-neighbor dynamics and potentials);
// `boundary` carries sites outside the volume with fixed occupations tau.
struct SiteSet {
    int dim = 1;
    std::vector<std::vector<int>> coords;           // one coordinate vector per site
    std::vector<std::pair<int, int>> adjacency;     // unordered edges, x < z
    std::vector<std::vector<int>> boundary_coords;  // sites outside the volume
    std::vector<int> tau;                           // occupations of boundary sites
    bool periodic = false;
    int period = 0;  // linear size when periodic

    int n() const { return static_cast<int>(coords.size()); }

    // displacement between two sites (minimal image when periodic)
    std::vector<int> displacement(int x, int z) const;

    static SiteSet complete(int n);       // labels 0..n-1, no adjacency
    static SiteSet segment(int L);        // 1-d path
    static SiteSet ring(int L);           // 1-d periodic
    static SiteSet torus(int L, int d);   // (Z/LZ)^d, d in {1,2,3}
};

struct Configuration {
    std::vector<int> occ;

    bool operator==(const Configuration& o) const { return occ == o.occ; }
    int sum() const;
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const { return hash_ints(c.occ); }
};

enum class SpaceKind { FixedNBinary, FixedNComposition, TruncatedProduct };

// Ordered enumeration of all admissible configurations with a bidirectional
// index map.  Ordering is lexicographic on occupation vectors; immutable
// after construction.
class StateSpace {
  public:
    static constexpr std::size_t kDefaultCapacity = 200000;

    static StateSpace enumerate(SpaceKind kind, int n_sites, int n_or_m,
                                std::size_t capacity = kDefaultCapacity);

    SpaceKind kind() const { return kind_; }
    int n_sites() const { return n_sites_; }
    int param() const { return param_; }  // N for fixed-N kinds, M for truncated
    int size() const { return static_cast<int>(configs_.size()); }

    const Configuration& config(int i) const { return configs_[i]; }
    const std::vector<Configuration>& configs() const { return configs_; }

    // position of a configuration; -1 if not in the space
    int index_of(const Configuration& c) const;

  private:
    SpaceKind kind_;
    int n_sites_ = 0;
    int param_ = 0;
    std::vector<Configuration> configs_;
    std::unordered_map<Configuration, int, ConfigurationHash> index_;
};

// expected state counts (throws CapacityError when above cap)
std::size_t state_count(SpaceKind kind, int n_sites, int n_or_m, std::size_t capacity);

// Elementary moves.  apply_exchange swaps two occupation numbers; apply_move
// displaces one particle with the convention eta^{xz} = eta when eta_x = 0 or
// x = z; apply_birth signals saturation at the truncation cap; apply_death is
// the total decrement map.
Configuration apply_exchange(const Configuration& eta, int x, int z);
Configuration apply_move(const Configuration& eta, int x, int z);
std::optional<Configuration> apply_birth(const Configuration& eta, int x, int cap);
Configuration apply_death(const Configuration& eta, int x);

}  // namespace gaplab
