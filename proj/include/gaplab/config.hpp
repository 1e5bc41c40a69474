#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/bochner.hpp"
#include "gaplab/bounds.hpp"
#include "gaplab/generators.hpp"

namespace gaplab {

// Minimal INI-style config: [section] headers, key = value lines, '#'
// comments.  Repeated keys are kept in order (term lists, grids).
struct IniEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct IniSection {
    std::string name;
    std::vector<IniEntry> entries;
    int line = 0;
};

class Ini {
  public:
    static Ini parse_file(const std::string& path);
    static Ini parse_string(const std::string& text, const std::string& origin = "<string>");

    const IniSection* find(const std::string& name) const;
    bool has(const std::string& section, const std::string& key) const;

    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key) const;
    int get_int_or(const std::string& section, const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;
    std::vector<std::string> get_words(const std::string& section, const std::string& key) const;
    std::vector<const IniEntry*> all(const std::string& section, const std::string& key) const;

    // normalized text: sections and keys sorted, single-space separators
    std::string canonical() const;
    std::uint64_t hash() const;

    const std::vector<IniSection>& sections() const { return sections_; }
    const std::string& origin() const { return origin_; }

  private:
    std::vector<IniSection> sections_;
    std::string origin_;
    [[noreturn]] void fail(const std::string& what, const std::string& section,
                           const std::string& key) const;
};

struct Tolerances {
    double identity = 1e-10;
    double axiom = 1e-11;
    double detailed_balance = 1e-12;
    double eigen_residual = 1e-8;
};

struct ExperimentConfig {
    Ini ini;
    std::string kind;
    std::vector<std::string> tasks;
    SolverSettings solver;
    int certified_k_cap = 2000;
    Tolerances tol;
    std::uint64_t seed = 1;
    int n_random_f = 100;
    int n_random_F = 200;
    std::size_t state_capacity = StateSpace::kDefaultCapacity;
    QuadratureSpec quad;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig from_ini(Ini ini);
    std::string hash_hex() const;
};

// One built model with its kernel and closed-form bounds.
struct ModelBundle {
    std::string kind;
    std::optional<KawasakiModel> kawasaki;
    std::optional<ZeroRangeModel> zero_range;
    std::optional<GlauberModel> glauber;
    std::optional<MoveKawasakiModel> move_kawasaki;

    // continuum metadata (bounds use the continuum integral, not the grid)
    double box = 0, h = 0, z = 0, beta = 0;
    std::optional<RadialProfile> profile;

    const ReversibleGenerator& gen() const;
    ReversibleGenerator& mutable_gen();
    RKernel kernel() const;
    // closed-form bound chain proven for the assembled finite chain itself
    // (continuum-limit and truncated forms are reported, not hard-asserted)
    bool exact_chain() const;
    std::vector<BoundReport> closed_form_bounds(const QuadratureSpec& quad) const;
};

// Overrides applied at a sweep grid point.
struct PointOverride {
    std::optional<double> beta;
    std::optional<int> n;
    std::optional<int> L;
    std::optional<int> N;
    std::optional<int> M;
    std::optional<double> h;
    std::string label() const;
};

ModelBundle build_model(const ExperimentConfig& cfg, const PointOverride& pt = {});

}  // namespace gaplab
