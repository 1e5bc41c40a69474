#include "gaplab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace gaplab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string squeeze(const std::string& s) {
    std::string out;
    bool space = false;
    for (char c : trim(s)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = true;
            continue;
        }
        if (space && !out.empty()) out.push_back(' ');
        space = false;
        out.push_back(c);
    }
    return out;
}

}  // namespace

Ini Ini::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

Ini Ini::parse_string(const std::string& text, const std::string& origin) {
    Ini ini;
    ini.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    IniSection* cur = nullptr;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            IniSection sec;
            sec.name = trim(t.substr(1, t.size() - 2));
            sec.line = lineno;
            if (sec.name.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            ini.sections_.push_back(std::move(sec));
            cur = &ini.sections_.back();
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        if (!cur)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any [section]");
        IniEntry e;
        e.key = trim(t.substr(0, eq));
        e.value = trim(t.substr(eq + 1));
        e.line = lineno;
        if (e.key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cur->entries.push_back(std::move(e));
    }
    return ini;
}

const IniSection* Ini::find(const std::string& name) const {
    for (const auto& s : sections_)
        if (s.name == name) return &s;
    return nullptr;
}

bool Ini::has(const std::string& section, const std::string& key) const {
    const IniSection* s = find(section);
    if (!s) return false;
    for (const auto& e : s->entries)
        if (e.key == key) return true;
    return false;
}

void Ini::fail(const std::string& what, const std::string& section, const std::string& key) const {
    throw ConfigError(origin_ + ": " + what + " for [" + section + "] " + key);
}

std::string Ini::get(const std::string& section, const std::string& key) const {
    const IniSection* s = find(section);
    if (!s) fail("missing section", section, key);
    for (const auto& e : s->entries)
        if (e.key == key) return e.value;
    fail("missing key", section, key);
}

std::string Ini::get_or(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double Ini::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail("not a number: '" + v + "'", section, key);
    }
}

double Ini::get_double_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

int Ini::get_int(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        int d = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail("not an integer: '" + v + "'", section, key);
    }
}

int Ini::get_int_or(const std::string& section, const std::string& key, int fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Ini::get_list(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(get(section, key));
    std::string tok;
    while (in >> tok) {
        std::replace(tok.begin(), tok.end(), ',', ' ');
        std::istringstream tin(tok);
        double v;
        while (tin >> v) out.push_back(v);
    }
    if (out.empty()) fail("empty list", section, key);
    return out;
}

std::vector<std::string> Ini::get_words(const std::string& section, const std::string& key) const {
    std::vector<std::string> out;
    std::istringstream in(get(section, key));
    std::string tok;
    while (in >> tok) {
        if (!tok.empty() && tok.back() == ',') tok.pop_back();
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

std::vector<const IniEntry*> Ini::all(const std::string& section, const std::string& key) const {
    std::vector<const IniEntry*> out;
    if (const IniSection* s = find(section))
        for (const auto& e : s->entries)
            if (e.key == key) out.push_back(&e);
    return out;
}

std::string Ini::canonical() const {
    std::vector<const IniSection*> secs;
    for (const auto& s : sections_) secs.push_back(&s);
    std::stable_sort(secs.begin(), secs.end(),
                     [](const IniSection* a, const IniSection* b) { return a->name < b->name; });
    std::string out;
    for (const IniSection* s : secs) {
        out += "[" + s->name + "]\n";
        std::vector<const IniEntry*> es;
        for (const auto& e : s->entries) es.push_back(&e);
        std::stable_sort(es.begin(), es.end(),
                         [](const IniEntry* a, const IniEntry* b) { return a->key < b->key; });
        for (const IniEntry* e : es) out += e->key + " = " + squeeze(e->value) + "\n";
    }
    return out;
}

std::uint64_t Ini::hash() const {
    std::string c = canonical();
    return fnv1a64(c.data(), c.size());
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    return from_ini(Ini::parse_file(path));
}

ExperimentConfig ExperimentConfig::from_ini(Ini ini) {
    ExperimentConfig cfg;
    cfg.ini = std::move(ini);
    const Ini& f = cfg.ini;
    cfg.kind = f.get("model", "kind");
    cfg.tasks = f.get_words("tasks", "run");
    if (cfg.tasks.empty()) throw ConfigError("config has an empty task list");
    for (const auto& t : cfg.tasks)
        if (t != "verify" && t != "gap" && t != "sweep" && t != "scaling")
            throw ConfigError("unknown task '" + t + "' (expected verify|gap|sweep|scaling)");
    cfg.solver.dense_cap = f.get_int_or("solver", "dense_cap", 4000);
    cfg.solver.iterative_tol = f.get_double_or("solver", "iterative_tol", 1e-10);
    cfg.certified_k_cap = f.get_int_or("solver", "certified_k_cap", 2000);
    cfg.tol.identity = f.get_double_or("tolerances", "identity", 1e-10);
    cfg.tol.axiom = f.get_double_or("tolerances", "axiom", 1e-11);
    cfg.tol.detailed_balance = f.get_double_or("tolerances", "detailed_balance", 1e-12);
    cfg.tol.eigen_residual = f.get_double_or("tolerances", "eigen_residual", 1e-8);
    cfg.seed = static_cast<std::uint64_t>(f.get_int_or("seeds", "master", 1));
    cfg.solver.seed = cfg.seed;
    cfg.n_random_f = f.get_int_or("verify", "n_random_f", 100);
    cfg.n_random_F = f.get_int_or("verify", "n_random_F", 200);
    cfg.state_capacity = static_cast<std::size_t>(
        f.get_int_or("limits", "state_capacity", static_cast<int>(StateSpace::kDefaultCapacity)));
    cfg.quad.abs_tol = f.get_double_or("quadrature", "abs_tol", 1e-10);
    if ((cfg.n_random_f > 0 || cfg.n_random_F > 0) && !f.has("seeds", "master") &&
        std::find(cfg.tasks.begin(), cfg.tasks.end(), "verify") != cfg.tasks.end())
        throw ConfigError("verify tasks with random functions need [seeds] master");
    return cfg;
}

std::string ExperimentConfig::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(ini.hash()));
    return buf;
}

std::string PointOverride::label() const {
    std::ostringstream os;
    auto put = [&](const char* k, auto v, bool engaged) {
        if (engaged) os << (os.tellp() > 0 ? " " : "") << k << "=" << v;
    };
    put("beta", beta ? *beta : 0.0, beta.has_value());
    put("n", n ? *n : 0, n.has_value());
    put("L", L ? *L : 0, L.has_value());
    put("N", N ? *N : 0, N.has_value());
    put("M", M ? *M : 0, M.has_value());
    put("h", h ? *h : 0.0, h.has_value());
    return os.str();
}

// ---------------------------------------------------------------------------
// model construction
// ---------------------------------------------------------------------------

namespace {

LatticePotential potential_from_config(const Ini& f, const SiteSet& sites) {
    std::string type = f.get_or("potential", "type", "none");
    if (type == "none") return LatticePotential{};
    if (type == "nn_pair") {
        double coupling = f.get_double("potential", "coupling");
        return LatticePotential::nn_pair(sites, coupling);
    }
    if (type == "terms") {
        LatticePotential pot;
        for (const IniEntry* e : f.all("potential", "term")) {
            auto colon = e->value.find(':');
            if (colon == std::string::npos)
                throw ConfigError("term needs 'sites : table' at line " + std::to_string(e->line));
            std::istringstream sin(e->value.substr(0, colon));
            PotentialTerm t;
            int site;
            while (sin >> site) t.support.push_back(SiteRef{false, site});
            std::istringstream tin(e->value.substr(colon + 1));
            double v;
            while (tin >> v) t.table.push_back(v);
            pot.add_term(std::move(t));
        }
        return pot;
    }
    throw ConfigError("unknown potential type '" + type + "'");
}

RadialProfile profile_from_config(const Ini& f) {
    std::string type = f.get("profile", "type");
    if (type == "indicator")
        return RadialProfile::indicator(f.get_double("profile", "theta"),
                                        f.get_double("profile", "radius"));
    if (type == "exp_decay")
        return RadialProfile::exp_decay(f.get_double("profile", "amplitude"),
                                        f.get_double("profile", "rate"));
    if (type == "tabulated") {
        auto r = f.get_list("profile", "r");
        auto phi = f.get_list("profile", "phi");
        return RadialProfile::tabulated(r, phi);
    }
    throw ConfigError("unknown profile type '" + type + "'");
}

RateFamily rates_from_config(const Ini& f) {
    std::string name = f.get_or("model", "rates", "linear");
    if (name == "linear") return RateFamily::linear();
    if (name == "constant") return RateFamily::constant();
    if (name == "exponential") return RateFamily::exponential();
    throw ConfigError("unknown rate family '" + name + "'");
}

}  // namespace

const ReversibleGenerator& ModelBundle::gen() const {
    if (kawasaki) return kawasaki->gen;
    if (zero_range) return zero_range->gen;
    if (glauber) return glauber->gen;
    if (move_kawasaki) return move_kawasaki->gen;
    throw ConfigError("empty model bundle");
}

ReversibleGenerator& ModelBundle::mutable_gen() {
    return const_cast<ReversibleGenerator&>(static_cast<const ModelBundle*>(this)->gen());
}

RKernel ModelBundle::kernel() const {
    if (kawasaki) return r_kawasaki(kawasaki->gen);
    if (zero_range) return r_zero_range(*zero_range);
    if (glauber) return r_glauber(*glauber);
    if (move_kawasaki) return r_move_kawasaki(*move_kawasaki);
    throw ConfigError("empty model bundle");
}

bool ModelBundle::exact_chain() const {
    // the closed forms below are theorems for the assembled finite chain;
    // truncated birth-death and grid continuum forms target a different
    // (untruncated / continuum) object and are reported with slack instead
    return kind == "kawasaki_complete" || kind == "zero_range";
}

std::vector<BoundReport> ModelBundle::closed_form_bounds(const QuadratureSpec& quad) const {
    std::vector<BoundReport> out;
    if (kind == "kawasaki_complete" && kawasaki) {
        auto [n1, n3] = kawasaki->potential.norms();
        out.push_back(kawasaki_bound(kawasaki->beta, n1, n3));
    } else if (kind == "zero_range" && zero_range) {
        out = zero_range_bounds(*zero_range);
    } else if (kind == "glauber" && glauber) {
        double eps = glauber_eps_kernel(glauber->kernel, glauber->beta);
        out.push_back(glauber_bound(glauber->lambda, eps));
    } else if (kind == "continuum_kawasaki" && move_kawasaki && profile) {
        QuadratureSpec q = quad;
        q.dim = 1;
        double eps = continuum_eps(*profile, beta, q);
        out = continuum_kawasaki_bounds(move_kawasaki->N, move_kawasaki->volume, eps);
    } else if (kind == "continuum_glauber" && glauber && profile) {
        QuadratureSpec q = quad;
        q.dim = 1;
        double eps = continuum_eps(*profile, beta, q);
        out.push_back(continuum_glauber_bound(z, eps));
    }
    return out;
}

ModelBundle build_model(const ExperimentConfig& cfg, const PointOverride& pt) {
    const Ini& f = cfg.ini;
    ModelBundle b;
    b.kind = cfg.kind;
    std::size_t cap = cfg.state_capacity;

    double beta = pt.beta ? *pt.beta : f.get_double_or("model", "beta", 0.0);
    b.beta = beta;

    if (cfg.kind == "kawasaki_complete" || cfg.kind == "kawasaki_nn") {
        int n = pt.n ? *pt.n : (pt.L ? *pt.L : f.get_int("model", "n"));
        int N = pt.N ? *pt.N : f.get_int("model", "N");
        std::string geom = f.get_or("model", "geometry", "segment");
        SiteSet sites;
        if (geom == "segment")
            sites = SiteSet::segment(n);
        else if (geom == "ring")
            sites = SiteSet::ring(n);
        else if (geom == "complete")
            sites = SiteSet::complete(n);
        else
            throw ConfigError("unknown geometry '" + geom + "'");
        LatticePotential pot = potential_from_config(f, sites);
        if (cfg.kind == "kawasaki_complete")
            b.kawasaki = build_kawasaki_complete(sites, std::move(pot), beta, N, cap);
        else
            b.kawasaki = build_kawasaki_nn(sites, std::move(pot), beta, N, cap);
    } else if (cfg.kind == "zero_range") {
        int N = pt.N ? *pt.N : f.get_int("model", "N");
        RateFamily rates = rates_from_config(f);
        std::string shape = f.get_or("model", "J", "zero");
        if (shape == "uno") {
            int L = pt.L ? *pt.L : f.get_int("model", "L");
            int d = f.get_int_or("model", "d", 1);
            double lambda = f.get_double("model", "lambda");
            double pair_beta = pt.beta ? *pt.beta : f.get_double("model", "pair_beta");
            b.zero_range = build_zero_range_uno(L, d, lambda, pair_beta, std::move(rates), N, cap);
            b.beta = pair_beta;
        } else if (shape == "zero") {
            int n = pt.n ? *pt.n : f.get_int("model", "n");
            b.zero_range =
                build_zero_range(SiteSet::complete(n), std::move(rates), QuadraticEnergy{}, N, cap);
        } else {
            throw ConfigError("unknown zero-range energy shape '" + shape + "'");
        }
    } else if (cfg.kind == "glauber") {
        int n = pt.n ? *pt.n : f.get_int("model", "n");
        int M = pt.M ? *pt.M : f.get_int("model", "M");
        double lambda = f.get_double("model", "lambda");
        double kappa = f.get_double_or("model", "kernel_kappa", 0.0);
        OccupationKernel kernel;
        if (kappa != 0.0) kernel = OccupationKernel::nn(kappa, 1);
        b.glauber = build_glauber_discrete(SiteSet::segment(n), lambda, std::move(kernel), beta, M, cap);
    } else if (cfg.kind == "continuum_kawasaki") {
        double box = f.get_double("model", "box");
        double h = pt.h ? *pt.h : f.get_double("model", "h");
        int N = pt.N ? *pt.N : f.get_int("model", "N");
        RadialProfile prof = profile_from_config(f);
        b.move_kawasaki = build_continuum_kawasaki_discretized(box, prof, beta, N, h, cap);
        b.profile = prof;
        b.box = box;
        b.h = h;
    } else if (cfg.kind == "continuum_glauber") {
        double box = f.get_double("model", "box");
        double h = pt.h ? *pt.h : f.get_double("model", "h");
        int M = pt.M ? *pt.M : f.get_int("model", "M");
        double z = f.get_double("model", "z");
        RadialProfile prof = profile_from_config(f);
        b.glauber = build_continuum_glauber_discretized(box, prof, beta, z, h, M, cap);
        b.profile = prof;
        b.box = box;
        b.h = h;
        b.z = z;
    } else {
        throw ConfigError("unknown model kind '" + cfg.kind + "'");
    }
    return b;
}

}  // namespace gaplab
