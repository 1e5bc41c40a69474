#include "gaplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gaplab {

Eigen::MatrixXd symmetrized_dense(const ReversibleGenerator& gen, double db_tol) {
    double db = check_detailed_balance(gen);
    if (db > db_tol)
        throw InvalidRatesError("refusing to symmetrize: detailed-balance residual " +
                                std::to_string(db));
    const int S = gen.states();
    Eigen::VectorXd sq = gen.nu.cwiseSqrt();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(S, S);
    for (int i = 0; i < S; ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(gen.L, i); it; ++it)
            A(i, it.col()) = -sq[i] * it.value() / sq[it.col()];
    return 0.5 * (A + A.transpose());
}

Eigen::SparseMatrix<double, Eigen::RowMajor> symmetrized_sparse(const ReversibleGenerator& gen,
                                                                double db_tol) {
    double db = check_detailed_balance(gen);
    if (db > db_tol)
        throw InvalidRatesError("refusing to symmetrize: detailed-balance residual " +
                                std::to_string(db));
    Eigen::VectorXd sq = gen.nu.cwiseSqrt();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(gen.L.nonZeros());
    for (int i = 0; i < gen.L.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(gen.L, i); it; ++it)
            trip.emplace_back(i, static_cast<int>(it.col()), -sq[i] * it.value() / sq[it.col()]);
    Eigen::SparseMatrix<double, Eigen::RowMajor> A(gen.states(), gen.states());
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseMatrix<double, Eigen::RowMajor> At = A.transpose();
    A = 0.5 * (A + At);
    A.makeCompressed();
    return A;
}

namespace {

SpectralResult dense_gap(const ReversibleGenerator& gen, int head) {
    Eigen::MatrixXd A = symmetrized_dense(gen);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Eigen::MatrixXd& V = es.eigenvectors();
    Eigen::VectorXd sq = gen.nu.cwiseSqrt();

    // the exact null vector is sqrt(nu); identify it by overlap instead of
    // trusting eigenvalue ordering near zero
    int zi = 0;
    double best = -1;
    for (int i = 0; i < ev.size(); ++i) {
        double ov = std::abs(V.col(i).dot(sq));
        if (ov > best) {
            best = ov;
            zi = i;
        }
    }
    SpectralResult res;
    res.method = "dense";
    res.zero_mode_residual = std::abs(ev[zi]);
    int gi = -1;
    for (int i = 0; i < ev.size(); ++i) {
        if (i == zi) continue;
        if (gi < 0 || ev[i] < ev[gi]) gi = i;
    }
    if (gi < 0) throw ReducibilityError("state space has a single state; no spectral gap");
    res.gap = ev[gi];
    res.gap_eigenvector = V.col(gi).cwiseQuotient(sq);
    res.eigen_residual = (A * V.col(gi) - ev[gi] * V.col(gi)).norm();
    for (int i = 0; i < ev.size() && static_cast<int>(res.spectrum_head.size()) < head; ++i)
        res.spectrum_head.push_back(ev[i]);
    return res;
}

// Thick-restart Lanczos for the smallest eigenpairs of a sparse symmetric
// PSD matrix, with the known null vector deflated by explicit projection.
struct LanczosOut {
    double theta = 0;
    Eigen::VectorXd v;
    double residual = 0;
    int iterations = 0;
    bool converged = false;
};

LanczosOut lanczos_smallest(const Eigen::SparseMatrix<double, Eigen::RowMajor>& A,
                            const Eigen::VectorXd& null_vec, double tol, int max_iters,
                            std::uint64_t seed) {
    const int n = static_cast<int>(A.rows());
    const int m = std::min(n - 1, 80);  // basis size per cycle
    const int keep = std::max(2, std::min(m / 4, 16));
    Eigen::VectorXd u = null_vec.normalized();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd V(n, m + 1);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);

    Eigen::VectorXd start(n);
    for (int i = 0; i < n; ++i) start[i] = gauss(rng);
    start -= u * u.dot(start);
    start.normalize();
    V.col(0) = start;

    int nkeep = 0;
    Eigen::VectorXd kept_theta, kept_res;
    int total_iters = 0;
    LanczosOut out;

    while (true) {
        // first nkeep columns of V hold Ritz vectors of the previous cycle,
        // V.col(nkeep) the continuation vector; T is arrowhead + tridiagonal
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < nkeep; ++i) {
            T(i, i) = kept_theta[i];
            T(nkeep, i) = T(i, nkeep) = kept_res[i];
        }
        int m_eff = m;
        bool exhausted = false;
        for (int j = nkeep; j < m; ++j) {
            ++total_iters;
            Eigen::VectorXd w = A * V.col(j);
            w -= u * u.dot(w);
            T(j, j) += V.col(j).dot(w);
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= j; ++i) w -= V.col(i) * V.col(i).dot(w);
            double b = w.norm();
            if (b < 1e-13) {  // invariant subspace reached
                m_eff = j + 1;
                exhausted = true;
                beta[j] = 0;
                break;
            }
            if (j + 1 < m) T(j + 1, j) = T(j, j + 1) = b;
            V.col(j + 1) = w / b;
            beta[j] = b;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.topLeftCorner(m_eff, m_eff));
        const Eigen::VectorXd& theta = es.eigenvalues();
        const Eigen::MatrixXd& Y = es.eigenvectors();
        double bm = beta[m_eff - 1];

        int want = std::min(2, m_eff);
        bool done = true;
        for (int k = 0; k < want; ++k)
            if (std::abs(bm * Y(m_eff - 1, k)) > tol * std::max(1.0, std::abs(theta[k]))) done = false;
        if (done || exhausted || total_iters >= max_iters) {
            Eigen::VectorXd ritz = V.leftCols(m_eff) * Y.col(0);
            ritz.normalize();
            out.theta = theta[0];
            out.v = ritz;
            out.residual = (A * ritz - theta[0] * ritz).norm();
            out.iterations = total_iters;
            out.converged = out.residual <= 100 * tol * std::max(1.0, std::abs(theta[0]));
            return out;
        }
        // thick restart with the `keep` smallest Ritz pairs
        Eigen::MatrixXd kept(n, keep);
        kept_theta = Eigen::VectorXd(keep);
        kept_res = Eigen::VectorXd(keep);
        for (int k = 0; k < keep; ++k) {
            kept.col(k) = V.leftCols(m_eff) * Y.col(k);
            kept_theta[k] = theta[k];
            kept_res[k] = bm * Y(m_eff - 1, k);
        }
        Eigen::VectorXd cont = V.col(m_eff);
        V.leftCols(keep) = kept;
        V.col(keep) = cont;
        nkeep = keep;
    }
}

SpectralResult iterative_gap(const ReversibleGenerator& gen, const SolverSettings& settings) {
    auto A = symmetrized_sparse(gen);
    Eigen::VectorXd sq = gen.nu.cwiseSqrt();
    LanczosOut lo = lanczos_smallest(A, sq, settings.iterative_tol, settings.max_lanczos_iters,
                                     settings.seed);
    if (!lo.converged)
        throw ConvergenceError("iterative eigensolver did not converge (iterations=" +
                               std::to_string(lo.iterations) +
                               ", residual=" + std::to_string(lo.residual) + ")");
    SpectralResult res;
    res.method = "iterative";
    res.gap = lo.theta;
    res.gap_eigenvector = lo.v.cwiseQuotient(sq);
    res.eigen_residual = lo.residual;
    res.spectrum_head = {0.0, lo.theta};
    return res;
}

}  // namespace

SpectralResult spectral_gap(const ReversibleGenerator& gen, EigenMethod method,
                            const SolverSettings& settings, int head) {
    if (method == EigenMethod::Dense ||
        (method == EigenMethod::Auto && gen.states() <= settings.dense_cap))
        return dense_gap(gen, head);
    if (method == EigenMethod::Dense && gen.states() > settings.dense_cap)
        throw CapacityError("state count above dense cap");
    return iterative_gap(gen, settings);
}

double nu_mean(const ReversibleGenerator& gen, const Eigen::VectorXd& f) {
    return gen.nu.dot(f);
}

double dirichlet_form(const ReversibleGenerator& gen, const Eigen::VectorXd& f) {
    Eigen::VectorXd Lf = gen.L * f;
    double direct = -gen.nu.dot(f.cwiseProduct(Lf));
    long double half_sum = 0;
    const int S = gen.states();
    const int M = gen.moves();
    for (int s = 0; s < S; ++s) {
        long double acc = 0;
        for (int m = 0; m < M; ++m) {
            double d = f[gen.target(s, m)] - f[s];
            acc += static_cast<long double>(gen.rate(s, m)) * d * d;
        }
        half_sum += 0.5L * static_cast<long double>(gen.nu[s]) * acc;
    }
    double hs = static_cast<double>(half_sum);
    double scale = std::max({std::abs(direct), std::abs(hs), 1e-300});
    if (std::abs(direct - hs) / scale > 1e-10)
        throw InvalidRatesError("Dirichlet form mismatch between matrix and half-sum routes");
    return hs;
}

double variance(const ReversibleGenerator& gen, const Eigen::VectorXd& f) {
    double mean = gen.nu.dot(f);
    return gen.nu.dot(f.cwiseProduct(f)) - mean * mean;
}

BakryEmeryReport bakry_emery_check(const ReversibleGenerator& gen, const SpectralResult& spec,
                                   int n_random_f, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    BakryEmeryReport rep;
    const int S = gen.states();
    for (int t = 0; t < n_random_f; ++t) {
        Eigen::VectorXd f(S);
        for (int i = 0; i < S; ++i) f[i] = gauss(rng);
        Eigen::VectorXd Lf = gen.L * f;
        double nuL2 = gen.nu.dot(Lf.cwiseProduct(Lf));
        double E = -gen.nu.dot(f.cwiseProduct(Lf));
        double scale = std::max(nuL2 + E, 1e-300);
        rep.max_violation = std::max(rep.max_violation, (spec.gap * E - nuL2) / scale);
    }
    const Eigen::VectorXd& v = spec.gap_eigenvector;
    Eigen::VectorXd Lv = gen.L * v;
    double nuL2 = gen.nu.dot(Lv.cwiseProduct(Lv));
    double E = -gen.nu.dot(v.cwiseProduct(Lv));
    rep.eigvec_equality_err = std::abs(spec.gap * E - nuL2) / std::max(nuL2 + E, 1e-300);
    return rep;
}

}  // namespace gaplab
