#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "rotorlab/graph.hpp"
#include "rotorlab/rotor.hpp"

namespace rotorlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Transition matrix and stationary distribution of a walk on a graph.
struct Chain {
    ChainKind kind = ChainKind::plain;
    Matrix P;
    Vector pi;
    SparseMatrix P_sparse;

    std::size_t n() const { return static_cast<std::size_t>(P.rows()); }
};

namespace detail {

inline SparseMatrix to_sparse(const Matrix& P) {
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index i = 0; i < P.rows(); ++i)
        for (Eigen::Index j = 0; j < P.cols(); ++j)
            if (P(i, j) != 0.0) trip.emplace_back(i, j, P(i, j));
    SparseMatrix S(P.rows(), P.cols());
    S.setFromTriplets(trip.begin(), trip.end());
    return S;
}

/// Stationary vector of an irreducible chain: solve pi (I - P) = 0 with sum(pi) = 1.
inline Vector solve_stationary(const Matrix& P) {
    const Eigen::Index n = P.rows();
    Matrix A = Matrix::Identity(n, n) - P.transpose();
    A.row(n - 1).setOnes();
    Vector b = Vector::Zero(n);
    b(n - 1) = 1.0;
    Eigen::PartialPivLU<Matrix> lu(A);
    if (!(lu.rcond() > 1e-14)) throw SingularSystem("stationary system is singular (reducible chain?)");
    return lu.solve(b);
}

}  // namespace detail

/// Plain chain P(u,v) = c(u,v)/c(u), or the lazy symmetric chain with 1/(Delta+1) on
/// every edge and the remaining mass on the self-loop (edge weights are ignored there).
inline Chain build_chain(const Graph& g, ChainKind kind = ChainKind::plain) {
    const auto n = static_cast<Eigen::Index>(g.n());
    Chain c;
    c.kind = kind;
    c.P = Matrix::Zero(n, n);
    c.pi = Vector::Zero(n);
    if (kind == ChainKind::plain) {
        double total = 0.0;
        for (vertex u = 0; u < g.n(); ++u) {
            const double cu = static_cast<double>(g.weighted_degree(u));
            auto nb = g.neighbors(u);
            auto wt = g.neighbor_weights(u);
            for (std::size_t i = 0; i < nb.size(); ++i) c.P(u, nb[i]) = wt[i] / cu;
            c.pi(u) = cu;
            total += cu;
        }
        c.pi /= total;
    } else {
        const double q = 1.0 / static_cast<double>(g.max_degree() + 1);
        for (vertex u = 0; u < g.n(); ++u) {
            for (vertex v : g.neighbors(u)) c.P(u, v) = q;
            c.P(u, u) = 1.0 - static_cast<double>(g.degree(u)) * q;
        }
        c.pi.setConstant(1.0 / static_cast<double>(n));
    }
    c.P_sparse = detail::to_sparse(c.P);
    return c;
}

/// Chain realized by a rotor configuration: P(u,v) = multiplicity of v in s~(u) / d~(u).
inline Chain chain_from_config(const Graph& g, const RotorConfiguration& config, ChainKind kind) {
    if (config.n() != g.n()) throw DimensionMismatch("configuration size != graph size");
    const auto n = static_cast<Eigen::Index>(g.n());
    Chain c;
    c.kind = kind;
    c.P = Matrix::Zero(n, n);
    for (vertex u = 0; u < g.n(); ++u) {
        const double len = static_cast<double>(config.length(u));
        for (vertex v : config.sequences[u]) c.P(u, v) += 1.0 / len;
    }
    c.pi = detail::solve_stationary(c.P);
    c.P_sparse = detail::to_sparse(c.P);
    return c;
}

struct ChainResiduals {
    double row_sum = 0.0;      ///< max_u |sum_v P(u,v) - 1|
    double stationarity = 0.0; ///< max_v |(pi P)_v - pi_v|
    double pi_sum = 0.0;       ///< |sum pi - 1|
};

inline ChainResiduals residuals(const Chain& c) {
    ChainResiduals r;
    r.row_sum = (c.P.rowwise().sum().array() - 1.0).abs().maxCoeff();
    r.stationarity = ((c.pi.transpose() * c.P).transpose() - c.pi).cwiseAbs().maxCoeff();
    r.pi_sum = std::abs(c.pi.sum() - 1.0);
    return r;
}

/// Max absolute entry difference between two transition matrices.
inline double chain_distance(const Chain& a, const Chain& b) {
    if (a.n() != b.n()) return std::numeric_limits<double>::infinity();
    return (a.P - b.P).cwiseAbs().maxCoeff();
}

/// H(u,v) = expected steps from u to v, H(v,v) = 0. The return time 1/pi_v is kept apart.
struct HittingTimes {
    Matrix H;
    Vector return_time;

    double operator()(std::size_t u, std::size_t v) const { return H(u, v); }
    /// max_u H(u,v) for every v.
    Vector max_to() const { return H.colwise().maxCoeff().transpose(); }
    double max() const { return H.maxCoeff(); }
};

enum class HittingMethod { per_target, fundamental, automatic };

/// Fundamental matrix Z = (I - P + 1 pi)^{-1} - 1 pi, so Z = sum_t (P^t - 1 pi) for
/// aperiodic chains and the Cesaro value otherwise.
inline Matrix fundamental_matrix(const Chain& c) {
    const auto n = static_cast<Eigen::Index>(c.n());
    Matrix Pi = Vector::Ones(n) * c.pi.transpose();
    Matrix A = Matrix::Identity(n, n) - c.P + Pi;
    Eigen::PartialPivLU<Matrix> lu(A);
    if (!(lu.rcond() > 1e-14)) throw SingularSystem("I - P + 1 pi is singular");
    return lu.inverse() - Pi;
}

/// Per-target solves of (I - P) restricted to V\{v}: h = 1. `fundamental` instead
/// uses H(u,v) = (Z_vv - Z_uv) / pi_v from one inversion.
inline HittingTimes hitting_times(const Chain& c, HittingMethod method = HittingMethod::automatic) {
    const auto n = static_cast<Eigen::Index>(c.n());
    if (method == HittingMethod::automatic) method = n <= 160 ? HittingMethod::per_target : HittingMethod::fundamental;
    HittingTimes ht;
    ht.H = Matrix::Zero(n, n);
    ht.return_time = c.pi.cwiseInverse();
    if (n == 1) return ht;
    if (method == HittingMethod::fundamental) {
        const Matrix Z = fundamental_matrix(c);
        for (Eigen::Index v = 0; v < n; ++v)
            for (Eigen::Index u = 0; u < n; ++u) ht.H(u, v) = u == v ? 0.0 : (Z(v, v) - Z(u, v)) / c.pi(v);
        return ht;
    }
    Matrix A(n - 1, n - 1);
    for (Eigen::Index v = 0; v < n; ++v) {
        auto idx = [v](Eigen::Index i) { return i < v ? i : i + 1; };
        for (Eigen::Index i = 0; i < n - 1; ++i)
            for (Eigen::Index j = 0; j < n - 1; ++j) A(i, j) = (i == j ? 1.0 : 0.0) - c.P(idx(i), idx(j));
        Eigen::PartialPivLU<Matrix> lu(A);
        if (!(lu.rcond() > 1e-14)) throw SingularSystem("hitting-time system for target " + std::to_string(v) + " is singular");
        const Vector h = lu.solve(Vector::Ones(n - 1));
        for (Eigen::Index i = 0; i < n - 1; ++i) ht.H(idx(i), v) = h(i);
    }
    return ht;
}

/// K(v) = max_u H(u,v) + 1/2 ( d~(v)/pi_v + sum_{i,j} d~(i) P_ij |H(i,v) - H(j,v) - 1| ).
inline Vector k_functional(const Chain& c, const HittingTimes& ht, const std::vector<std::uint32_t>& d_tilde) {
    const auto n = static_cast<Eigen::Index>(c.n());
    if (static_cast<Eigen::Index>(d_tilde.size()) != n || ht.H.rows() != n)
        throw DimensionMismatch("k_functional: d_tilde has " + std::to_string(d_tilde.size()) + " entries, chain has " +
                                std::to_string(n) + " states");
    const Vector maxH = ht.max_to();
    Vector K(n);
    for (Eigen::Index v = 0; v < n; ++v) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (SparseMatrix::InnerIterator it(c.P_sparse, i); it; ++it) {
                const Eigen::Index j = it.col();
                sum += d_tilde[i] * it.value() * std::abs(ht.H(i, v) - ht.H(j, v) - 1.0);
            }
        }
        K(v) = maxH(v) + 0.5 * (d_tilde[v] / c.pi(v) + sum);
    }
    return K;
}

inline Vector k_functional(const Chain& c, const std::vector<std::uint32_t>& d_tilde) {
    return k_functional(c, hitting_times(c), d_tilde);
}

/// |sum_t (P^t_iv - P^t_jv) - pi_v (H(j,v) - H(i,v))| with the series taken as Z_iv - Z_jv.
inline double triple_identity_residual(const Matrix& Z, const Chain& c, const HittingTimes& ht, std::size_t i,
                                       std::size_t j, std::size_t v) {
    const double series = Z(i, v) - Z(j, v);
    return std::abs(series - c.pi(v) * (ht.H(j, v) - ht.H(i, v)));
}

inline double triple_identity_residual(const Chain& c, std::size_t i, std::size_t j, std::size_t v) {
    return triple_identity_residual(fundamental_matrix(c), c, hitting_times(c, HittingMethod::per_target), i, j, v);
}

/// Max residual over all triples.
inline double triple_identity_max_residual(const Chain& c) {
    const Matrix Z = fundamental_matrix(c);
    const HittingTimes ht = hitting_times(c, HittingMethod::per_target);
    double worst = 0.0;
    for (std::size_t v = 0; v < c.n(); ++v)
        for (std::size_t i = 0; i < c.n(); ++i)
            for (std::size_t j = 0; j < c.n(); ++j) worst = std::max(worst, triple_identity_residual(Z, c, ht, i, j, v));
    return worst;
}

struct Spectrum {
    Vector eigenvalues;        ///< ascending
    double second = 0.0;       ///< second-largest eigenvalue (signed)
    double smallest = 0.0;
    double lambda_star = 0.0;  ///< max |lambda| over non-principal eigenvalues
};

/// Eigenvalues of a reversible chain via the symmetric matrix D^{1/2} P D^{-1/2}, D = diag(pi).
inline Spectrum spectrum(const Chain& c) {
    const auto n = static_cast<Eigen::Index>(c.n());
    const Vector s = c.pi.cwiseSqrt();
    Matrix S = s.asDiagonal() * c.P * s.cwiseInverse().asDiagonal();
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
    Spectrum sp;
    sp.eigenvalues = es.eigenvalues();
    if (n < 2) return sp;
    sp.second = sp.eigenvalues(n - 2);
    sp.smallest = sp.eigenvalues(0);
    sp.lambda_star = std::max(std::abs(sp.second), std::abs(sp.smallest));
    return sp;
}

/// Second-largest eigenvalue in absolute value.
inline double lambda2(const Chain& c) { return spectrum(c).lambda_star; }

struct DivergenceOptions {
    double tol = 1e-10;
    bool cesaro = false;           ///< experimental: average consecutive iterates (periodic chains)
    std::size_t max_iterations = 50'000'000;
};

/// Psi(P, v) = sum_t sum_{ {i,j} in E } |P^t_iv - P^t_jv|, iterating the column
/// c_t = P c_{t-1} from e_v. Truncates once the current term drops below
/// tol * (1 - rate), rate being the decay rate of the iterated quantity.
inline double local_divergence(const Graph& g, const Chain& c, vertex v, const DivergenceOptions& opt,
                               std::optional<Spectrum> sp_in = std::nullopt) {
    if (c.n() != g.n()) throw DimensionMismatch("chain and graph sizes differ");
    const Spectrum sp = sp_in ? *sp_in : spectrum(c);
    double rate = sp.lambda_star;
    if (opt.cesaro) {
        // -1 eigenvalues vanish under averaging of consecutive iterates.
        rate = std::abs(sp.second);
        for (Eigen::Index i = 0; i < sp.eigenvalues.size() - 1; ++i)
            if (sp.eigenvalues(i) > -1.0 + 1e-9) rate = std::max(rate, std::abs(sp.eigenvalues(i)));
    }
    if (rate >= 1.0 - 1e-12) {
        throw NonConvergent(opt.cesaro ? "divergence series does not converge (reducible chain)"
                                       : "divergence series does not converge on a periodic chain; use Cesaro mode");
    }
    const double stop = opt.tol * (1.0 - rate);
    auto term_of = [&](const Vector& x) {
        double s = 0.0;
        for (const Edge& e : g.edges()) s += std::abs(x(e.u) - x(e.v));
        return s;
    };
    Vector col = Vector::Zero(static_cast<Eigen::Index>(g.n()));
    col(v) = 1.0;
    Vector next;
    double total = 0.0;
    for (std::size_t t = 0; t < opt.max_iterations; ++t) {
        next = c.P_sparse * col;
        const double term = opt.cesaro ? term_of(0.5 * (col + next)) : term_of(col);
        total += term;
        if (term == 0.0 || (term < stop && t > 0)) return total;
        col.swap(next);
    }
    throw NonConvergent("divergence series did not reach tolerance within the iteration limit");
}

inline double local_divergence(const Graph& g, const Chain& c, vertex v, double tol = 1e-10) {
    DivergenceOptions opt;
    opt.tol = tol;
    return local_divergence(g, c, v, opt);
}

/// Psi(P, v) for every v.
inline Vector divergence_vector(const Graph& g, const Chain& c, const DivergenceOptions& opt = {}) {
    const Spectrum sp = spectrum(c);
    Vector psi(static_cast<Eigen::Index>(g.n()));
    for (vertex v = 0; v < g.n(); ++v) psi(v) = local_divergence(g, c, v, opt, sp);
    return psi;
}

struct Flow {
    vertex source = 0;
    Vector potential;          ///< grounded at the source
    std::vector<double> flow;  ///< per edge id, oriented from edges()[e].u to edges()[e].v
    double total = 0.0;        ///< sum_e |f(e)|
    double conservation_residual = 0.0;
};

namespace detail {

inline Matrix laplacian(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.n());
    Matrix L = Matrix::Zero(n, n);
    for (const Edge& e : g.edges()) {
        L(e.u, e.u) += 1;
        L(e.v, e.v) += 1;
        L(e.u, e.v) -= 1;
        L(e.v, e.u) -= 1;
    }
    return L;
}

/// Net flow out of each vertex minus its demand (n-1 at the source, -1 elsewhere).
inline double conservation(const Graph& g, vertex s, const std::vector<double>& flow) {
    std::vector<double> net(g.n(), 0.0);
    for (std::size_t e = 0; e < g.m(); ++e) {
        net[g.edges()[e].u] += flow[e];
        net[g.edges()[e].v] -= flow[e];
    }
    double worst = 0.0;
    for (vertex v = 0; v < g.n(); ++v) {
        const double demand = v == s ? static_cast<double>(g.n()) - 1.0 : -1.0;
        worst = std::max(worst, std::abs(net[v] - demand));
    }
    return worst;
}

}  // namespace detail

/// l2-minimal flow sending one unit from s to every other vertex: potentials of the
/// Laplacian system L phi = b (b_s = n-1, b_v = -1), grounded at s; f(i,j) = phi_i - phi_j.
inline Flow electrical_flow(const Graph& g, vertex s) {
    if (s >= g.n()) throw InvalidParameters("flow source out of range");
    const auto n = static_cast<Eigen::Index>(g.n());
    Flow f;
    f.source = s;
    f.potential = Vector::Zero(n);
    if (n > 1) {
        const Matrix L = detail::laplacian(g);
        Matrix A(n - 1, n - 1);
        auto idx = [s](Eigen::Index i) { return i < static_cast<Eigen::Index>(s) ? i : i + 1; };
        for (Eigen::Index i = 0; i < n - 1; ++i)
            for (Eigen::Index j = 0; j < n - 1; ++j) A(i, j) = L(idx(i), idx(j));
        Eigen::LDLT<Matrix> ldlt(A);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-14)
            throw SingularSystem("grounded Laplacian is singular (disconnected graph?)");
        const Vector phi = ldlt.solve(Vector::Constant(n - 1, -1.0));
        for (Eigen::Index i = 0; i < n - 1; ++i) f.potential(idx(i)) = phi(i);
    }
    f.flow.resize(g.m());
    for (std::size_t e = 0; e < g.m(); ++e) {
        f.flow[e] = f.potential(g.edges()[e].u) - f.potential(g.edges()[e].v);
        f.total += std::abs(f.flow[e]);
    }
    f.conservation_residual = detail::conservation(g, s, f.flow);
    return f;
}

/// Pseudo-inverse L+ = (L + J/n)^{-1} - J/n.
inline Matrix laplacian_pinv(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.n());
    const Matrix J = Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
    Eigen::LDLT<Matrix> ldlt(detail::laplacian(g) + J);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14) throw SingularSystem("Laplacian pseudo-inverse failed");
    return ldlt.solve(Matrix::Identity(n, n)) - J;
}

struct FlowSummary {
    std::vector<double> totals;  ///< sum_e |f_s(e)| per source s
    double max_total = 0.0;
    vertex argmax = 0;
};

/// sum_e |f_s(e)| for every source from one pseudo-inverse: f_s(i,j) = n (L+_is - L+_js).
inline FlowSummary flow_totals(const Graph& g) {
    const Matrix Lp = laplacian_pinv(g);
    const double n = static_cast<double>(g.n());
    FlowSummary out;
    out.totals.assign(g.n(), 0.0);
    for (vertex s = 0; s < g.n(); ++s) {
        double t = 0.0;
        for (const Edge& e : g.edges()) t += std::abs(n * (Lp(e.u, s) - Lp(e.v, s)));
        out.totals[s] = t;
        if (t > out.max_total) {
            out.max_total = t;
            out.argmax = s;
        }
    }
    return out;
}

/// Plain-text dense export: "rows cols" then one row per line.
inline void write_dense(std::ostream& os, const Matrix& M) {
    os << M.rows() << ' ' << M.cols() << '\n';
    os.precision(17);
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) os << (j ? " " : "") << M(i, j);
        os << '\n';
    }
}

}  // namespace rotorlab
