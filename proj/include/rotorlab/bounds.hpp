#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotorlab/chain.hpp"

namespace rotorlab {

struct BoundOptions {
    bool divergence = true;   ///< Psi and the two divergence bounds
    bool spectrum = true;     ///< lambda_2 and the expansion bound
    bool flow = true;         ///< electrical flows and the flow bound
    DivergenceOptions divergence_options{};
};

/// Upper-bound components for one (graph, chain, d~). Bounds with unstated constants
/// are raw sums with every constant taken as 1. Absent entries are std::nullopt.
struct BoundReport {
    std::string chain;
    std::size_t n = 0, m = 0, min_degree = 0, max_degree = 0;
    double kappa = 0.0;
    double c_max = 0.0;
    double max_hitting = 0.0;

    std::vector<double> K;
    double max_K = 0.0;
    double hitting_bound = 0.0;       ///< max_v K(v) + 1
    double vertex_cover_bound = 0.0;  ///< max_v K(v) + 1
    double edge_cover_bound = 0.0;    ///< 3 max_v K(v)

    std::optional<std::vector<double>> psi;
    std::optional<double> psi_max;
    std::optional<double> divergence_bound;  ///< max_v [max_u H(u,v) + kappa c_max Psi(P,v)/pi_v] + 2 m kappa c_max
    std::optional<double> symmetric_bound;   ///< same on the lazy chain, with n Delta kappa as last term

    std::optional<double> lambda2;        ///< max |non-principal eigenvalue| of the plain chain
    std::optional<double> lambda2_signed; ///< second-largest eigenvalue of the plain chain
    std::optional<double> lambda2_lazy;   ///< max |non-principal eigenvalue| of the lazy chain
    std::optional<double> expansion_bound;

    std::optional<double> flow_max;   ///< max_s sum_e |f_s(e)|
    std::optional<double> flow_term;  ///< Delta * flow_max
    std::optional<double> flow_bound; ///< (Delta/delta) max H + Delta n kappa + kappa Delta flow_max
};

namespace detail {

inline double kappa_of(const Graph& g, const std::vector<std::uint32_t>& d_tilde) {
    double k = 0.0;
    for (vertex u = 0; u < g.n(); ++u) k = std::max(k, static_cast<double>(d_tilde[u]) / static_cast<double>(g.degree(u)));
    return k;
}

/// max_v [max_u H(u,v) + coef Psi(v) / pi_v] + tail
inline double divergence_sum(const HittingTimes& ht, const Chain& c, const Vector& psi, double coef, double tail) {
    const Vector maxH = ht.max_to();
    double best = 0.0;
    for (Eigen::Index v = 0; v < psi.size(); ++v) best = std::max(best, maxH(v) + coef * psi(v) / c.pi(v));
    return best + tail;
}

}  // namespace detail

inline BoundReport bound_evaluators(const Graph& g, const Chain& chain, const std::vector<std::uint32_t>& d_tilde,
                                    const BoundOptions& opt = {}) {
    if (d_tilde.size() != g.n() || chain.n() != g.n()) throw DimensionMismatch("bound_evaluators: size mismatch");
    BoundReport r;
    r.chain = std::string(chain_kind_name(chain.kind));
    r.n = g.n();
    r.m = g.m();
    r.min_degree = g.min_degree();
    r.max_degree = g.max_degree();
    r.kappa = detail::kappa_of(g, d_tilde);
    // Lazy chain seen as a weighted walk: unit edges plus loops of weight Delta+1-deg.
    r.c_max = chain.kind == ChainKind::plain ? static_cast<double>(g.c_max())
                                             : static_cast<double>(g.max_degree() + 1 - g.min_degree());
    const double n = static_cast<double>(g.n()), m = static_cast<double>(g.m());
    const double Delta = static_cast<double>(g.max_degree()), delta = static_cast<double>(g.min_degree());

    const HittingTimes ht = hitting_times(chain);
    r.max_hitting = ht.max();
    const Vector K = k_functional(chain, ht, d_tilde);
    r.K.assign(K.data(), K.data() + K.size());
    r.max_K = K.maxCoeff();
    r.hitting_bound = r.max_K + 1.0;
    r.vertex_cover_bound = r.max_K + 1.0;
    r.edge_cover_bound = 3.0 * r.max_K;

    const Chain lazy = chain.kind == ChainKind::lazy ? chain : build_chain(g, ChainKind::lazy);
    if (opt.divergence) {
        const Spectrum sp = spectrum(chain);
        if (sp.lambda_star < 1.0 - 1e-12 || opt.divergence_options.cesaro) {
            Vector psi(static_cast<Eigen::Index>(g.n()));
            for (vertex v = 0; v < g.n(); ++v) psi(v) = local_divergence(g, chain, v, opt.divergence_options, sp);
            r.psi = std::vector<double>(psi.data(), psi.data() + psi.size());
            r.psi_max = psi.maxCoeff();
            r.divergence_bound = detail::divergence_sum(ht, chain, psi, r.kappa * r.c_max, 2.0 * m * r.kappa * r.c_max);
        }
        const HittingTimes lazy_ht = chain.kind == ChainKind::lazy ? ht : hitting_times(lazy);
        const Vector lazy_psi = divergence_vector(g, lazy, opt.divergence_options);
        r.symmetric_bound = detail::divergence_sum(lazy_ht, lazy, lazy_psi, r.kappa, n * Delta * r.kappa);
        if (chain.kind == ChainKind::lazy) {
            r.psi = std::vector<double>(lazy_psi.data(), lazy_psi.data() + lazy_psi.size());
            r.psi_max = lazy_psi.maxCoeff();
        }
    }
    if (opt.spectrum) {
        const Chain plain = chain.kind == ChainKind::plain ? chain : build_chain(g, ChainKind::plain);
        const Spectrum sp = spectrum(plain);
        r.lambda2 = sp.lambda_star;
        r.lambda2_signed = sp.second;
        r.lambda2_lazy = spectrum(lazy).lambda_star;
        if (sp.lambda_star < 1.0 - 1e-12) {
            const double gap = 1.0 - sp.lambda_star;
            r.expansion_bound = (Delta / delta) * n / gap + n * r.kappa * (Delta / delta) * Delta * std::log(n) / gap;
        }
    }
    if (opt.flow) {
        const FlowSummary fs = flow_totals(g);
        const double max_h_plain =
            chain.kind == ChainKind::plain ? ht.max() : hitting_times(build_chain(g, ChainKind::plain)).max();
        r.flow_max = fs.max_total;
        r.flow_term = Delta * fs.max_total;
        r.flow_bound = (Delta / delta) * max_h_plain + Delta * n * r.kappa + r.kappa * Delta * fs.max_total;
    }
    return r;
}

inline nlohmann::ordered_json to_json(const BoundReport& r) {
    auto opt = [](const auto& x) -> nlohmann::ordered_json {
        if (x) return *x;
        return nullptr;
    };
    nlohmann::ordered_json j;
    j["chain"] = r.chain;
    j["n"] = r.n;
    j["m"] = r.m;
    j["min_degree"] = r.min_degree;
    j["max_degree"] = r.max_degree;
    j["kappa"] = r.kappa;
    j["c_max"] = r.c_max;
    j["max_hitting"] = r.max_hitting;
    j["K"] = r.K;
    j["max_K"] = r.max_K;
    j["hitting_bound"] = r.hitting_bound;
    j["vertex_cover_bound"] = r.vertex_cover_bound;
    j["edge_cover_bound"] = r.edge_cover_bound;
    j["psi"] = opt(r.psi);
    j["psi_max"] = opt(r.psi_max);
    j["divergence_bound"] = opt(r.divergence_bound);
    j["symmetric_bound"] = opt(r.symmetric_bound);
    j["lambda2"] = opt(r.lambda2);
    j["lambda2_signed"] = opt(r.lambda2_signed);
    j["lambda2_lazy"] = opt(r.lambda2_lazy);
    j["expansion_bound"] = opt(r.expansion_bound);
    j["flow_max"] = opt(r.flow_max);
    j["flow_term"] = opt(r.flow_term);
    j["flow_bound"] = opt(r.flow_bound);
    return j;
}

}  // namespace rotorlab
