#pragma once

#include <cmath>

#include "rotorlab/chain.hpp"
#include "rotorlab/walk.hpp"

namespace rotorlab {

struct ConcentrationResult {
    double max_residual = 0.0;  ///< max_v ( t |pi_v - N_t(v)/t| - K(v) pi_v ); <= 0 passes
    vertex worst = 0;
    bool passed() const { return max_residual <= 0.0; }
};

/// Compares visit frequencies with pi: |pi_v - N_t(v)/t| <= K(v) pi_v / t.
/// The configuration must realize `chain` exactly (integer multiplicity check).
inline ConcentrationResult concentration_check(const Graph& g, const WalkState& s, const Chain& chain, const Vector& K) {
    if (s.t < 1) throw InvalidParameters("concentration_check needs t >= 1");
    if (chain.n() != g.n() || static_cast<std::size_t>(K.size()) != g.n())
        throw DimensionMismatch("concentration_check: sizes of graph, chain and K differ");
    auto report = validate_config(g, s.config, chain.kind);
    if (!report.ok()) throw ChainMismatch("configuration does not realize the " + std::string(chain_kind_name(chain.kind)) +
                                          " chain: " + report.summary());
    const double t = static_cast<double>(s.t);
    ConcentrationResult res;
    res.max_residual = -std::numeric_limits<double>::infinity();
    for (vertex v = 0; v < g.n(); ++v) {
        const double r = std::abs(chain.pi(v) - static_cast<double>(s.visits[v]) / t) * t - K(v) * chain.pi(v);
        if (r > res.max_residual) {
            res.max_residual = r;
            res.worst = v;
        }
    }
    return res;
}

}  // namespace rotorlab
