#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "rotorlab/graph.hpp"
#include "rotorlab/walk.hpp"

namespace rotorlab {

enum class CoverMode { vertex_cover, edge_cover };

inline std::string_view cover_mode_name(CoverMode m) { return m == CoverMode::vertex_cover ? "vertex_cover" : "edge_cover"; }

/// splitmix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct McResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t completed = 0;
    std::size_t cap_exceeded = 0;
    std::vector<std::uint64_t> samples;
};

/// One random-walk cover run; returns kNever when the cap is hit.
inline std::uint64_t random_walk_cover(const Graph& g, vertex start, CoverMode mode, std::mt19937_64& rng,
                                       std::uint64_t cap) {
    std::vector<std::uint8_t> seen_v(g.n(), 0), seen_e(mode == CoverMode::edge_cover ? g.m() : 0, 0);
    std::size_t left = mode == CoverMode::vertex_cover ? g.n() - 1 : g.m();
    seen_v[start] = 1;
    const bool weighted = g.is_weighted();
    vertex u = start;
    for (std::uint64_t t = 1; t <= cap; ++t) {
        if (left == 0) return t - 1;
        std::size_t i = 0;
        if (!weighted) {
            i = std::uniform_int_distribution<std::size_t>(0, g.degree(u) - 1)(rng);
        } else {
            auto wt = g.neighbor_weights(u);
            std::uint64_t r = std::uniform_int_distribution<std::uint64_t>(0, g.weighted_degree(u) - 1)(rng);
            while (r >= wt[i]) r -= wt[i++];
        }
        const std::size_t arc = g.arc_offset(u) + i;
        const vertex v = g.arc_target(arc);
        if (mode == CoverMode::vertex_cover) {
            if (!seen_v[v]) {
                seen_v[v] = 1;
                --left;
            }
        } else {
            const std::size_t e = g.arc_edge(arc);
            if (!seen_e[e]) {
                seen_e[e] = 1;
                --left;
            }
        }
        u = v;
    }
    return left == 0 ? cap : kNever;
}

/// Mean cover time of the random walk from `start` over `trials` runs. Trial i uses
/// the generator seeded with mix_seed(seed, i), so any subset of trials can be replayed.
inline McResult mc_random_walk(const Graph& g, vertex start, CoverMode mode, std::size_t trials, std::uint64_t seed,
                               std::uint64_t cap = 0) {
    if (trials == 0) throw InvalidParameters("trials must be >= 1");
    if (start >= g.n()) throw InvalidParameters("start vertex out of range");
    if (cap == 0) cap = default_step_cap(g);
    McResult res;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        std::mt19937_64 rng(mix_seed(seed, i));
        const std::uint64_t steps = random_walk_cover(g, start, mode, rng, cap);
        if (steps == kNever) {
            ++res.cap_exceeded;
            continue;
        }
        res.samples.push_back(steps);
        sum += static_cast<double>(steps);
        sum_sq += static_cast<double>(steps) * static_cast<double>(steps);
    }
    res.completed = res.samples.size();
    if (res.completed > 0) {
        const double k = static_cast<double>(res.completed);
        res.mean = sum / k;
        if (res.completed > 1) {
            const double var = std::max(0.0, (sum_sq - k * res.mean * res.mean) / (k - 1.0));
            res.stderr_ = std::sqrt(var / k);
        }
    }
    return res;
}

/// Mean first-hitting time of `target` from `start` for the random walk.
inline McResult mc_hitting_time(const Graph& g, vertex start, vertex target, std::size_t trials, std::uint64_t seed,
                                std::uint64_t cap = 0) {
    if (cap == 0) cap = default_step_cap(g);
    McResult res;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        std::mt19937_64 rng(mix_seed(seed, i));
        vertex u = start;
        std::uint64_t t = 0;
        while (u != target && t < cap) {
            auto nb = g.neighbors(u);
            u = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
            ++t;
        }
        if (u != target) {
            ++res.cap_exceeded;
            continue;
        }
        res.samples.push_back(t);
        sum += static_cast<double>(t);
        sum_sq += static_cast<double>(t) * static_cast<double>(t);
    }
    res.completed = res.samples.size();
    if (res.completed > 0) {
        const double k = static_cast<double>(res.completed);
        res.mean = sum / k;
        if (res.completed > 1) res.stderr_ = std::sqrt(std::max(0.0, (sum_sq - k * res.mean * res.mean) / (k - 1.0)) / k);
    }
    return res;
}

}  // namespace rotorlab
