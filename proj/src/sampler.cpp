#include "telehardy/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "telehardy/observables.hpp"

namespace telehardy {

namespace {

// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::size_t draw_cell(const std::array<double, 4>& cumulative, double u) {
    for (std::size_t c = 0; c < 4; ++c) {
        if (u < cumulative[c]) return c;
    }
    // u beyond the rounded total: fall back to the last cell that has mass.
    for (std::size_t c = 4; c-- > 0;) {
        if (cumulative[c] > (c == 0 ? 0.0 : cumulative[c - 1])) return c;
    }
    return 3;
}

}  // namespace

double shot_uniform(std::uint64_t seed, std::uint64_t k) {
    const std::uint64_t bits = mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ (k * 0x9e3779b97f4a7c15ULL + 1));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::array<double, 4> sampling_distribution(const StateVector& state, const RunConfig& cfg, double tol) {
    std::array<double, 4> p = joint_distribution(cfg.first, cfg.second, state, tol);
    for (double& v : p) {
        if (v < tol) v = 0.0;
    }
    return p;
}

CountTable sample(const StateVector& state, const RunConfig& cfg, double tol) {
    const std::array<double, 4> p = sampling_distribution(state, cfg, tol);
    const double total = p[0] + p[1] + p[2] + p[3];
    std::array<double, 4> cumulative{};
    double acc = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        acc += p[c] / total;
        cumulative[c] = acc;  // unchanged across a zero cell, so it can never be drawn
    }

    auto run = [&](std::uint64_t first, std::uint64_t last) {
        CountTable t;
        for (std::uint64_t k = first; k < last; ++k) ++t.counts[draw_cell(cumulative, shot_uniform(cfg.seed, k))];
        return t;
    };

    const unsigned workers = std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(std::max<std::uint64_t>(cfg.shots / 4096, 1))));
    if (workers == 1) return run(0, cfg.shots);

    std::vector<CountTable> parts(workers);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = cfg.shots / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t first = w * chunk;
        const std::uint64_t last = w + 1 == workers ? cfg.shots : first + chunk;
        pool.emplace_back([&, w, first, last] { parts[w] = run(first, last); });
    }
    for (auto& th : pool) th.join();
    CountTable out;
    for (const auto& part : parts) {
        for (std::size_t c = 0; c < 4; ++c) out.counts[c] += part.counts[c];
    }
    return out;
}

DeviationReport compare_frequencies(const CountTable& counts, const std::array<double, 4>& exact, double tol) {
    const std::uint64_t n = counts.total();
    if (n == 0) throw std::invalid_argument("compare_frequencies: empty count table");
    DeviationReport r;
    r.expected = exact;
    const double dn = static_cast<double>(n);
    for (std::size_t c = 0; c < 4; ++c) {
        const double p = exact[c];
        r.frequency[c] = static_cast<double>(counts.counts[c]) / dn;
        r.deviation[c] = r.frequency[c] - p;
        r.std_error[c] = std::sqrt(std::max(0.0, p * (1.0 - p)) / dn);
        if (p <= tol && counts.counts[c] > 0) r.impossible_cells.push_back(static_cast<int>(c));
        if (r.std_error[c] > 0.0) {
            r.z[c] = r.deviation[c] / r.std_error[c];
            r.max_abs_z = std::max(r.max_abs_z, std::abs(r.z[c]));
        }
    }
    return r;
}

}  // namespace telehardy
