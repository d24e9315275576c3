#pragma once

// Seeded synthetic signals and the Monte Carlo calibration experiment:
// draw x ~ N(0, (L + eps I)^-1), observe with noise, estimate with the
// posterior mean, and compare per-node squared error with posterior variance.

#include <cstdint>
#include <optional>
#include <string>

#include "graphbayes/belief.hpp"
#include "graphbayes/random.hpp"

namespace graphbayes {

/// x = V (Lambda + eps I)^{-1/2} xi with xi standard normal. Requires eps > 0.
Vector draw_prior_signal(const Spectrum& spectrum, double eps, RandomStream& rng);

/// S^T x + sqrt(sigma2) eta. Without a sampling operator every node is observed.
Vector observe(const Vector& x, double sigma2, const std::optional<SamplingOperator>& sampling,
               RandomStream& rng);

struct ExperimentConfig {
    Graph graph;
    double eps = 1e-6;
    double sigma2 = 3.0;
    int trials = 100;
    std::uint64_t seed = 0;
    std::optional<SamplingOperator> sampling;
};

struct ExperimentReport {
    Vector mse;       // per-node mean squared error over trials
    Vector variance;  // posterior variance per node (kInfinity where unbounded)
    int trials = 0;
    std::uint64_t seed = 0;
    double eps = 0.0;
    double sigma2 = 0.0;

    /// mse / variance per node (NaN where variance is infinite or zero).
    Vector ratio() const;
    double median_ratio() const;
    /// Fraction of nodes with |mse / variance - 1| <= rel_tol.
    double fraction_within(double rel_tol) const;
};

/// Trials are split into fixed chunks that may run on several threads; the
/// chunk sums are combined in chunk order, so the report is bit-identical for
/// a given config regardless of thread count.
ExperimentReport run_calibration(const ExperimentConfig& config, int threads = 0);

/// CSV `node,variance,mse,ratio` preceded by a `# eps=... sigma2=... trials=... seed=...`
/// comment line.
std::string format_report_csv(const ExperimentReport& report);

}  // namespace graphbayes
