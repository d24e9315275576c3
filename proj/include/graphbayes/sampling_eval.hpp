#pragma once

// Scalar summaries of posterior covariance and greedy sampling-set selection.

#include <string_view>

#include "graphbayes/inference.hpp"

namespace graphbayes {

enum class CovarianceMetric { trace, logdet, max_eig };

CovarianceMetric parse_metric(std::string_view name);
std::string_view metric_name(CovarianceMetric metric);

/// Metric value in [-inf, inf]. `value` is +inf when some direction has
/// infinite variance. For logdet, zero-variance (constrained) directions
/// make the value -inf; `zero_directions` counts them and `finite_part`
/// holds the log-determinant over the finite block.
struct MetricValue {
    double value = 0.0;
    int zero_directions = 0;
    double finite_part = 0.0;

    /// Strict ordering used by selection: smaller is better.
    bool better_than(const MetricValue& other) const;
};

MetricValue covariance_metric(const PosteriorSummary& ps, CovarianceMetric metric);

/// Posterior of `prior` fused with observations of `nodes` at noise sigma2.
/// The covariance does not depend on observed values, so zeros are used.
PosteriorSummary sampling_posterior(const GaussianBelief& prior, const SamplingOperator& nodes,
                                    double sigma2);

/// Greedily add the node whose observation minimizes the metric; ties go to
/// the lowest node id. Returns nodes in selection order.
SamplingOperator greedy_select(const GaussianBelief& prior, int budget, double sigma2,
                               CovarianceMetric metric);

}  // namespace graphbayes
