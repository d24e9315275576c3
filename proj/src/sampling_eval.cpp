#include "graphbayes/sampling_eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace graphbayes {

CovarianceMetric parse_metric(std::string_view name) {
    if (name == "trace") return CovarianceMetric::trace;
    if (name == "logdet") return CovarianceMetric::logdet;
    if (name == "maxeig" || name == "max_eig") return CovarianceMetric::max_eig;
    throw std::invalid_argument("unknown metric: " + std::string(name));
}

std::string_view metric_name(CovarianceMetric metric) {
    switch (metric) {
        case CovarianceMetric::trace: return "trace";
        case CovarianceMetric::logdet: return "logdet";
        case CovarianceMetric::max_eig: return "maxeig";
    }
    return "?";
}

namespace {

// Relative slack so that values equal up to rounding count as ties.
bool clearly_less(double a, double b) {
    if (a == b) return false;
    if (std::isinf(a) || std::isinf(b)) return a < b;
    return a < b - 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

bool MetricValue::better_than(const MetricValue& other) const {
    if (std::isinf(value) && value < 0 && std::isinf(other.value) && other.value < 0) {
        if (zero_directions != other.zero_directions) return zero_directions > other.zero_directions;
        return clearly_less(finite_part, other.finite_part);
    }
    return clearly_less(value, other.value);
}

MetricValue covariance_metric(const PosteriorSummary& ps, CovarianceMetric metric) {
    MetricValue out;
    out.zero_directions = ps.zero_rank();
    if (!ps.unique_mean()) {
        out.value = kInfinity;
        out.finite_part = kInfinity;
        return out;
    }
    switch (metric) {
        case CovarianceMetric::trace:
            out.value = ps.cov_values.sum();
            break;
        case CovarianceMetric::max_eig:
            out.value = ps.cov_values.size() > 0 ? ps.cov_values.maxCoeff() : 0.0;
            break;
        case CovarianceMetric::logdet:
            out.finite_part = ps.cov_values.array().log().sum();
            out.value = ps.zero_rank() > 0 ? -kInfinity : out.finite_part;
            break;
    }
    if (metric != CovarianceMetric::logdet) out.finite_part = out.value;
    return out;
}

PosteriorSummary sampling_posterior(const GaussianBelief& prior, const SamplingOperator& nodes,
                                    double sigma2) {
    return fuse(prior, partial_observation(nodes, Vector::Zero(nodes.size()), sigma2));
}

SamplingOperator greedy_select(const GaussianBelief& prior, int budget, double sigma2,
                               CovarianceMetric metric) {
    const int n = prior.dimension();
    if (budget < 1 || budget > n) {
        throw std::invalid_argument("budget must lie in [1, " + std::to_string(n) + "]");
    }
    SamplingOperator selected(n, {});
    for (int round = 0; round < budget; ++round) {
        int best_node = -1;
        MetricValue best;
        for (NodeId candidate = 0; candidate < n; ++candidate) {
            if (selected.contains(candidate)) continue;
            const MetricValue value =
                covariance_metric(sampling_posterior(prior, selected.with(candidate), sigma2), metric);
            if (best_node < 0 || value.better_than(best)) {
                best_node = candidate;
                best = value;
            }
        }
        selected = selected.with(best_node);
    }
    return selected;
}

}  // namespace graphbayes
