#include "graphbayes/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "graphbayes/inference.hpp"
#include "graphbayes/signal_io.hpp"

namespace graphbayes {

Vector draw_prior_signal(const Spectrum& spectrum, double eps, RandomStream& rng) {
    if (!(eps > 0.0)) throw std::invalid_argument("drawing from the prior requires eps > 0");
    const Vector xi = rng.normal_vector(spectrum.size());
    const Vector scale = (spectrum.eigenvalues.array() + eps).max(eps).rsqrt();
    return spectrum.basis * scale.cwiseProduct(xi);
}

Vector observe(const Vector& x, double sigma2, const std::optional<SamplingOperator>& sampling,
               RandomStream& rng) {
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("sigma2 must be non-negative");
    Vector clean = sampling ? sampling->restrict(x) : x;
    if (sigma2 == 0.0) return clean;
    return clean + std::sqrt(sigma2) * rng.normal_vector(static_cast<int>(clean.size()));
}

namespace {

constexpr int kChunkSize = 32;

// Linear map from observed samples to posterior mean (the prior mean is 0,
// so the estimate has no offset).
Matrix estimator_gain(const GaussianBelief& prior, const SamplingOperator& sampling, double sigma2,
                      const PosteriorSummary& posterior) {
    if (sigma2 > 0.0) {
        return posterior_covariance(posterior) * sampling.matrix() / sigma2;
    }
    Matrix gain(prior.dimension(), sampling.size());
    for (int j = 0; j < sampling.size(); ++j) {
        const Vector unit = Vector::Unit(sampling.size(), j);
        gain.col(j) = fuse(prior, partial_observation(sampling, unit, 0.0)).mean;
    }
    return gain;
}

}  // namespace

ExperimentReport run_calibration(const ExperimentConfig& config, int threads) {
    if (config.trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (!(config.eps > 0.0)) throw std::invalid_argument("calibration requires eps > 0");
    if (!(config.sigma2 >= 0.0)) throw std::invalid_argument("sigma2 must be non-negative");

    const int n = config.graph.node_count();
    const Matrix lap = laplacian(config.graph);
    const Spectrum spectrum = spectral_decomposition(lap);
    const SamplingOperator sampling = config.sampling ? *config.sampling : SamplingOperator::all(n);
    if (sampling.dimension() != n) throw DimensionError("sampling set dimension mismatch");

    const GaussianBelief prior = smoothness_prior(lap, config.eps);
    const PosteriorSummary posterior =
        fuse(prior, partial_observation(sampling, Vector::Zero(sampling.size()), config.sigma2));
    const Matrix gain = estimator_gain(prior, sampling, config.sigma2, posterior);

    const int chunks = (config.trials + kChunkSize - 1) / kChunkSize;
    std::vector<Vector> chunk_sums(chunks, Vector::Zero(n));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int c = next++; c < chunks; c = next++) {
            const int begin = c * kChunkSize;
            const int end = std::min(config.trials, begin + kChunkSize);
            Vector& acc = chunk_sums[c];
            for (int t = begin; t < end; ++t) {
                RandomStream rng(config.seed, static_cast<std::uint64_t>(t));
                const Vector x = draw_prior_signal(spectrum, config.eps, rng);
                const Vector observed = observe(x, config.sigma2, sampling, rng);
                acc += (gain * observed - x).cwiseAbs2();
            }
        }
    };
    int thread_count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    thread_count = std::clamp(thread_count, 1, chunks);
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    }

    ExperimentReport report;
    report.mse = Vector::Zero(n);
    for (const Vector& s : chunk_sums) report.mse += s;
    report.mse /= static_cast<double>(config.trials);
    report.variance = node_variances(posterior);
    report.trials = config.trials;
    report.seed = config.seed;
    report.eps = config.eps;
    report.sigma2 = config.sigma2;
    return report;
}

Vector ExperimentReport::ratio() const {
    Vector out(mse.size());
    for (Eigen::Index i = 0; i < mse.size(); ++i) {
        const double v = variance[i];
        out[i] = (std::isfinite(v) && v > 0.0) ? mse[i] / v : std::nan("");
    }
    return out;
}

double ExperimentReport::median_ratio() const {
    const Vector r = ratio();
    std::vector<double> values;
    for (double v : r) {
        if (!std::isnan(v)) values.push_back(v);
    }
    if (values.empty()) return std::nan("");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double ExperimentReport::fraction_within(double rel_tol) const {
    const Vector r = ratio();
    if (r.size() == 0) return 0.0;
    int hits = 0;
    for (double v : r) {
        if (!std::isnan(v) && std::abs(v - 1.0) <= rel_tol) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(r.size());
}

std::string format_report_csv(const ExperimentReport& report) {
    std::string out = fmt::format("# eps={} sigma2={} trials={} seed={}\n", format_number(report.eps),
                                  format_number(report.sigma2), report.trials, report.seed);
    out += "node,variance,mse,ratio\n";
    const Vector r = report.ratio();
    for (Eigen::Index i = 0; i < report.mse.size(); ++i) {
        out += fmt::format("{},{},{},{}\n", i, format_number(report.variance[i]),
                           format_number(report.mse[i]), format_number(r[i]));
    }
    return out;
}

}  // namespace graphbayes
