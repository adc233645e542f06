#include "polyshrink/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "polyshrink/risk.hpp"
#include "polyshrink/rng.hpp"

namespace polyshrink::mc {

using estimators::ShrinkagePolynomial;

void SimulationPlan::validate() const {
    if (p < 1) {
        throw DomainViolation("SimulationPlan: p must be >= 1");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainViolation("SimulationPlan: lambda must be finite and >= 0");
    }
    if (!(omega >= 0.0) || !(omega < 1.0)) {
        throw DomainViolation("SimulationPlan: omega must be in [0, 1)");
    }
    if (replications < 1) {
        throw DomainViolation("SimulationPlan: replications must be >= 1");
    }
    if (chunk_size < 1) {
        throw DomainViolation("SimulationPlan: chunk_size must be >= 1");
    }
}

namespace {

struct ChunkSums {
    std::vector<double> sum;     // per estimator
    std::vector<double> sum_sq;  // per estimator
};

// One chunk of replications, fully determined by (plan.seed XOR chunk_index).
void run_chunk(const SimulationPlan& plan, std::span<const double> theta,
               std::uint64_t chunk_index, std::int64_t count, ChunkSums& out) {
    const std::size_t n_est = plan.estimators.size();
    const int p = plan.p;
    out.sum.assign(n_est, 0.0);
    out.sum_sq.assign(n_est, 0.0);
    rng::NormalSampler normals(plan.seed ^ chunk_index);
    const risk::BalancedLoss loss{plan.omega};
    std::vector<double> x(p), delta(p);
    for (std::int64_t rep = 0; rep < count; ++rep) {
        for (int i = 0; i < p; ++i) {
            x[i] = theta[i] + normals.next();
        }
        for (std::size_t e = 0; e < n_est; ++e) {
            estimators::estimate_into(plan.estimators[e], x, delta);
            const double value = risk::balanced_loss(loss, delta, x, theta);
            out.sum[e] += value;
            out.sum_sq[e] += value * value;
        }
    }
}

}  // namespace

std::vector<McEstimate> simulate_risk_at(const SimulationPlan& plan,
                                         std::span<const double> theta) {
    plan.validate();
    if (theta.size() != static_cast<std::size_t>(plan.p)) {
        throw LengthMismatch("simulate_risk_at: |theta| = " +
                             std::to_string(theta.size()) + " but p = " +
                             std::to_string(plan.p));
    }
    const std::size_t n_est = plan.estimators.size();
    if (n_est == 0) {
        return {};
    }
    const std::int64_t n = plan.replications;
    const std::int64_t chunk = plan.chunk_size;
    const std::int64_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<ChunkSums> partials(static_cast<std::size_t>(n_chunks));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chunks));

    auto work = [&](std::int64_t c) {
        const std::int64_t count = std::min(chunk, n - c * chunk);
        try {
            run_chunk(plan, theta, static_cast<std::uint64_t>(c), count,
                      partials[static_cast<std::size_t>(c)]);
        } catch (...) {
            errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
    };

    const unsigned hw = std::thread::hardware_concurrency();
    const std::int64_t n_workers =
        std::min<std::int64_t>(n_chunks, hw == 0 ? 1 : hw);
    if (n_workers <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) {
            work(c);
        }
    } else {
        std::atomic<std::int64_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(n_workers));
        for (std::int64_t t = 0; t < n_workers; ++t) {
            workers.emplace_back([&] {
                for (std::int64_t c = next.fetch_add(1); c < n_chunks;
                     c = next.fetch_add(1)) {
                    work(c);
                }
            });
        }
        for (auto& w : workers) {
            w.join();
        }
    }
    for (auto& err : errors) {  // surface the lowest-index failure
        if (err) {
            std::rethrow_exception(err);
        }
    }

    // Order-fixed reduction over chunks keeps results independent of the
    // thread schedule.
    std::vector<McEstimate> results(n_est);
    for (std::size_t e = 0; e < n_est; ++e) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::int64_t c = 0; c < n_chunks; ++c) {
            sum += partials[static_cast<std::size_t>(c)].sum[e];
            sum_sq += partials[static_cast<std::size_t>(c)].sum_sq[e];
        }
        const double mean = sum / static_cast<double>(n);
        double std_error = 0.0;
        if (n > 1) {
            const double var =
                (sum_sq - static_cast<double>(n) * mean * mean) /
                static_cast<double>(n - 1);
            std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
        }
        results[e] = McEstimate{mean, std_error, n};
    }
    return results;
}

std::vector<McEstimate> simulate_risk(const SimulationPlan& plan) {
    plan.validate();
    std::vector<double> theta(static_cast<std::size_t>(plan.p), 0.0);
    theta[0] = std::sqrt(plan.lambda);
    return simulate_risk_at(plan, theta);
}

bool rotation_invariance_check(int p, double lambda, double omega,
                               const ShrinkagePolynomial& est,
                               std::uint64_t seed, std::int64_t replications) {
    SimulationPlan plan;
    plan.p = p;
    plan.lambda = lambda;
    plan.omega = omega;
    plan.estimators = {est};
    plan.replications = replications;
    plan.seed = seed;
    plan.validate();

    std::vector<double> axis(static_cast<std::size_t>(p), 0.0);
    axis[0] = std::sqrt(lambda);
    const McEstimate along_axis = simulate_risk_at(plan, axis)[0];

    // Random unit direction from a stream decoupled from the draw stream.
    rng::NormalSampler direction(seed ^ 0xd1b54a32d192ed03ULL);
    std::vector<double> rotated(static_cast<std::size_t>(p));
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (auto& component : rotated) {
            component = direction.next();
            norm_sq += component * component;
        }
    } while (norm_sq == 0.0);
    const double scale = std::sqrt(lambda / norm_sq);
    for (auto& component : rotated) {
        component *= scale;
    }
    const McEstimate off_axis = simulate_risk_at(plan, rotated)[0];

    const double combined = std::sqrt(along_axis.std_error * along_axis.std_error +
                                      off_axis.std_error * off_axis.std_error);
    return std::abs(along_axis.mean - off_axis.mean) <= 5.0 * combined;
}

}  // namespace polyshrink::mc
