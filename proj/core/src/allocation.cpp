#include "scenrisk/allocation.hpp"

#include "scenrisk/errors.hpp"
#include "scenrisk/random.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace scenrisk {

namespace {

AdaptedProcess aggregate(const RiskMeasureSpec& spec, const std::vector<AdaptedProcess>& positions,
                         const std::vector<double>* weights = nullptr) {
    auto total = AdaptedProcess::constant(spec.tree(), 0.0);
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if (weights) {
            total += (*weights)[j] * positions[j];
        } else {
            total += positions[j];
        }
    }
    return total;
}

void check_inputs(const RiskMeasureSpec& spec, const std::vector<AdaptedProcess>& positions) {
    if (!spec.coherent()) {
        throw ValidationError("allocate: spec is not coherent");
    }
    if (positions.empty()) {
        throw ValidationError("allocate: no positions");
    }
    for (const auto& x : positions) require_same_tree(spec.tree(), x.tree());
}

} // namespace

AllocationResult allocate_with(const RiskMeasureSpec& spec, const std::vector<AdaptedProcess>& positions,
                               std::size_t maximizer) {
    check_inputs(spec, positions);
    const auto ev = rho_eval(spec, aggregate(spec, positions));
    if (std::find(ev.argmax.begin(), ev.argmax.end(), maximizer) == ev.argmax.end()) {
        throw ValidationError(fmt::format("allocate: element {} does not attain rho at the aggregate", maximizer));
    }
    AllocationResult r;
    r.maximizer = maximizer;
    r.rho_total = ev.value;
    r.tied_maximizers = ev.argmax;
    const auto& a = spec[maximizer].measure;
    for (const auto& x : positions) {
        r.k.push_back(-pairing(x, a));
        r.allocation_sum += r.k.back();
    }
    return r;
}

AllocationResult allocate(const RiskMeasureSpec& spec, const std::vector<AdaptedProcess>& positions) {
    check_inputs(spec, positions);
    const auto ev = rho_eval(spec, aggregate(spec, positions));
    return allocate_with(spec, positions, ev.argmax.front());
}

FairnessCertificate fairness_check(const AllocationResult& result, const RiskMeasureSpec& spec,
                                   const std::vector<AdaptedProcess>& positions, std::size_t samples,
                                   std::uint64_t seed) {
    check_inputs(spec, positions);
    if (result.k.size() != positions.size() || result.maximizer >= spec.size()) {
        throw ValidationError("fairness_check: allocation does not match the positions");
    }
    const auto& a = spec[result.maximizer].measure;
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if (std::abs(result.k[j] + pairing(positions[j], a)) > kFairnessTol) {
            throw ValidationError(fmt::format("fairness_check: k[{}] was not produced from these inputs", j));
        }
    }

    const std::size_t n = positions.size();
    std::vector<std::vector<double>> alphas;
    alphas.reserve(samples + n + 1);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        alphas.push_back(std::move(e));
    }
    alphas.emplace_back(n, 1.0);
    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<double> w(n);
        for (auto& v : w) v = rng.uniform();
        alphas.push_back(std::move(w));
    }

    FairnessCertificate cert;
    cert.worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& w : alphas) {
        const auto mix = aggregate(spec, positions, &w);
        double claimed = 0.0;
        for (std::size_t j = 0; j < n; ++j) claimed += w[j] * result.k[j];
        const double slack = rho(spec, mix) - claimed;
        if (slack < cert.worst_slack) {
            cert.worst_slack = slack;
            cert.worst_alpha = w;
        }
        cert.witness_error = std::max(cert.witness_error, std::abs(claimed + pairing(mix, a)));
        ++cert.checks;
    }
    cert.passed = cert.worst_slack >= -kFairnessTol;
    return cert;
}

} // namespace scenrisk
