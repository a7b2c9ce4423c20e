#include "sbomaudit/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sbomaudit/errors.hpp"

namespace sbomaudit {
namespace {

std::size_t stratum_sample_size(double rate, std::size_t population) {
    if (population == 0) return 0;
    auto proportional =
        static_cast<std::size_t>(std::floor(rate * static_cast<double>(population)));
    return std::max<std::size_t>(std::size_t{1}, std::min(proportional, population));
}

std::mt19937_64 stratum_generator(std::uint64_t seed, int year) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(year)};
    return std::mt19937_64(seq);
}

// Unbiased bounded draw via rejection; avoids std::uniform_int_distribution,
// whose output is not specified identically across standard libraries.
std::size_t draw_below(std::mt19937_64& gen, std::size_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t value = gen();
    while (value >= limit) value = gen();
    return static_cast<std::size_t>(value % bound);
}

void check_rate(double rate) {
    if (!(rate > 0.0) || rate > 1.0) {
        fail(ErrorKind::invalid_argument,
             "sampling rate must be in (0, 1], got " + std::to_string(rate));
    }
}

}  // namespace

SamplePlan make_sample_plan(const std::vector<ReleaseRecord>& releases, double rate,
                            std::uint64_t seed) {
    check_rate(rate);
    SamplePlan plan;
    plan.rate = rate;
    plan.seed = seed;
    for (const auto& release : releases) {
        plan.per_year_counts[release.year].first += 1;
    }
    for (auto& [year, counts] : plan.per_year_counts) {
        counts.second = stratum_sample_size(rate, counts.first);
    }
    return plan;
}

std::vector<ReleaseRecord> stratified_sample(const std::vector<ReleaseRecord>& releases,
                                             double rate, std::uint64_t seed) {
    check_rate(rate);
    std::map<int, std::vector<ReleaseRecord>> strata;
    for (const auto& release : releases) {
        strata[release.year].push_back(release);
    }

    std::vector<ReleaseRecord> sampled;
    for (auto& [year, stratum] : strata) {
        // Sort so selection depends on the stratum's contents, not input order.
        std::sort(stratum.begin(), stratum.end(),
                  [](const ReleaseRecord& a, const ReleaseRecord& b) {
                      return a.gav.text() < b.gav.text();
                  });
        auto take = stratum_sample_size(rate, stratum.size());
        auto gen = stratum_generator(seed, year);
        // Partial Fisher-Yates: after i swaps, the first i slots hold the sample.
        for (std::size_t i = 0; i < take; ++i) {
            auto j = i + draw_below(gen, stratum.size() - i);
            std::swap(stratum[i], stratum[j]);
        }
        std::sort(stratum.begin(), stratum.begin() + static_cast<std::ptrdiff_t>(take),
                  [](const ReleaseRecord& a, const ReleaseRecord& b) {
                      return a.gav.text() < b.gav.text();
                  });
        sampled.insert(sampled.end(), stratum.begin(),
                       stratum.begin() + static_cast<std::ptrdiff_t>(take));
    }
    return sampled;  // strata map iterates in year order, so (year, id) order holds
}

}  // namespace sbomaudit
