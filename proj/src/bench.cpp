#include "simplab/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>

#include "simplab/determinant.hpp"
#include "simplab/errors.hpp"
#include "simplab/permanent.hpp"

namespace simplab {

namespace {

struct AlgorithmInfo {
    Algorithm algorithm;
    std::string_view id;
    std::size_t limit;
    bool permanent;
};

constexpr AlgorithmInfo kAlgorithms[] = {
    {Algorithm::PermNaive, "perm_naive", kPermNaiveLimit, true},
    {Algorithm::PermExpand, "perm_expand", kPermExpandLimit, true},
    {Algorithm::PermSubsetDp, "perm_subset_dp", kPermSubsetDpLimit, true},
    {Algorithm::PermRyser, "perm_ryser", kPermRyserLimit, true},
    {Algorithm::DetCofactor, "det_cofactor", kDetCofactorLimit, false},
    {Algorithm::DetElimination, "det_elimination", std::numeric_limits<std::size_t>::max(), false},
};

const AlgorithmInfo& info(Algorithm a) {
    for (const auto& i : kAlgorithms) {
        if (i.algorithm == a) return i;
    }
    throw std::invalid_argument("unknown algorithm");
}

}  // namespace

std::string_view algorithm_id(Algorithm a) noexcept { return info(a).id; }

std::optional<Algorithm> parse_algorithm(std::string_view id) {
    std::string normalized(id);
    std::replace(normalized.begin(), normalized.end(), '-', '_');
    for (const auto& i : kAlgorithms) {
        if (i.id == normalized) return i.algorithm;
    }
    return std::nullopt;
}

std::size_t algorithm_limit(Algorithm a) noexcept { return info(a).limit; }
bool computes_permanent(Algorithm a) noexcept { return info(a).permanent; }

Integer run_algorithm(Algorithm a, const IntMatrix& m) {
    switch (a) {
        case Algorithm::PermNaive: return perm_naive(m);
        case Algorithm::PermExpand: return perm_expand(m, 1);
        case Algorithm::PermSubsetDp: return perm_subset_dp(m);
        case Algorithm::PermRyser: return perm_ryser(m);
        case Algorithm::DetCofactor: return det_cofactor(m, 1);
        case Algorithm::DetElimination: return det_elimination(m);
    }
    throw std::invalid_argument("unknown algorithm");
}

std::uint64_t digest(const Integer& value) {
    return mpz_fdiv_ui(value.get_mpz_t(), kEquivalencePrime);
}

IntMatrix bench_matrix(std::size_t n, std::uint64_t seed) {
    // Independent stream per size; splitmix64 of (seed, n).
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(n) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return IntMatrix::random(n, z, -9, 9);
}

std::vector<BenchRecord> bench(Algorithm algorithm, std::span<const std::size_t> sizes,
                               std::size_t reps, std::uint64_t seed) {
    if (reps == 0) throw std::invalid_argument("bench: reps must be at least 1");
    const std::size_t limit = algorithm_limit(algorithm);
    for (std::size_t n : sizes) {
        if (n == 0) throw std::invalid_argument("bench: sizes must be at least 1");
        if (n > limit) throw GuardError(std::string(algorithm_id(algorithm)), limit, n);
    }

    std::vector<BenchRecord> records;
    for (std::size_t n : sizes) {
        const IntMatrix m = bench_matrix(n, seed);
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            const Integer value = run_algorithm(algorithm, m);
            const auto stop = std::chrono::steady_clock::now();
            BenchRecord rec{std::string(algorithm_id(algorithm)), n, rep,
                            std::chrono::duration<double>(stop - start).count(), digest(value)};
            if (rep > 0 && rec.digest != records.back().digest) {
                throw ConsistencyError("bench: digest changed between repetitions");
            }
            records.push_back(std::move(rec));
        }
    }
    return records;
}

std::vector<std::pair<std::size_t, double>> median_seconds(std::span<const BenchRecord> records) {
    std::vector<std::pair<std::size_t, double>> out;
    std::vector<std::size_t> order;
    for (const auto& r : records) {
        if (std::find(order.begin(), order.end(), r.n) == order.end()) order.push_back(r.n);
    }
    for (std::size_t n : order) {
        std::vector<double> times;
        for (const auto& r : records) {
            if (r.n == n) times.push_back(r.wall_seconds);
        }
        std::sort(times.begin(), times.end());
        const std::size_t mid = times.size() / 2;
        const double median = times.size() % 2 == 1 ? times[mid] : (times[mid - 1] + times[mid]) / 2.0;
        out.emplace_back(n, median);
    }
    return out;
}

std::vector<double> consecutive_ratios(std::span<const BenchRecord> records) {
    const auto medians = median_seconds(records);
    std::vector<double> ratios;
    for (std::size_t i = 1; i < medians.size(); ++i) {
        ratios.push_back(medians[i].second / medians[i - 1].second);
    }
    return ratios;
}

std::string bench_csv(std::span<const BenchRecord> records) {
    std::string out(kBenchCsvHeader);
    out += '\n';
    char seconds[64];
    for (const auto& r : records) {
        std::snprintf(seconds, sizeof seconds, "%.9f", r.wall_seconds);
        out += r.algorithm + "," + std::to_string(r.n) + "," + std::to_string(r.rep) + "," + seconds +
               "," + std::to_string(r.digest) + "\n";
    }
    return out;
}

}  // namespace simplab
