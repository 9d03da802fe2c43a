#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simplab/int_matrix.hpp"

namespace simplab {

enum class Algorithm { PermNaive, PermExpand, PermSubsetDp, PermRyser, DetCofactor, DetElimination };

/// Identifier used in CSV output, e.g. "perm_ryser".
std::string_view algorithm_id(Algorithm a) noexcept;
/// Accepts identifiers with '_' or '-' separators.
std::optional<Algorithm> parse_algorithm(std::string_view id);
/// Largest n the algorithm accepts; unbounded algorithms report SIZE_MAX.
std::size_t algorithm_limit(Algorithm a) noexcept;
bool computes_permanent(Algorithm a) noexcept;

/// Runs the algorithm (expansions along row 1).
Integer run_algorithm(Algorithm a, const IntMatrix& m);

/// Value reduced into [0, kEquivalencePrime).
std::uint64_t digest(const Integer& value);

/// The matrix benchmarked for size n under `seed`: entries uniform in [-9, 9].
IntMatrix bench_matrix(std::size_t n, std::uint64_t seed);

struct BenchRecord {
    std::string algorithm;
    std::size_t n = 0;
    std::size_t rep = 0;
    double wall_seconds = 0.0;
    std::uint64_t digest = 0;
};

/// Times `reps` evaluations per size with a monotonic clock, sizes in the
/// given order, one algorithm at a time on the calling thread. Every size is
/// checked against the algorithm's limit before anything runs (GuardError).
/// A digest that changes between repetitions throws ConsistencyError.
std::vector<BenchRecord> bench(Algorithm algorithm, std::span<const std::size_t> sizes,
                               std::size_t reps, std::uint64_t seed);

/// Median wall time per size, in order of first appearance.
std::vector<std::pair<std::size_t, double>> median_seconds(std::span<const BenchRecord> records);

/// Ratios of consecutive medians: t(n_{i+1}) / t(n_i).
std::vector<double> consecutive_ratios(std::span<const BenchRecord> records);

inline constexpr std::string_view kBenchCsvHeader = "algorithm,n,rep,wall_seconds,digest";

/// Header line plus one line per record.
std::string bench_csv(std::span<const BenchRecord> records);

}  // namespace simplab
