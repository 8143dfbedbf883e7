#pragma once

#include <cstdint>
#include <vector>

namespace treeg {

double accuracy(const std::vector<int>& labels, const std::vector<int>& predictions);
double mean_squared_error_of(const std::vector<double>& targets,
                             const std::vector<double>& predictions);
double variance_of(const std::vector<double>& values);

// Assigns each example a fold id in [0, k). Class-stratified: within each
// class (indices in ascending order) the examples are shuffled with a seed
// derived from `seed` and the class id, then dealt round-robin, so every fold
// receives an equal share of each class up to rounding. Throws
// std::invalid_argument if some class has fewer than k examples.
std::vector<int> stratified_fold_assignment(const std::vector<int>& labels, int k,
                                            std::uint64_t seed);

// Unstratified variant for regression targets: one shuffle of all indices,
// dealt round-robin.
std::vector<int> fold_assignment(std::size_t count, int k, std::uint64_t seed);

}  // namespace treeg
