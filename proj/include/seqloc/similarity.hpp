#pragma once

#include <optional>
#include <utility>

#include "seqloc/types.hpp"

namespace seqloc {

// Shift applied to raw RSS (dBm) before the cosine baseline so that all
// components are non-negative and cosine behaves as a similarity.
inline constexpr double kRssShiftDb = 100.0;

// Kendall rank correlation between two permutations of the same id set,
// in [-1, 1]. Pair enumeration is O(n^2); sequences here are at most a few
// dozen APs long, so merge-sort counting is not worth the code.
// Throws DomainError if the id sets differ or n < 2.
double kendall_tau(const ApSequence& a, const ApSequence& b);

// (1 + tau) / 2, in [0, 1]. Same preconditions as kendall_tau.
double rank_similarity(const ApSequence& a, const ApSequence& b);

// Restricts both sequences to the ids they share, preserving relative order.
// Returns nullopt when fewer than min_common ids overlap; callers skip the
// observation in that case.
std::optional<std::pair<ApSequence, ApSequence>> align_common(
    const ApSequence& a, const ApSequence& b, std::size_t min_common = 2);

// Cosine similarity over the readings common to both vectors, after shifting
// each RSS by +kRssShiftDb, clamped to [0, 1]. Returns nullopt when fewer
// than min_common ids are shared or a shifted vector has zero magnitude.
std::optional<double> cosine_similarity(const RssVector& a, const RssVector& b,
                                        std::size_t min_common = 2);

}  // namespace seqloc
