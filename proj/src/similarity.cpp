#include "seqloc/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace seqloc {

namespace {

std::unordered_map<ApId, std::size_t> rank_of(const ApSequence& s) {
  std::unordered_map<ApId, std::size_t> ranks;
  ranks.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!ranks.emplace(s[i], i).second) {
      throw DomainError("duplicate ap id " + std::to_string(s[i]) + " in sequence");
    }
  }
  return ranks;
}

}  // namespace

double kendall_tau(const ApSequence& a, const ApSequence& b) {
  const std::size_t n = a.size();
  if (n < 2) {
    throw DomainError("kendall_tau needs at least 2 ids, got " + std::to_string(n));
  }
  if (b.size() != n) {
    throw DomainError("kendall_tau sequences differ in length");
  }
  const auto rank_b = rank_of(b);

  long long concordant = 0;
  long long discordant = 0;
  std::vector<std::size_t> pos_b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = rank_b.find(a[i]);
    if (it == rank_b.end()) {
      throw DomainError("id sets differ: " + std::to_string(a[i]) + " missing; align first");
    }
    pos_b[i] = it->second;
  }
  // Pairs are indexed by position in a, so a's rank order is fixed ascending
  // and a pair is concordant exactly when b preserves it.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (pos_b[i] < pos_b[j]) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(concordant - discordant) / pairs;
}

double rank_similarity(const ApSequence& a, const ApSequence& b) {
  return 0.5 * (1.0 + kendall_tau(a, b));
}

std::optional<std::pair<ApSequence, ApSequence>> align_common(
    const ApSequence& a, const ApSequence& b, std::size_t min_common) {
  std::unordered_set<ApId> in_b(b.begin(), b.end());
  ApSequence ra;
  ra.reserve(std::min(a.size(), b.size()));
  for (ApId id : a) {
    if (in_b.count(id)) ra.push_back(id);
  }
  if (ra.size() < min_common) return std::nullopt;

  std::unordered_set<ApId> common(ra.begin(), ra.end());
  ApSequence rb;
  rb.reserve(ra.size());
  for (ApId id : b) {
    if (common.count(id)) rb.push_back(id);
  }
  return std::make_pair(std::move(ra), std::move(rb));
}

std::optional<double> cosine_similarity(const RssVector& a, const RssVector& b,
                                        std::size_t min_common) {
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  std::size_t common = 0;
  // Readings are sorted by ap_id, so a single merge pass finds the overlap.
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].ap_id < b[j].ap_id) {
      ++i;
    } else if (b[j].ap_id < a[i].ap_id) {
      ++j;
    } else {
      const double va = a[i].rss_dbm + kRssShiftDb;
      const double vb = b[j].rss_dbm + kRssShiftDb;
      dot += va * vb;
      norm_a += va * va;
      norm_b += vb * vb;
      ++common;
      ++i;
      ++j;
    }
  }
  if (common < std::max<std::size_t>(min_common, 2)) return std::nullopt;
  if (norm_a <= 0.0 || norm_b <= 0.0) return std::nullopt;
  const double c = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace seqloc
