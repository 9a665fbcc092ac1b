#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "seqloc/similarity.hpp"

using namespace seqloc;

TEST_CASE("kendall tau on the worked four-ap example") {
  const ApSequence a{2, 3, 4, 1};
  const ApSequence b{3, 4, 2, 1};
  // 6 pairs, 4 concordant, 2 discordant.
  CHECK(kendall_tau(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(rank_similarity(a, b) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("kendall tau bounds") {
  const ApSequence a{5, 1, 9, 2, 7};
  ApSequence rev = a;
  std::reverse(rev.begin(), rev.end());
  CHECK(kendall_tau(a, a) == 1.0);
  CHECK(kendall_tau(a, rev) == -1.0);
  CHECK(rank_similarity(a, a) == 1.0);
  CHECK(rank_similarity(a, rev) == 0.0);
}

TEST_CASE("kendall tau equals pair-enumeration oracle on random permutations") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 7);
    ApSequence a(n);
    std::iota(a.begin(), a.end(), 1);
    ApSequence b = a;
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    CHECK(kendall_tau(a, b) == oracles::kendall_tau(a, b));
  }
}

TEST_CASE("kendall tau rejects bad input") {
  CHECK_THROWS_AS(kendall_tau({1}, {1}), DomainError);
  CHECK_THROWS_AS(kendall_tau({1, 2}, {1, 2, 3}), DomainError);
  CHECK_THROWS_AS(kendall_tau({1, 2}, {1, 3}), DomainError);
  CHECK_THROWS_AS(kendall_tau({1, 1}, {1, 1}), DomainError);
}

TEST_CASE("rank similarity stays in [0,1] on random pairs") {
  std::mt19937_64 rng(7);
  ApSequence a(9);
  std::iota(a.begin(), a.end(), 1);
  ApSequence b = a;
  for (int trial = 0; trial < 5000; ++trial) {
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    const double sim = rank_similarity(a, b);
    CHECK(sim >= 0.0);
    CHECK(sim <= 1.0);
  }
}

TEST_CASE("align_common keeps relative order and gates on overlap") {
  const ApSequence a{4, 7, 1, 9, 3};
  const ApSequence b{9, 2, 4, 3, 8};
  const auto aligned = align_common(a, b);
  REQUIRE(aligned.has_value());
  CHECK(aligned->first == ApSequence{4, 9, 3});
  CHECK(aligned->second == ApSequence{9, 4, 3});

  CHECK_FALSE(align_common({1, 2}, {3, 4}).has_value());
  CHECK_FALSE(align_common({1, 2, 3}, {3, 4, 5}, 2).has_value());
  CHECK(align_common({1, 2, 3}, {3, 4, 5}, 1).has_value());
}

TEST_CASE("cosine similarity matches the two-ap hand computation") {
  const RssVector a{{1, -50.0}, {2, -70.0}};
  const RssVector b{{1, -60.0}, {2, -60.0}};
  // Shifted vectors (50,30) and (40,40): 3200 / (sqrt(3400)*sqrt(3200)).
  const double expected = 3200.0 / (std::sqrt(3400.0) * std::sqrt(3200.0));
  const auto sim = cosine_similarity(a, b);
  REQUIRE(sim.has_value());
  CHECK(*sim == doctest::Approx(expected).epsilon(1e-12));
  CHECK(*sim == doctest::Approx(0.97014).epsilon(1e-4));
}

TEST_CASE("cosine similarity edge cases") {
  const RssVector a{{1, -50.0}, {2, -70.0}, {3, -60.0}};
  const auto self = cosine_similarity(a, a);
  REQUIRE(self.has_value());
  CHECK(*self == doctest::Approx(1.0).epsilon(1e-12));

  // Only one shared id.
  CHECK_FALSE(cosine_similarity({{1, -50.0}, {2, -60.0}}, {{2, -50.0}, {3, -60.0}}).has_value());
  // min_common above the actual overlap.
  CHECK_FALSE(cosine_similarity(a, a, 4).has_value());
  // Shifted magnitude zero (-100 dBm maps to 0 after the +100 shift).
  CHECK_FALSE(cosine_similarity({{1, -100.0}, {2, -100.0}}, a).has_value());
}
