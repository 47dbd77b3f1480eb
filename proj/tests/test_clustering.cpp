#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "gila/clustering.hpp"
#include "gila/errors.hpp"
#include "support.hpp"

using namespace gila;
namespace ts = testing_support;

namespace {

const std::vector<Vec2> kThreeCentres{{0, 0}, {100, 0}, {50, 86}};

}  // namespace

TEST_SUITE("clustering") {
  TEST_CASE("k=1 puts the centroid at the mean") {
    std::vector<Vec2> p{{0, 0}, {4, 0}, {2, 6}, {-2, 2}};
    auto a = kmeans(p, 1, 3);
    REQUIRE(a.k == 1);
    CHECK(a.centroids[0].x == doctest::Approx(1.0));
    CHECK(a.centroids[0].y == doctest::Approx(2.0));
  }

  TEST_CASE("two well separated pairs form two clusters") {
    std::vector<Vec2> p{{0, 0}, {1, 0}, {100, 100}, {101, 100}};
    auto a = kmeans(p, 2, 1);
    CHECK(a.cluster[0] == a.cluster[1]);
    CHECK(a.cluster[2] == a.cluster[3]);
    CHECK(a.cluster[0] != a.cluster[2]);
  }

  TEST_CASE("k-means reaches the exhaustive optimum for k=2 on small clustered inputs") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SplitMix rng(seed);
      const std::size_t per = 3 + rng.below(4);
      const std::vector<Vec2> centres{{0, 0}, {6, 2}};
      auto p = ts::gaussian_blobs(centres, 2 * per, 1.5, seed);
      auto a = kmeans(p, 2, seed);
      CHECK(within_ss(p, a) <= ts::best_two_partition_wss(p) * (1 + 1e-9));
    }
  }

  TEST_CASE("property: the result is a Lloyd fixed point") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto p = ts::random_points(5 + seed * 7, 10.0, seed);
      const auto k = 2 + static_cast<std::uint32_t>(seed % 4);
      auto a = kmeans(p, k, seed);
      std::vector<Vec2> c(k);
      std::vector<double> cnt(k, 0);
      for (std::size_t i = 0; i < p.size(); ++i) {
        c[a.cluster[i]] += p[i];
        cnt[a.cluster[i]] += 1;
      }
      for (std::uint32_t j = 0; j < k; ++j) c[j] = c[j] * (1.0 / cnt[j]);
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::uint32_t j = 0; j < k; ++j)
          CHECK((p[i] - c[a.cluster[i]]).norm2() <= (p[i] - c[j]).norm2() + 1e-9);
    }
  }

  TEST_CASE("property: Lloyd steps never increase the within-cluster sum of squares") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto p = ts::random_points(150, 50.0, seed);
      std::vector<std::vector<double>> trace;
      kmeans(p, 2 + static_cast<std::uint32_t>(seed % 6), seed, &trace);
      REQUIRE(!trace.empty());
      for (const auto& t : trace)
        for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] <= t[i - 1] * (1 + 1e-12));
    }
  }

  TEST_CASE("k-means input errors and determinism") {
    std::vector<Vec2> p{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(kmeans(p, 3, 1), Error);
    CHECK_THROWS_AS(kmeans(p, 0, 1), Error);
    auto q = ts::random_points(60, 10.0, 2);
    CHECK(kmeans(q, 4, 9).cluster == kmeans(q, 4, 9).cluster);
  }

  TEST_CASE("empty clusters are refilled, so k equals the number of non-empty clusters") {
    // Many duplicates make k-means++ pick coincident seeds.
    std::vector<Vec2> p(20, Vec2{1, 1});
    p.push_back({5, 5});
    p.push_back({9, 9});
    auto a = kmeans(p, 3, 1);
    std::set<std::uint32_t> used(a.cluster.begin(), a.cluster.end());
    CHECK(used.size() == 3);
  }

  TEST_CASE("Calinski-Harabasz peaks at the planted k for two blobs") {
    const std::vector<Vec2> centres{{0, 0}, {80, 0}};
    auto p = ts::gaussian_blobs(centres, 200, 4.0, 5);
    const double ch2 = calinski_harabasz(p, kmeans(p, 2, 1));
    CHECK(ch2 > calinski_harabasz(p, kmeans(p, 3, 1)));
    CHECK(ch2 > calinski_harabasz(p, kmeans(p, 4, 1)));
  }

  TEST_CASE("Calinski-Harabasz sentinel, errors and label permutation") {
    std::vector<Vec2> p{{0, 0}, {0, 0}, {0, 0}, {5, 5}, {5, 5}};
    auto a = kmeans(p, 2, 1);
    CHECK(std::isinf(calinski_harabasz(p, a)));
    CHECK_THROWS_AS(calinski_harabasz(p, kmeans(p, 1, 1)), Error);

    auto q = ts::random_points(40, 10.0, 3);
    auto b = kmeans(q, 3, 1);
    auto swapped = b;
    for (auto& c : swapped.cluster) c = (c + 1) % 3;
    std::rotate(swapped.centroids.begin(), swapped.centroids.end() - 1, swapped.centroids.end());
    CHECK(calinski_harabasz(q, swapped) == doctest::Approx(calinski_harabasz(q, b)).epsilon(1e-12));

    // Independent evaluation of the standard formula.
    Vec2 mean;
    for (auto x : q) mean += x;
    mean = mean * (1.0 / q.size());
    std::vector<Vec2> c(3);
    std::vector<double> cnt(3, 0);
    for (std::size_t i = 0; i < q.size(); ++i) {
      c[b.cluster[i]] += q[i];
      cnt[b.cluster[i]] += 1;
    }
    double B = 0, W = 0;
    for (int j = 0; j < 3; ++j) {
      c[j] = c[j] * (1.0 / cnt[j]);
      B += cnt[j] * (c[j] - mean).norm2();
    }
    for (std::size_t i = 0; i < q.size(); ++i) W += (q[i] - c[b.cluster[i]]).norm2();
    CHECK(calinski_harabasz(q, b) == doctest::Approx((B / 2) / (W / (q.size() - 3))).epsilon(1e-9));
  }

  TEST_CASE("select_k examples") {
    auto fifty = ts::random_points(50, 10.0, 1);
    CHECK(select_k_detailed(fifty, 1).k0 == doctest::Approx(5.0));
    std::vector<Vec2> pairs{{0, 0}, {1, 0}, {100, 100}, {101, 100}};
    CHECK(select_k(pairs, 1).k == 2);
    CHECK_THROWS_AS(select_k(std::vector<Vec2>{{0, 0}, {1, 1}, {2, 2}}, 1), Error);
  }

  TEST_CASE("select_k recovers three planted blobs") {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto p = ts::gaussian_blobs(kThreeCentres, 300, 5.0, seed);
      hits += select_k(p, seed).k == 3;
    }
    CHECK(hits >= 9);
  }

  TEST_CASE("property: selected k is in range, scored, and the argmax") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      auto p = ts::random_points(40 + 30 * seed, 100.0, seed);
      auto s = select_k_detailed(p, seed);
      const double k0 = std::sqrt(p.size() / 2.0);
      CHECK(s.k0 == doctest::Approx(k0));
      const auto upper = static_cast<std::uint32_t>(std::ceil(k0)) + s.window;
      CHECK(s.best.k >= 2);
      CHECK(s.best.k <= upper);
      // Every k of the window was scored.
      const auto lower = static_cast<std::uint32_t>(std::max(2.0, std::floor(k0) - s.window));
      std::set<std::uint32_t> scored;
      double best = -1;
      std::uint32_t arg = 0;
      for (auto [k, ch] : s.scores) {
        scored.insert(k);
        if (ch > best) {
          best = ch;
          arg = k;
        }
      }
      for (auto k = lower; k <= upper; ++k) CHECK(scored.count(k) == 1);
      CHECK(arg == s.best.k);
      CHECK(select_k(p, seed).cluster == s.best.cluster);
    }
  }

  TEST_CASE("cluster file lists external ids") {
    const auto dir = std::filesystem::temp_directory_path() / "gila_clusters";
    std::filesystem::create_directories(dir);
    auto g = Graph::from_edges(3, std::vector<std::pair<VertexId, VertexId>>{{0, 1}, {1, 2}}, {10, 20, 30});
    ClusterAssignment a{{0, 1, 1}, {{0, 0}, {1, 1}}, 2};
    write_clusters(g, a, dir / "c.txt");
    std::ifstream in(dir / "c.txt");
    std::string header, l1, l2, l3;
    std::getline(in, header);
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    CHECK(header[0] == '%');
    CHECK(l1 == "10 0");
    CHECK(l3 == "30 1");
  }
}
