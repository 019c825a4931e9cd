#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "lipaging/errors.hpp"
#include "lipaging/paging.hpp"

using namespace lipaging;

namespace {

CellGraph parse(const std::string& text) {
  std::istringstream in(text);
  return load_graph(in);
}

struct Area {
  explicit Area(CellGraph g)
      : graph(std::move(g)), P(symmetric_random_walk(graph)), pi(stationary_distribution(P)) {}
  CellGraph graph;
  TransitionMatrix P;
  StationaryDistribution pi;
};

double total_variation(std::span<const double> a, std::span<const double> b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

double brute_force_min_cost(std::vector<double> probs) {
  std::vector<std::size_t> perm(probs.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double cost = 0.0;
    for (std::size_t j = 0; j < perm.size(); ++j) cost += (j + 1.0) * probs[perm[j]];
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Oracle for a geometric crossing pmf: the infinite sum
// a0 e_u + c sum_{k>=1} f^{k-1} e_u P^k  =  a0 e_u + c e_u P (I - f P)^{-1}.
std::vector<double> resolvent_profile(const TransitionMatrix& P, const CrossingPmf& pmf,
                                      CellId u) {
  const auto n = static_cast<Eigen::Index>(P.size());
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = P(i, j);
  const double f = pmf.transform;
  const double c = (1.0 - pmf.probs[0]) * (1.0 - f);
  const Eigen::RowVectorXd start = M.row(u);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - f * M;
  const Eigen::VectorXd x = A.transpose().partialPivLu().solve(start.transpose());
  std::vector<double> out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = c * x(i) + (i == Eigen::Index(u) ? pmf.probs[0] : 0.0);
  return out;
}

}  // namespace

TEST_CASE("profile on the 3-cell path, gamma = 1, p = 1") {
  const Area area(parse("n=3\n0 1\n1 2\n"));
  const auto pmf = crossing_pmf(ResidenceModel(1.0), 1.0);
  const auto profile = location_profile(area.P, pmf, area.pi, 0);

  // Hand summation of the first 20 terms: a(k) = (1/2)^{k+1}, walk alternates
  // between [0,1,0] (odd k) and [1/2,0,1/2] (even k >= 2).
  std::array<double, 3> oracle{1.0 * 0.5, 0.0, 0.0};
  for (int k = 1; k < 20; ++k) {
    const double a = std::pow(0.5, k + 1);
    if (k % 2 == 1) {
      oracle[1] += a;
    } else {
      oracle[0] += 0.5 * a;
      oracle[2] += 0.5 * a;
    }
  }
  // Closed forms of the same series: 7/12, 1/3, 1/12.
  CHECK(oracle[0] == doctest::Approx(7.0 / 12.0).epsilon(1e-6));
  CHECK(oracle[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(oracle[2] == doctest::Approx(1.0 / 12.0).epsilon(1e-6));
  CHECK(std::abs(profile.probs[0] - 7.0 / 12.0) < 1e-11);
  CHECK(std::abs(profile.probs[1] - 1.0 / 3.0) < 1e-11);
  CHECK(std::abs(profile.probs[2] - 1.0 / 12.0) < 1e-11);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(profile.probs[i] - oracle[i]) < 1e-6);
  CHECK(profile.li_cell == 0);
  CHECK(profile.tail_assigned == pmf.tail);
}

TEST_CASE("profile matches the resolvent closed form") {
  for (std::size_t n : {3u, 7u, 12u, 31u}) {
    const Area area(build_hex_patch(n));
    for (double g : {0.1, 1.0, 10.0}) {
      for (double p : {0.05, 1.0, 20.0}) {
        const auto pmf = crossing_pmf(ResidenceModel(g), p);
        for (CellId u : {CellId{0}, n - 1}) {
          const auto profile = location_profile(area.P, pmf, area.pi, u);
          const auto oracle = resolvent_profile(area.P, pmf, u);
          INFO("n=" << n << " g=" << g << " p=" << p << " u=" << u);
          for (CellId i = 0; i < n; ++i) CHECK(std::abs(profile.probs[i] - oracle[i]) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("profile limits") {
  const Area area(build_hex_patch(19));
  SUBCASE("high CMR concentrates at the LI cell") {
    const auto profile = location_profile(area.P, crossing_pmf(ResidenceModel(2.0), 1e7), area.pi, 5);
    CHECK(profile.probs[5] > 1.0 - 1e-6);
  }
  SUBCASE("low CMR approaches the stationary vector") {
    for (double g : {0.1, 1.0, 10.0}) {
      const auto pmf = crossing_pmf(ResidenceModel(g), 1e-4);
      for (CellId u : {0, 7, 18}) {
        const auto profile = location_profile(area.P, pmf, area.pi, u);
        CHECK(total_variation(profile.probs, area.pi.pi) <= 1e-3);
      }
    }
  }
}

TEST_CASE("profiles are normalized across the grid") {
  const Area area(build_hex_patch(31));
  for (double g : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    for (double p : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const auto pmf = crossing_pmf(ResidenceModel(g), p);
      for (CellId u = 0; u < 31; u += 5) {
        const auto profile = location_profile(area.P, pmf, area.pi, u);
        CHECK(std::abs(std::accumulate(profile.probs.begin(), profile.probs.end(), 0.0) - 1.0) <=
              kProfileSumTolerance);
        CHECK(*std::min_element(profile.probs.begin(), profile.probs.end()) >= 0.0);
      }
    }
  }
}

TEST_CASE("profile argument errors") {
  const Area area(build_hex_patch(7));
  const auto pmf = crossing_pmf(ResidenceModel(1.0), 1.0);
  CHECK_THROWS_AS(location_profile(area.P, pmf, area.pi, 7), InvalidArgument);
  StationaryDistribution wrong{{0.5, 0.5}, 0.0, 0};
  CHECK_THROWS_AS(location_profile(area.P, pmf, wrong, 0), InvalidArgument);
}

TEST_CASE("sequential cost examples") {
  CHECK(sequential_cost(std::vector<double>{0.0, 1.0, 0.0}) == 1.0);
  for (std::size_t n : {1u, 2u, 5u, 31u}) {
    std::vector<double> uniform(n, 1.0 / n);
    CHECK(sequential_cost(uniform) == doctest::Approx((n + 1) / 2.0).epsilon(1e-14));
  }
  const std::vector<double> probs{0.2, 0.5, 0.3};
  CHECK(sequential_cost(probs) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(brute_force_min_cost(probs) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(paging_order(probs) == std::vector<CellId>{1, 2, 0});
}

TEST_CASE("sequential order breaks ties by ascending cell id") {
  CHECK(paging_order(std::vector<double>{0.25, 0.25, 0.5, 0.0}) ==
        std::vector<CellId>{2, 0, 1, 3});
}

TEST_CASE("sequential cost is the permutation minimum") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6;
    std::vector<double> probs(n);
    std::exponential_distribution<double> draw(1.0);
    for (auto& x : probs) x = draw(rng);
    if (trial % 3 == 0) probs[0] = probs[n - 1];  // force a tie
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (auto& x : probs) x /= total;
    const double cost = sequential_cost(probs);
    CHECK(cost == doctest::Approx(brute_force_min_cost(probs)).epsilon(1e-15));
    CHECK(cost >= 1.0 - 1e-15);
    CHECK(cost <= n + 1e-12);
  }
}

TEST_CASE("sequential cost depends only on the multiset of probabilities") {
  std::mt19937 rng(5);
  std::vector<double> probs{0.3, 0.1, 0.1, 0.2, 0.2, 0.1};
  const double cost = sequential_cost(probs);
  for (int i = 0; i < 50; ++i) {
    std::shuffle(probs.begin(), probs.end(), rng);
    CHECK(sequential_cost(probs) == cost);
  }
}

TEST_CASE("total cost") {
  SUBCASE("single cell") {
    const Area area(build_hex_patch(1));
    const auto report = total_cost(area.P, crossing_pmf(ResidenceModel(1.0), 1.0), area.pi);
    CHECK(report.total == 1.0);
    CHECK(report.savings == 0.0);
    CHECK(report.flooding == 1.0);
  }
  SUBCASE("low CMR collapses every LI cell to the stationary cost") {
    const Area area(build_hex_patch(19));
    const auto report = total_cost(area.P, crossing_pmf(ResidenceModel(1.0), 1e-4), area.pi);
    const double stationary_cost = sequential_cost(area.pi.pi);
    CHECK(std::abs(report.total - stationary_cost) <= 0.02 * 19);
    for (double c : report.per_cell) CHECK(std::abs(c - stationary_cost) <= 0.02 * 19);
  }
  SUBCASE("report bounds and bookkeeping") {
    const Area area(build_hex_patch(31));
    for (double g : {0.1, 1.0, 10.0}) {
      for (double p : {0.01, 1.0, 100.0}) {
        const auto pmf = crossing_pmf(ResidenceModel(g), p);
        const auto report = total_cost(area.P, pmf, area.pi, 2);
        CHECK(report.shape == g);
        CHECK(report.cmr == p);
        CHECK(report.variance == doctest::Approx(1.0 / g));
        CHECK(report.total >= 1.0);
        CHECK(report.total <= 31.0);
        CHECK(report.savings >= 0.0);
        CHECK(report.savings <= 1.0 - 1.0 / 31.0);
        double weighted = 0.0;
        for (CellId u = 0; u < 31; ++u) {
          CHECK(report.per_cell[u] >= 1.0);
          CHECK(report.per_cell[u] <= 31.0);
          weighted += area.pi.pi[u] * report.per_cell[u];
        }
        CHECK(report.total == doctest::Approx(weighted).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("total cost is invariant to scaling both rates") {
  const Area area(build_hex_patch(31));
  for (double g : {0.1, 1.0, 10.0}) {
    for (double p : {0.01, 1.0, 100.0}) {
      const auto base = total_cost(area.P, crossing_pmf(ResidenceModel(g, 1.0), p), area.pi);
      const auto scaled =
          total_cost(area.P, crossing_pmf(ResidenceModel(g, 10.0), 10.0 * p), area.pi);
      CHECK(std::abs(base.total - scaled.total) <= 1e-12);
    }
  }
}

TEST_CASE("sweep ordering and trends on the 31-cell patch") {
  const auto graph = build_hex_patch(31);
  const std::vector<double> shapes{10.0, 1.0, 0.1};
  const std::vector<double> cmrs{10.0, 0.1, 1.0};
  const auto reports = sweep(graph, shapes, cmrs, {.threads = 2});
  REQUIRE(reports.size() == 9);
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t c = 0; c < 3; ++c) {
      const auto& r = reports[s * 3 + c];
      CHECK(r.shape == shapes[s]);
      CHECK(r.cmr == std::vector<double>{0.1, 1.0, 10.0}[c]);
    }
    // Cost falls as the CMR rises.
    CHECK(reports[s * 3 + 0].total > reports[s * 3 + 1].total);
    CHECK(reports[s * 3 + 1].total > reports[s * 3 + 2].total);
  }
  // At p = 0.1, higher variance (smaller shape) means lower cost.
  CHECK(reports[0].total > reports[3].total);
  CHECK(reports[3].total > reports[6].total);

  // Same results serially and via total_cost.
  const auto serial = sweep(graph, shapes, cmrs, {.threads = 1});
  const auto P = symmetric_random_walk(graph);
  const auto pi = stationary_distribution(P);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(serial[i].total == reports[i].total);
    const auto direct = total_cost(P, crossing_pmf(ResidenceModel(reports[i].shape), reports[i].cmr), pi);
    CHECK(direct.total == reports[i].total);
  }
}

TEST_CASE("variance has negligible effect at p = 100") {
  const auto reports = sweep(build_hex_patch(31), std::vector<double>{0.1, 10.0},
                             std::vector<double>{100.0});
  const double mean = 0.5 * (reports[0].total + reports[1].total);
  CHECK(std::abs(reports[0].total - reports[1].total) <= 0.02 * mean);
}

TEST_CASE("sweep input errors") {
  const auto graph = build_hex_patch(7);
  CHECK_THROWS_AS(sweep(graph, std::vector<double>{}, std::vector<double>{1.0}), InvalidArgument);
  CHECK_THROWS_AS(sweep(graph, std::vector<double>{1.0}, std::vector<double>{-1.0}),
                  InvalidArgument);
  CHECK_THROWS_AS(sweep(graph, std::vector<double>{0.0}, std::vector<double>{1.0}),
                  InvalidArgument);
}
