#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "gwlab/offspring.hpp"
#include "gwlab/rng.hpp"
#include "gwlab/sampler.hpp"
#include "gwlab/stats.hpp"
#include "gwlab/tree.hpp"
#include "gwlab/word.hpp"

using namespace gwlab;

namespace {
Word W(const char* s) { return Word::parse(s); }

TruncatedTree example_tree() {
  // {∅↦2, 1↦1, 2↦0, (1,1)↦0}, depth 3
  TruncatedTree t(3);
  t.set_offspring(Word::root(), 2);
  t.set_offspring(W("1"), 1);
  t.set_offspring(W("2"), 0);
  t.set_offspring(W("1.1"), 0);
  return t;
}
}  // namespace

TEST_CASE("word meet is the longest common prefix") {
  CHECK(meet(W("1.2.1"), W("1.2.2")) == W("1.2"));
  CHECK(meet(W("1.2.1"), W("1.2.1")) == W("1.2.1"));
  CHECK(meet(W("1.2"), W("2.2")) == Word::root());
  CHECK(meet(W("1.2"), Word::root()) == Word::root());
}

TEST_CASE("word meet properties") {
  auto words = {W("1"), W("1.2"), W("1.2.3"), W("2.1"), W("1.3.1")};
  for (const auto& u : words)
    for (const auto& v : words) {
      CHECK(meet(u, v) == meet(v, u));
      CHECK(meet(u, v).is_prefix_of(u));
      CHECK(meet(u, meet(u, v)) == meet(u, v));
    }
}

TEST_CASE("word restriction and concatenation") {
  Word u = W("3.1.4");
  CHECK(u.restrict(2) == W("3.1"));
  CHECK(u.restrict(7) == u);
  CHECK(u.restrict(0) == Word::root());
  CHECK(Word::root().concat(u) == u);
  CHECK(u.concat(Word::root()) == u);
  CHECK(W("3").concat(W("1.4")) == u);
  CHECK(Word::parse("") == Word::root());
  CHECK(Word::parse(u.str()) == u);
  CHECK_THROWS_AS(Word::parse("1..2"), std::invalid_argument);
  CHECK_THROWS_AS(Word::parse("0.1"), std::invalid_argument);
}

TEST_CASE("tree membership, counts and generation sizes") {
  auto t = example_tree();
  CHECK(t.contains(Word::root()));
  CHECK(t.contains(W("1.1")));
  CHECK_FALSE(t.contains(W("1.2")));
  CHECK(t.offspring_count(W("1")) == 1);
  CHECK(t.offspring_count(W("2.1")) == -1);
  CHECK(t.generation_size(0) == 1);
  CHECK(t.generation_size(1) == 2);
  CHECK(t.generation_size(2) == 1);
  CHECK(t.generation_size(3) == 0);
  CHECK_THROWS_AS(t.generation_size(4), std::out_of_range);
  CHECK_THROWS_AS(t.contains(W("1.1.1.1")), std::out_of_range);
}

TEST_CASE("validate reports rule violations as values") {
  TruncatedTree good(2);
  good.set_offspring(Word::root(), 2);
  good.set_offspring(W("1"), 1);
  good.set_offspring(W("2"), 0);
  CHECK(validate(good).empty());

  // Word (3) recorded while k_root = 2: child index exceeds parent count.
  TruncatedTree bad1(2);
  bad1.set_offspring(Word::root(), 2);
  bad1.set_offspring(W("1"), 0);
  bad1.set_offspring(W("2"), 0);
  bad1.set_offspring(W("3"), 0);
  auto r1 = validate(bad1);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].rule == "Tree(2)");
  CHECK(r1[0].word == W("3"));

  // (1,1) recorded but (1) missing: prefix closure broken.
  TruncatedTree bad2(3);
  bad2.set_offspring(Word::root(), 1);
  bad2.set_offspring(W("1.1"), 0);
  auto r2 = validate(bad2);
  REQUIRE(r2.size() == 2);
  CHECK(r2[0].word == W("1"));
  CHECK(r2[0].rule == "Tree(2)");  // child record of the root missing
  CHECK(r2[1].word == W("1.1"));
  CHECK(r2[1].rule == "Tree(1)");  // orphan record
}

TEST_CASE("cut removes strict descendants only") {
  auto t = example_tree();
  auto c = cut(t, W("1"));
  CHECK(c.offspring_count(W("1")) == 0);
  CHECK(c.offspring_count(W("2")) == 0);
  CHECK(c.offspring_count(Word::root()) == 2);
  CHECK_FALSE(c.contains(W("1.1")));
  CHECK(c.depth() == t.depth());

  auto root_cut = cut(t, Word::root());
  CHECK(root_cut.generation_size(1) == 0);
  CHECK(root_cut.node_count() == 1);

  CHECK_THROWS_AS(cut(t, W("2.1")), std::invalid_argument);
}

TEST_CASE("shift re-roots subtrees and respects the empty convention") {
  auto t = example_tree();
  auto s = shift(t, W("1"));
  REQUIRE(s.present);
  CHECK(s.tree.depth() == 2);
  CHECK(s.tree.offspring_count(Word::root()) == 1);
  CHECK(s.tree.offspring_count(W("1")) == 0);

  auto identity = shift(t, Word::root());
  REQUIRE(identity.present);
  CHECK(identity.tree == t);

  CHECK_FALSE(shift(t, W("1.2")).present);

  // shift(cut(t,u), u) is the single-node tree for every u in t
  for (const char* w : {"", "1", "2", "1.1"}) {
    auto piece = shift(cut(t, W(w)), W(w));
    REQUIRE(piece.present);
    CHECK(piece.tree.node_count() == 1);
  }
}

TEST_CASE("tree csv serialization round-trips") {
  auto t = example_tree();
  std::ostringstream os;
  t.write_csv(os);
  std::istringstream is(os.str());
  CHECK(TruncatedTree::read_csv(is) == t);

  std::ostringstream js;
  t.write_jsonl(js);
  CHECK(js.str().rfind("{\"depth\":3}\n", 0) == 0);
  CHECK(js.str().find("{\"word\":\"1.1\",\"offspring_count\":0}") !=
        std::string::npos);
}

TEST_CASE("cut at a frontier word leaves the tree unchanged") {
  TruncatedTree t(2);
  t.set_offspring(Word::root(), 2);
  t.set_offspring(W("1"), 1);
  t.set_offspring(W("2"), 0);
  auto c = cut(t, W("1.1"));  // (1,1) is on the frontier
  CHECK(c == t);
}

TEST_CASE("offspring parsing and derived quantities") {
  auto xi_a = OffspringDistribution::parse("0:0.25,2:0.75");
  CHECK(xi_a.mean() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(xi_a.hyp_ok());

  auto geo = OffspringDistribution::parse("geom:0.6667");
  CHECK(geo.mean() == doctest::Approx(2.0).epsilon(1e-3));

  auto boundary = OffspringDistribution::parse("0:0.5,2:0.5");
  CHECK(boundary.mean() == doctest::Approx(1.0));
  CHECK_FALSE(boundary.hyp_ok());

  CHECK_THROWS_AS(OffspringDistribution::parse("0:0.3,1:0.8"),
                  std::invalid_argument);
  CHECK_THROWS_AS(OffspringDistribution::parse("0:0.5,junk"),
                  std::invalid_argument);
  CHECK_THROWS_AS(OffspringDistribution::parse("geom:1.5"),
                  std::invalid_argument);
  CHECK_THROWS_AS(OffspringDistribution::parse(""), std::invalid_argument);
}

TEST_CASE("pgf values and shape") {
  auto xi_a = OffspringDistribution::parse("0:0.25,2:0.75");
  CHECK(xi_a.pgf(0.5) == doctest::Approx(0.4375).epsilon(1e-15));
  CHECK(xi_a.pgf(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  auto geo = OffspringDistribution::geometric(2.0 / 3.0);
  CHECK(geo.pgf(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(xi_a.pgf(1.5), std::invalid_argument);

  // Nondecreasing and convex on a grid.
  for (const auto& d : {xi_a, geo}) {
    double prev = d.pgf(0.0);
    double prev_slope = -1.0;
    for (int i = 1; i <= 50; ++i) {
      double r = i / 50.0;
      double v = d.pgf(r);
      CHECK(v >= prev - 1e-14);
      double slope = (v - prev) * 50.0;
      CHECK(slope >= prev_slope - 1e-10);
      prev = v;
      prev_slope = slope;
    }
  }
}

TEST_CASE("extinction probability fixed points") {
  auto xi_a = OffspringDistribution::parse("0:0.25,2:0.75");
  CHECK(xi_a.extinction_probability() == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  auto binary = OffspringDistribution::parse("2:1.0");
  CHECK(binary.extinction_probability() == 0.0);
  auto geo = OffspringDistribution::geometric(2.0 / 3.0);
  CHECK(geo.extinction_probability() == doctest::Approx(0.5).epsilon(1e-10));
  auto sub = OffspringDistribution::parse("0:0.9,2:0.1");
  CHECK(sub.extinction_probability() == doctest::Approx(1.0).epsilon(1e-6));

  // |f(q) - q| < 10 tol
  for (const auto& d : {xi_a, geo}) {
    double q = d.extinction_probability(1e-12);
    CHECK(std::abs(d.pgf(q) - q) < 1e-11);
  }
}

TEST_CASE("size-biased law and repartition") {
  auto xi_a = OffspringDistribution::parse("0:0.25,2:0.75");
  SizeBiasedLaw hat(xi_a);
  CHECK(hat.pmf(2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hat.pmf(0) == 0.0);
  CHECK(hat.repartition(1, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(hat.repartition(2, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(hat.repartition(3, 2) == 0.0);

  SizeBiasedLaw ghat(OffspringDistribution::geometric(2.0 / 3.0));
  CHECK(ghat.pmf(1) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));

  CHECK_THROWS_AS(SizeBiasedLaw(OffspringDistribution::parse("0:0.5,2:0.5")),
                  std::domain_error);
}

TEST_CASE("random finite laws: xi-hat sums to one, rho marginal matches") {
  RngStream rng(99, 0);
  for (int trial = 0; trial < 50; ++trial) {
    // Random pmf over {0..6} with m > 1.
    std::vector<std::pair<int, double>> pmf;
    double total = 0.0;
    std::vector<double> raw(7);
    for (auto& v : raw) v = rng.uniform() + 0.01, total += v;
    double mean = 0.0;
    for (int k = 0; k < 7; ++k) {
      pmf.emplace_back(k, raw[k] / total);
      mean += k * pmf.back().second;
    }
    if (mean <= 1.01) continue;
    auto d = OffspringDistribution::finite(pmf);
    SizeBiasedLaw hat(d);
    double hat_sum = 0.0;
    for (int k = 0; k <= 6; ++k) hat_sum += hat.pmf(k);
    CHECK(hat_sum == doctest::Approx(1.0).epsilon(1e-12));
    for (int l = 1; l <= 6; ++l) {
      double marginal = 0.0;
      for (int k = 1; k <= l; ++k) marginal += hat.repartition(k, l);
      CHECK(marginal == doctest::Approx(hat.pmf(l)).epsilon(1e-12));
    }
  }
}

TEST_CASE("w second moment oracle") {
  auto xi_a = OffspringDistribution::parse("0:0.25,2:0.75");
  // (E[k^2] - m)/(m^2 - m) with E[k^2] = 3, m = 1.5
  CHECK(xi_a.w_second_moment() == doctest::Approx(2.0).epsilon(1e-14));
  auto geo = OffspringDistribution::geometric(2.0 / 3.0);
  CHECK(geo.second_moment() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(geo.w_second_moment() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("rng streams are reproducible and separated") {
  RngStream a(123, 5), b(123, 5), c(123, 6);
  bool all_equal = true, any_equal_cross = true;
  for (int i = 0; i < 1000; ++i) {
    auto x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
    all_equal = all_equal && (x == y);
    any_equal_cross = any_equal_cross && (x == z);
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_cross);
  for (int i = 0; i < 1000; ++i) {
    double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double v = a.uniform_open();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("wide supports go through the alias table and keep the law") {
  // 12 support points forces the alias path (> 8).
  std::vector<std::pair<int, double>> pmf;
  std::vector<double> probs;
  double total = 12 * 13 / 2.0;
  for (int k = 1; k <= 12; ++k) {
    pmf.emplace_back(k, k / total);
    probs.push_back(k / total);
  }
  auto d = OffspringDistribution::finite(pmf);
  OffspringSampler sampler(d);
  RngStream rng(88, 0);
  const int n = 100000;
  std::vector<std::int64_t> counts(13, 0);
  for (int i = 0; i < n; ++i) counts[sampler.draw(rng)]++;
  std::vector<double> aligned(13, 0.0);
  for (int k = 1; k <= 12; ++k) aligned[k] = probs[k - 1];
  auto res = chi_square_gof(counts, aligned, n);
  CHECK(res.p_value > 0.001);
}

TEST_CASE("sampling from rho's l-marginal matches direct xi-hat sampling") {
  auto geo = OffspringDistribution::geometric(2.0 / 3.0);
  SizeBiasedSampler sampler(geo);
  RngStream r1(7, 1), r2(7, 2);
  const int n = 10000;
  std::vector<std::int64_t> via_rho(40, 0), direct(40, 0);
  for (int i = 0; i < n; ++i) {
    auto step = sampler.draw_spine_step(r1);
    via_rho[std::min(step.offspring_count, 39)]++;
    direct[std::min(sampler.draw(r2), 39)]++;
  }
  auto res = chi_square_two_sample(via_rho, direct);
  CHECK(res.p_value > 0.001);
}
