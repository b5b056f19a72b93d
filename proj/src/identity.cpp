#include "gwlab/identity.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "gwlab/sampler.hpp"
#include "gwlab/stats.hpp"

namespace gwlab {

FunctionalSpec FunctionalSpec::constant_one(int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  return FunctionalSpec(Kind::kConstantOne, depth);
}

FunctionalSpec FunctionalSpec::first_step(int step) {
  if (step < 1) throw std::invalid_argument("ray step must be >= 1");
  FunctionalSpec g(Kind::kFirstStep, 1);
  g.param_ = step;
  return g;
}

FunctionalSpec FunctionalSpec::root_count(int count) {
  if (count < 0) throw std::invalid_argument("count must be >= 0");
  FunctionalSpec g(Kind::kRootCount, 1);
  g.param_ = count;
  return g;
}

FunctionalSpec FunctionalSpec::cylinder(TruncatedTree pattern,
                                        Word ray_prefix) {
  if (static_cast<int>(ray_prefix.length()) != pattern.depth())
    throw std::invalid_argument("ray prefix must reach the pattern depth");
  if (!pattern.contains(ray_prefix))
    throw std::invalid_argument("ray prefix not in the pattern tree");
  FunctionalSpec g(Kind::kCylinder, pattern.depth());
  g.pattern_ = std::move(pattern);
  g.ray_ = std::move(ray_prefix);
  return g;
}

std::string FunctionalSpec::name() const {
  switch (kind_) {
    case Kind::kConstantOne:
      return "const1@n=" + std::to_string(depth_);
    case Kind::kFirstStep:
      return "1{first_step=" + std::to_string(param_) + "}";
    case Kind::kRootCount:
      return "1{root_count=" + std::to_string(param_) + "}";
    case Kind::kCylinder:
      return "cylinder@n=" + std::to_string(depth_) + ",ray=" + ray_.str();
  }
  return "?";
}

double FunctionalSpec::eval(const TruncatedTree& tree_prefix,
                            const Word& ray_prefix) const {
  if (tree_prefix.depth() != depth_ ||
      static_cast<int>(ray_prefix.length()) != depth_)
    throw std::invalid_argument("functional evaluated at the wrong depth");
  switch (kind_) {
    case Kind::kConstantOne:
      return 1.0;
    case Kind::kFirstStep:
      return ray_prefix.letter(0) == static_cast<Word::Letter>(param_) ? 1.0
                                                                       : 0.0;
    case Kind::kRootCount:
      return tree_prefix.offspring_count(Word::root()) == param_ ? 1.0 : 0.0;
    case Kind::kCylinder:
      return tree_prefix == pattern_ && ray_prefix == ray_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double FunctionalSpec::eval_tree(const TruncatedTree& tree_prefix) const {
  if (tree_prefix.depth() != depth_)
    throw std::invalid_argument("functional evaluated at the wrong depth");
  switch (kind_) {
    case Kind::kConstantOne:
      return 1.0;
    case Kind::kRootCount:
      return tree_prefix.offspring_count(Word::root()) == param_ ? 1.0 : 0.0;
    default:
      throw std::logic_error("functional depends on the ray");
  }
}

TwoSidedEstimate spine_measure_identity_mc(const OffspringDistribution& d,
                               const FunctionalSpec& g, int w_depth,
                               std::int64_t reps, RngStream& rng_lhs,
                               RngStream& rng_rhs) {
  int n = g.depth();
  if (n < 1) throw std::invalid_argument("identity depth must be >= 1");
  if (w_depth < 0) throw std::invalid_argument("w depth must be >= 0");
  double m = d.mean();
  double mn = std::pow(m, -n);
  double w_scale = std::pow(m, -w_depth);
  OffspringSampler sampler(d);

  std::vector<double> lhs(reps), rhs(reps);
  for (std::int64_t i = 0; i < reps; ++i) {
    auto prefix = sample_tree(d, n, rng_lhs);
    double acc = 0.0;
    for (const auto& u : prefix.generation(n)) {
      double gv = g.eval(prefix, u);
      if (gv == 0.0) continue;
      // Ŵ_u of a fresh subtree: given T|n the subtrees are i.i.d. GW, so
      // an independent z-chain has exactly the right joint law.
      double w_hat = static_cast<double>(sample_final_generation(
                         sampler, w_depth, rng_lhs, kDefaultPopulationCap)) *
                     w_scale;
      acc += gv * mn * w_hat;
    }
    lhs[i] = acc;
  }
  for (std::int64_t i = 0; i < reps; ++i) {
    auto spine = sample_spine_filled(d, n, n, rng_rhs);
    rhs[i] = g.eval(spine.assemble(n), spine.spine());
  }
  auto ls = summarize(lhs);
  auto rs = summarize(rhs);
  TwoSidedEstimate est;
  est.label = "measure-spine " + g.name();
  est.lhs = ls.mean;
  est.lhs_se = ls.stderr_mean;
  est.rhs = rs.mean;
  est.rhs_se = rs.stderr_mean;
  est.z = z_score(ls.mean, ls.stderr_mean, rs.mean, rs.stderr_mean);
  est.ok = est.z <= 3.0;
  return est;
}

TwoSidedEstimate many_to_one_check(const OffspringDistribution& d, int n,
                                const FunctionalSpec& g1,
                                const FunctionalSpec& g2, std::int64_t reps,
                                RngStream& rng_lhs, RngStream& rng_rhs) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (n > 10 && d.mean() > 1.0)
    throw std::invalid_argument("direct side materializes m^n nodes; n > 10 refused");
  if (g1.depth() > std::max(n, 1))
    throw std::invalid_argument("G1 must be measurable at generation n");
  double m = d.mean();
  int lhs_depth = n + g2.depth();

  std::vector<double> lhs(reps);
  for (std::int64_t i = 0; i < reps; ++i) {
    auto tree = sample_tree(d, lhs_depth, rng_lhs);
    double acc = 0.0;
    for (const auto& u : tree.generation(n)) {
      auto cut_tree = cut(tree, u);
      double v1 = g1.eval(restrict_depth(cut_tree, g1.depth()),
                          u.restrict(g1.depth()));
      if (v1 == 0.0) continue;
      auto shifted = shift(tree, u);
      double v2 = g2.eval_tree(restrict_depth(shifted.tree, g2.depth()));
      acc += v1 * v2;
    }
    lhs[i] = acc;
  }

  // Right side: m^n E[G1(Cut_{U*|n} T*, U*|n)] E[G2(T')] with independent
  // spine and GW samples.
  std::vector<double> spine_vals(reps), gw_vals(reps);
  for (std::int64_t i = 0; i < reps; ++i) {
    if (n == 0) {
      spine_vals[i] = 1.0;  // Cut at the root of T* is the single node
      if (g1.depth() > 0)
        throw std::invalid_argument("G1 at n = 0 must be depth 0");
    } else {
      auto spine = sample_spine_filled(d, n, n, rng_rhs);
      auto assembled = spine.assemble(n);
      auto cut_star = cut(assembled, spine.spine());
      spine_vals[i] = g1.eval(restrict_depth(cut_star, g1.depth()),
                              spine.spine().restrict(g1.depth()));
    }
    auto fresh = sample_tree(d, g2.depth(), rng_rhs);
    gw_vals[i] = g2.eval_tree(fresh);
  }
  auto ls = summarize(lhs);
  auto s1 = summarize(spine_vals);
  auto s2 = summarize(gw_vals);
  double mn = std::pow(m, n);
  TwoSidedEstimate est;
  est.label = "many-to-one n=" + std::to_string(n) + " [" + g1.name() + "; " +
              g2.name() + "]";
  est.lhs = ls.mean;
  est.lhs_se = ls.stderr_mean;
  est.rhs = mn * s1.mean * s2.mean;
  // Delta method for the product of independent means.
  est.rhs_se = mn * std::sqrt(s1.stderr_mean * s1.stderr_mean * s2.mean *
                                  s2.mean +
                              s2.stderr_mean * s2.stderr_mean * s1.mean *
                                  s1.mean);
  est.z = z_score(est.lhs, est.lhs_se, est.rhs, est.rhs_se);
  est.ok = est.z <= 3.0;
  return est;
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

std::string tree_key(const TruncatedTree& t) {
  std::ostringstream os;
  t.write_csv(os);
  return os.str();
}

// All depth-n trees over the support with their exact GW probabilities.
void enumerate_gw(const std::vector<std::pair<int, Rational>>& pmf, int n,
                  TruncatedTree prefix, std::vector<Word> current_gen,
                  Rational prob,
                  std::map<std::string, std::pair<Rational, std::int64_t>>& out) {
  if (static_cast<int>(current_gen.front().length()) >= n) {
    // current_gen is the frontier; record the tree and its Z_n.
    auto& entry = out[tree_key(prefix)];
    entry.first += prob;
    entry.second = static_cast<std::int64_t>(current_gen.size());
    return;
  }
  // Assign a count to every word of the current generation.
  std::vector<std::size_t> choice(current_gen.size(), 0);
  while (true) {
    TruncatedTree t = prefix;
    Rational p = prob;
    std::vector<Word> next_gen;
    for (std::size_t i = 0; i < current_gen.size(); ++i) {
      int k = pmf[choice[i]].first;
      p *= pmf[choice[i]].second;
      t.set_offspring(current_gen[i], k);
      for (int c = 1; c <= k; ++c)
        next_gen.push_back(current_gen[i].child(static_cast<Word::Letter>(c)));
    }
    if (next_gen.empty()) {
      // Extinct before n: the truncated record is complete as-is.
      out[tree_key(t)].first += p;
      out[tree_key(t)].second = 0;
    } else {
      enumerate_gw(pmf, n, t, next_gen, p, out);
    }
    std::size_t j = 0;
    for (; j < choice.size(); ++j) {
      if (++choice[j] < pmf.size()) break;
      choice[j] = 0;
    }
    if (j == choice.size()) break;
  }
}

}  // namespace

double sizebias_law_tv(const OffspringDistribution& d, int n) {
  if (n < 1 || n > 2)
    throw std::invalid_argument("enumeration supports n in {1, 2}");
  const auto& exact = d.exact_pmf();
  const auto& support = d.support();
  if (d.max_support() > 5)
    throw std::invalid_argument("support too large for enumeration");

  std::vector<std::pair<int, Rational>> pmf;
  Rational m = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    Rational p(exact[i].first, exact[i].second);
    pmf.emplace_back(support[i].first, p);
    m += support[i].first * p;
  }
  if (m <= 1) throw std::domain_error("enumeration needs m > 1");

  // Reweighted GW law: (Z_n / m^n) P(T|n = .).
  std::map<std::string, std::pair<Rational, std::int64_t>> gw;
  enumerate_gw(pmf, n, TruncatedTree(n), {Word::root()}, Rational(1), gw);
  Rational m_pow = 1;
  for (int i = 0; i < n; ++i) m_pow *= m;
  std::map<std::string, Rational> reweighted;
  for (const auto& [key, entry] : gw)
    reweighted[key] = entry.first * entry.second / m_pow;

  // Exact marginal law of T*|n: sum over spine configurations.
  std::map<std::string, Rational> spine_law;
  for (const auto& [k1, p1] : pmf) {
    if (k1 < 1) continue;
    Rational rho1 = p1 / m;  // ρ(i, k1) for each spine position i
    for (int i1 = 1; i1 <= k1; ++i1) {
      if (n == 1) {
        TruncatedTree t(1);
        t.set_offspring(Word::root(), k1);
        spine_law[tree_key(t)] += rho1;
        continue;
      }
      // n = 2: off-spine children get GW counts, the spine child gets ξ̂.
      std::vector<std::size_t> choice(static_cast<std::size_t>(k1) - 1, 0);
      bool more = true;
      if (choice.empty()) more = true;
      do {
        Rational p_grafts = 1;
        for (std::size_t j = 0; j < choice.size(); ++j)
          p_grafts *= pmf[choice[j]].second;
        for (const auto& [k2, p2] : pmf) {
          if (k2 < 1) continue;
          Rational rho2_total = Rational(k2) * p2 / m;  // marginal ξ̂(k2)
          TruncatedTree t(2);
          t.set_offspring(Word::root(), k1);
          std::size_t g = 0;
          for (int c = 1; c <= k1; ++c) {
            if (c == i1) {
              t.set_offspring(Word::root().child(c), k2);
            } else {
              t.set_offspring(Word::root().child(c), pmf[choice[g]].first);
              ++g;
            }
          }
          spine_law[tree_key(t)] += rho1 * p_grafts * rho2_total;
        }
        std::size_t j = 0;
        for (; j < choice.size(); ++j) {
          if (++choice[j] < pmf.size()) break;
          choice[j] = 0;
        }
        more = j < choice.size();
      } while (more);
    }
  }

  Rational tv = 0;
  for (const auto& [key, p] : reweighted) {
    auto it = spine_law.find(key);
    Rational q = it == spine_law.end() ? Rational(0) : it->second;
    tv += abs(p - q);
  }
  for (const auto& [key, q] : spine_law) {
    if (reweighted.find(key) == reweighted.end()) tv += q;
  }
  tv /= 2;
  return tv.convert_to<double>();
}

}  // namespace gwlab
