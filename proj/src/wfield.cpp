#include "gwlab/wfield.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace gwlab {

WField::WField(const TruncatedTree& t, double mean)
    : tree_(t), depth_(t.depth()), m_(mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("mean must be positive");
  // One bottom-up pass in reverse BFS-lex order: children are visited
  // before their parents.
  const auto& rec = tree_.offspring();
  for (auto it = rec.rbegin(); it != rec.rend(); ++it) {
    const auto& [u, k] = *it;
    double sum = 0.0;
    if (static_cast<int>(u.length()) + 1 == depth_) {
      sum = static_cast<double>(k);  // frontier children have Ŵ = 1
    } else {
      for (int i = 1; i <= k; ++i)
        sum += values_.at(u.child(static_cast<Word::Letter>(i)));
    }
    values_[u] = sum / m_;
  }
}

double WField::value(const Word& u) const {
  int n = static_cast<int>(u.length());
  if (n > depth_)
    throw std::out_of_range("W below the truncation depth is unknowable");
  if (n == depth_) return tree_.contains(u) ? 1.0 : 0.0;
  auto it = values_.find(u);
  return it == values_.end() ? 0.0 : it->second;
}

double WField::ball_mass(const Word& u) const {
  return std::pow(m_, -static_cast<double>(u.length())) * value(u);
}

double WField::log_ball_mass(const Word& u) const {
  double w = value(u);
  if (w == 0.0) return -std::numeric_limits<double>::infinity();
  return -static_cast<double>(u.length()) * std::log(m_) + std::log(w);
}

void WField::write_csv(std::ostream& os) const {
  os << "word,generation,w_value,ball_mass\n";
  char buf[64];
  for (const auto& [u, w] : values_) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", w, ball_mass(u));
    os << u.str() << "," << u.length() << "," << buf << "\n";
  }
}

RadiusClass radius_to_generation(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  double neg_log = -std::log(r);
  if (neg_log < 0.0) return {1, true};
  return {static_cast<int>(std::floor(neg_log)) + 1, false};
}

BallRelation ball_relation(const Word& u, const Word& v) {
  Word w = meet(u, v);
  if (w.length() == u.length() && w.length() == v.length())
    return BallRelation::kEqual;
  if (w.length() == v.length()) return BallRelation::kFirstInsideSecond;
  if (w.length() == u.length()) return BallRelation::kSecondInsideFirst;
  return BallRelation::kDisjoint;
}

}  // namespace gwlab
