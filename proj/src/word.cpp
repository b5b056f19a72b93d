#include "gwlab/word.hpp"

#include <algorithm>
#include <stdexcept>

namespace gwlab {

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (Letter l : letters_) {
    if (l < 1) throw std::invalid_argument("word letters must be >= 1");
  }
}

Word Word::restrict(std::size_t m) const {
  if (m >= letters_.size()) return *this;
  return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + m));
}

Word Word::parent() const {
  if (letters_.empty()) throw std::logic_error("root has no parent");
  return restrict(letters_.size() - 1);
}

Word Word::child(Letter i) const {
  if (i < 1) throw std::invalid_argument("child index must be >= 1");
  std::vector<Letter> ls = letters_;
  ls.push_back(i);
  Word w;
  w.letters_ = std::move(ls);
  return w;
}

Word Word::concat(const Word& v) const {
  std::vector<Letter> ls = letters_;
  ls.insert(ls.end(), v.letters_.begin(), v.letters_.end());
  Word w;
  w.letters_ = std::move(ls);
  return w;
}

bool Word::is_prefix_of(const Word& v) const {
  if (length() > v.length()) return false;
  return std::equal(letters_.begin(), letters_.end(), v.letters_.begin());
}

std::string Word::str() const {
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i > 0) out.push_back('.');
    out += std::to_string(letters_[i]);
  }
  return out;
}

Word Word::parse(const std::string& text) {
  if (text.empty()) return Word();
  std::vector<Letter> letters;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    std::string tok = text.substr(pos, dot == std::string::npos
                                           ? std::string::npos
                                           : dot - pos);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad word token '" + tok + "' in '" + text +
                                  "'");
    unsigned long v = std::stoul(tok);
    if (v < 1) throw std::invalid_argument("word letters must be >= 1");
    letters.push_back(static_cast<Letter>(v));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return Word(std::move(letters));
}

Word meet(const Word& u, const Word& v) {
  std::size_t n = std::min(u.length(), v.length());
  std::size_t k = 0;
  while (k < n && u.letter(k) == v.letter(k)) ++k;
  return u.restrict(k);
}

}  // namespace gwlab
