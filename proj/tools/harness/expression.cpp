#include "harness/expression.hpp"

#include <cctype>
#include <stdexcept>

#include "momatch/text_io.hpp"

namespace momatch::harness {

namespace {

class Parser {
 public:
  Parser(const std::string& text, std::size_t n) : s_(text), n_(n) {}

  Polynomial parse() {
    Polynomial::Terms terms;
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (peek('+') || peek('-')) {
        sign = s_[pos_] == '-' ? -1.0 : 1.0;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [idx, coef] = term();
      terms[MultiIndex(std::move(idx))] += sign * coef;
    }
    std::erase_if(terms, [](const auto& kv) { return kv.second == 0.0; });
    return Polynomial(n_, std::move(terms));
  }

 private:
  std::pair<std::vector<int>, double> term() {
    std::vector<int> exps(n_, 0);
    double coef = 1.0;
    bool any = false;
    while (true) {
      if (pos_ < s_.size() && (s_[pos_] == 'x' || s_[pos_] == 'X')) {
        ++pos_;
        const std::size_t var = integer();
        if (var < 1 || var > n_) fail("variable out of range");
        int power = 1;
        skip();
        if (peek('^')) {
          ++pos_;
          skip();
          power = static_cast<int>(integer());
        }
        exps[var - 1] += power;
      } else {
        coef *= number();
      }
      any = true;
      skip();
      if (!peek('*')) break;
      ++pos_;
      skip();
    }
    if (!any) fail("empty term");
    return {std::move(exps), coef};
  }

  std::size_t integer() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stoul(s_.substr(start, pos_ - start));
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
            s_[pos_] == 'e' || s_[pos_] == 'E' ||
            ((s_[pos_] == '-' || s_[pos_] == '+') && pos_ > start &&
             (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    if (start == pos_) fail("expected a number or variable");
    return parse_double(s_.substr(start, pos_ - start));
  }

  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial expression: " + what + " at position " +
                                std::to_string(pos_) + " in '" + s_ + "'");
  }

  const std::string& s_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial_expression(const std::string& text, std::size_t n) {
  return Parser(text, n).parse();
}

}  // namespace momatch::harness
