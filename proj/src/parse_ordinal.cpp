#include "sforge/parse.hpp"

#include <cctype>

namespace sforge {

namespace {

class OrdScanner {
public:
  explicit OrdScanner(const std::string& text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eof() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) fail(ErrorKind::Parse, std::string("expected ") + what, long(pos_));
  }

  bool accept_word(const char* w) {
    skip_ws();
    std::size_t n = 0;
    while (w[n]) ++n;
    if (text_.compare(pos_, n, w) == 0) {
      // keyword must not continue as an identifier
      if (pos_ + n < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_ + n])))
        return false;
      pos_ += n;
      return true;
    }
    return false;
  }

  BigInt number() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail(ErrorKind::Parse, "expected a decimal natural", long(pos_));
    BigInt v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  std::size_t pos() const { return pos_; }

  Ordinal ordinal();

private:
  Ordinal atom();
  OrdTerm term();

  const std::string& text_;
  std::size_t pos_ = 0;
};

Ordinal OrdScanner::atom() {
  if (accept('(')) {
    Ordinal inner = ordinal();
    expect(')', "')'");
    return inner;
  }
  skip_ws();
  if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
    return Ordinal::from_nat(number());
  fail(ErrorKind::Parse, "expected ordinal atom", long(pos_));
}

OrdTerm OrdScanner::term() {
  skip_ws();
  if (accept_word("w")) {
    Ordinal exp = Ordinal::one();
    if (accept('^')) {
      if (accept_word("w")) {
        exp = Ordinal::omega();
      } else {
        exp = atom();
      }
    }
    BigInt coeff = 1;
    if (accept('*')) coeff = number();
    if (coeff < 1) fail(ErrorKind::Parse, "coefficient must be >= 1", long(pos_));
    return OrdTerm{exp, coeff};
  }
  BigInt n = number();
  if (n < 1) fail(ErrorKind::Parse, "zero term is not a CNF term", long(pos_));
  return OrdTerm{Ordinal::zero(), n};
}

Ordinal OrdScanner::ordinal() {
  if (accept_word("eps0")) return Ordinal::eps0();
  skip_ws();
  if (peek() == '0') {
    std::size_t save = pos_;
    BigInt n = number();
    if (n == 0) {
      if (peek() == '+') fail(ErrorKind::Parse, "0 cannot start a sum", long(pos_));
      return Ordinal::zero();
    }
    pos_ = save;
  }
  std::vector<OrdTerm> terms;
  terms.push_back(term());
  while (accept('+')) {
    std::size_t at = pos_;
    OrdTerm t = term();
    if (Ordinal::compare(t.exp, terms.back().exp) != std::strong_ordering::less)
      fail(ErrorKind::Parse, "exponents must strictly decrease (not normal Cantor form)", long(at));
    terms.push_back(std::move(t));
  }
  return Ordinal::from_terms(std::move(terms));
}

}  // namespace

Ordinal parse_ordinal(const std::string& text) {
  OrdScanner s(text);
  Ordinal v = s.ordinal();
  if (!s.eof()) fail(ErrorKind::Parse, "trailing input after ordinal", long(s.pos()));
  return v;
}

}  // namespace sforge
