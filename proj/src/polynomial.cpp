#include "covgeo/polynomial.hpp"

#include "covgeo/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

namespace covgeo {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Polynomial::Term> run() {
    std::vector<Polynomial::Term> terms;
    skip_space();
    if (at_end()) fail("empty polynomial");
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1.0 : 1.0;
    while (true) {
      terms.push_back(term(sign));
      skip_space();
      if (at_end()) break;
      const char c = take();
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      sign = c == '-' ? -1.0 : 1.0;
    }
    return terms;
  }

 private:
  Polynomial::Term term(double sign) {
    Polynomial::Term t;
    t.coefficient = sign;
    while (true) {
      skip_space();
      if (at_end()) fail("expected a factor");
      factor(t);
      skip_space();
      if (!at_end() && peek() == '*') {
        take();
        continue;
      }
      break;
    }
    return t;
  }

  void factor(Polynomial::Term& t) {
    const char c = peek();
    if (c == 'x' || c == 'X') {
      take();
      const int index = integer();
      if (index < 1) fail("variable index must be at least 1");
      int power = 1;
      skip_space();
      if (!at_end() && peek() == '^') {
        take();
        skip_space();
        power = integer();
      }
      if (static_cast<int>(t.powers.size()) < index) t.powers.resize(static_cast<std::size_t>(index), 0);
      t.powers[static_cast<std::size_t>(index - 1)] += power;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const std::string buffer(text_.substr(pos_));
      const double value = std::strtod(buffer.c_str(), &end);
      const auto consumed = static_cast<std::size_t>(end - buffer.c_str());
      if (consumed == 0) fail("malformed number");
      pos_ += consumed;
      t.coefficient *= value;
      return;
    }
    fail("unexpected character");
  }

  int integer() {
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
    int value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) value = value * 10 + (take() - '0');
    return value;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "polynomial parse error at position " << pos_ << ": " << what << " in \"" << text_ << "\"";
    throw InvalidArgument(os.str());
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char take() { return text_[pos_++]; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial::Polynomial(std::vector<Term> terms) {
  // Merge like terms and drop zero coefficients.
  std::map<std::vector<int>, double> merged;
  for (auto& t : terms) {
    while (!t.powers.empty() && t.powers.back() == 0) t.powers.pop_back();
    merged[t.powers] += t.coefficient;
  }
  for (auto& [powers, coefficient] : merged) {
    if (coefficient != 0.0) terms_.push_back(Term{coefficient, powers});
  }
}

Polynomial Polynomial::parse(std::string_view text) { return Polynomial(Parser(text).run()); }

double Polynomial::operator()(const Vector& x) const {
  double total = 0.0;
  for (const auto& t : terms_) {
    double value = t.coefficient;
    for (std::size_t i = 0; i < t.powers.size(); ++i) {
      if (t.powers[i] == 0) continue;
      if (static_cast<Eigen::Index>(i) >= x.size()) throw DimensionMismatch("polynomial uses a variable beyond the point dimension");
      value *= std::pow(x(static_cast<Eigen::Index>(i)), t.powers[i]);
    }
    total += value;
  }
  return total;
}

int Polynomial::max_variable() const noexcept {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, static_cast<int>(t.powers.size()));
  return m;
}

bool Polynomial::is_zero() const noexcept { return terms_.empty(); }

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << (t.coefficient < 0 ? " - " : " + ");
    else if (t.coefficient < 0) os << "-";
    first = false;
    os << std::abs(t.coefficient);
    for (std::size_t i = 0; i < t.powers.size(); ++i) {
      if (t.powers[i] == 0) continue;
      os << "*x" << (i + 1);
      if (t.powers[i] != 1) os << "^" << t.powers[i];
    }
  }
  return os.str();
}

}  // namespace covgeo
