#include "pkit/model.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace pkit {

namespace {

template <class Vec> void trim_zeros(Vec &q) {
  while (!q.empty() && q.back() == 0) q.pop_back();
}

template <class Vec> int lex_sign(const Vec &q) {
  for (const auto &v : q)
    if (v != 0) return sgn(v);
  return 0;
}

template <class Vec> std::strong_ordering lex_cmp(const Vec &a, const Vec &b) {
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    Rational x = i < a.size() ? a[i] : Rational(0);
    Rational y = i < b.size() ? b[i] : Rational(0);
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

void add_into(std::vector<Rational> &a, const std::vector<Rational> &b, int sign) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (sign > 0) a[i] += b[i];
    else a[i] -= b[i];
  }
}

std::string class_name(std::size_t i) {
  return i == 0 ? "inf" : "inf" + std::to_string(i + 1);
}

template <class Z>
std::string format(const std::vector<Rational> &q, const Z &z) {
  std::string out;
  auto emit = [&](bool neg, const std::string &body) {
    if (out.empty()) out = neg ? "-" + body : body;
    else out += (neg ? " - " : " + ") + body;
  };
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0) continue;
    Rational a = abs(q[i]);
    emit(q[i] < 0, class_name(i) + "*" + a.get_str());
  }
  if (z != 0 || out.empty()) {
    if (out.empty()) out = z.get_str();
    else emit(z < 0, Z(abs(z)).get_str());
  }
  return out;
}

// Shared literal reader; integer part is returned as a rational.
void parse_literal(std::string_view text, std::vector<Rational> &q, Rational &z) {
  std::size_t i = 0;
  auto fail = [&](const std::string &why) {
    throw DomainError("bad element literal '" + std::string(text) + "': " + why);
  };
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto read_number = [&]() -> Rational {
    skip();
    std::size_t start = i;
    while (i < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/'))
      ++i;
    if (start == i) fail("number expected");
    return parse_rational(text.substr(start, i - start));
  };
  bool first = true;
  z = 0;
  q.clear();
  skip();
  if (i == text.size()) fail("empty");
  while (true) {
    skip();
    if (i == text.size()) break;
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else if (!first) {
      fail("'+' or '-' expected");
    }
    first = false;
    if (text.substr(i, 3) == "inf") {
      i += 3;
      std::size_t rank = 0;
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i > start) {
        long k = std::stol(std::string(text.substr(start, i - start)));
        if (k < 2) fail("class index must be >= 2");
        rank = static_cast<std::size_t>(k - 1);
      }
      skip();
      Rational coeff = 1;
      if (i < text.size() && text[i] == '*') {
        ++i;
        coeff = read_number();
      }
      if (q.size() <= rank) q.resize(rank + 1, Rational(0));
      q[rank] += sign * coeff;
    } else {
      z += sign * read_number();
    }
  }
  trim_zeros(q);
}

} // namespace

ModelElement::ModelElement(std::vector<Rational> q, Integer z)
    : q_(std::move(q)), z_(std::move(z)) {
  trim();
}

ModelElement ModelElement::infinite(const Rational &q, std::size_t rank,
                                    const Integer &z) {
  std::vector<Rational> v(rank + 1, Rational(0));
  v[rank] = q;
  return ModelElement(std::move(v), z);
}

void ModelElement::trim() { trim_zeros(q_); }

int ModelElement::sign() const {
  int s = lex_sign(q_);
  return s != 0 ? s : sgn(z_);
}

Integer ModelElement::residue(const Integer &n) const { return mod(z_, n); }

ModelElement ModelElement::div_floor(const Integer &n) const {
  if (n <= 0) throw DomainError("divisor must be positive");
  std::vector<Rational> q = q_;
  for (auto &v : q) v /= Rational(n);
  return ModelElement(std::move(q), floor_div(z_, n));
}

ModelElement ModelElement::div_exact(const Integer &n) const {
  if (residue(n) != 0)
    throw DomainError(str() + " is not divisible by " + n.get_str());
  return div_floor(n);
}

ModelElement ModelElement::operator-() const {
  ModelElement r = *this;
  for (auto &v : r.q_) v = -v;
  r.z_ = -r.z_;
  return r;
}

ModelElement &ModelElement::operator+=(const ModelElement &o) {
  add_into(q_, o.q_, 1);
  z_ += o.z_;
  trim();
  return *this;
}

ModelElement &ModelElement::operator-=(const ModelElement &o) {
  add_into(q_, o.q_, -1);
  z_ -= o.z_;
  trim();
  return *this;
}

ModelElement &ModelElement::operator*=(const Integer &k) {
  for (auto &v : q_) v *= Rational(k);
  z_ *= k;
  trim();
  return *this;
}

bool operator==(const ModelElement &a, const ModelElement &b) {
  return a.z_ == b.z_ && a.q_ == b.q_;
}

std::strong_ordering operator<=>(const ModelElement &a, const ModelElement &b) {
  auto c = lex_cmp(a.q_, b.q_);
  if (c != 0) return c;
  if (a.z_ < b.z_) return std::strong_ordering::less;
  if (a.z_ > b.z_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string ModelElement::str() const { return format(q_, z_); }

std::ostream &operator<<(std::ostream &os, const ModelElement &e) {
  return os << e.str();
}

ScaledElement::ScaledElement(const ModelElement &e) : q_(e.q()), z_(e.z()) {}

ScaledElement::ScaledElement(std::vector<Rational> q, Rational z)
    : q_(std::move(q)), z_(std::move(z)) {
  trim();
}

void ScaledElement::trim() { trim_zeros(q_); }

int ScaledElement::sign() const {
  int s = lex_sign(q_);
  return s != 0 ? s : sgn(z_);
}

ScaledElement ScaledElement::operator-() const {
  ScaledElement r = *this;
  for (auto &v : r.q_) v = -v;
  r.z_ = -r.z_;
  return r;
}

ScaledElement &ScaledElement::operator+=(const ScaledElement &o) {
  add_into(q_, o.q_, 1);
  z_ += o.z_;
  trim();
  return *this;
}

ScaledElement &ScaledElement::operator-=(const ScaledElement &o) {
  add_into(q_, o.q_, -1);
  z_ -= o.z_;
  trim();
  return *this;
}

ScaledElement &ScaledElement::operator*=(const Rational &k) {
  for (auto &v : q_) v *= k;
  z_ *= k;
  trim();
  return *this;
}

bool operator==(const ScaledElement &a, const ScaledElement &b) {
  return a.z_ == b.z_ && a.q_ == b.q_;
}

std::strong_ordering operator<=>(const ScaledElement &a, const ScaledElement &b) {
  auto c = lex_cmp(a.q_, b.q_);
  if (c != 0) return c;
  if (a.z_ < b.z_) return std::strong_ordering::less;
  if (a.z_ > b.z_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ModelElement ScaledElement::to_model() const {
  if (!in_model()) throw DomainError(str() + " is not an element of the model");
  return ModelElement(q_, z_.get_num());
}

ModelElement ScaledElement::floor() const { return ModelElement(q_, pkit::floor(z_)); }
ModelElement ScaledElement::ceil() const { return ModelElement(q_, pkit::ceil(z_)); }

std::string ScaledElement::str() const { return format(q_, z_); }

std::ostream &operator<<(std::ostream &os, const ScaledElement &e) {
  return os << e.str();
}

ModelElement parse_element(std::string_view text) {
  std::vector<Rational> q;
  Rational z;
  parse_literal(text, q, z);
  if (z.get_den() != 1)
    throw DomainError("bad element literal '" + std::string(text) +
                      "': integer part must be an integer");
  return ModelElement(std::move(q), z.get_num());
}

ScaledElement parse_scaled(std::string_view text) {
  std::vector<Rational> q;
  Rational z;
  parse_literal(text, q, z);
  return ScaledElement(std::move(q), std::move(z));
}

bool interval_infinite(const ModelElement &lo, const ModelElement &hi) {
  if (lo > hi) throw DomainError("interval_infinite: lo > hi");
  return !(hi - lo).is_finite();
}

bool is_finite(const ModelElement &e) { return e.is_finite(); }

std::size_t fresh_rank(const std::vector<ModelElement> &elems) {
  std::size_t r = 0;
  for (const auto &e : elems) r = std::max(r, e.rank());
  return r;
}

} // namespace pkit
