#include "curvindex/spec_parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <vector>

#include "curvindex/error.hpp"
#include "curvindex/zoo.hpp"

namespace curvindex {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) continue;
      chars_.push_back(text[i]);
      origin_.push_back(i);
    }
    origin_.push_back(text.size());
  }

  Operator parse() {
    Operator result = term();
    while (accept("(+)")) result = direct_sum({std::move(result), term()});
    if (pos_ != chars_.size()) fail("unexpected trailing input");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(origin_[pos_], what + " at position " + std::to_string(origin_[pos_]));
  }

  bool accept(std::string_view token) {
    if (std::string_view(chars_).substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  template <typename T>
  T number() {
    const char* first = chars_.data() + pos_;
    const char* last = chars_.data() + chars_.size();
    if (std::is_unsigned_v<T> && first != last && *first == '-') fail("expected a non-negative integer");
    T value{};
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) fail(std::is_floating_point_v<T> ? "expected a number" : "expected an integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  Operator term() {
    const std::size_t start = pos_;
    if (accept("shift(")) {
      const int k = number<int>();
      expect(")");
      return shift_power(k);
    }
    if (accept("wshift([")) {
      std::vector<Complex> prefix;
      if (!accept("]")) {
        prefix.emplace_back(number<double>());
        while (accept(",")) prefix.emplace_back(number<double>());
        expect("]");
      }
      expect(";");
      const double tail = number<double>();
      expect(")");
      return construct(start, [&] { return weighted_shift(prefix, tail); });
    }
    if (accept("iso(k=")) {
      const int k = number<int>();
      expect(",m=");
      const int m = number<int>();
      expect(",seed=");
      const auto seed = number<std::uint64_t>();
      expect(")");
      return construct(start, [&] { return sandwich_isometry(k, m, seed); });
    }
    if (accept("unitary(m=")) {
      const int m = number<int>();
      expect(",seed=");
      const auto seed = number<std::uint64_t>();
      expect(")");
      return construct(start, [&] { return unitary_embed(random_unitary(m, seed)); });
    }
    if (accept("adj(")) {
      Operator inner = term();
      expect(")");
      return adjoint(inner);
    }
    fail("expected shift(, wshift(, iso(, unitary( or adj(");
  }

  // Constructor errors other than validation verdicts are reported as parse
  // errors at the start of the term.
  template <typename F>
  Operator construct(std::size_t start, F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidArgument) throw;
      pos_ = start;
      fail(e.what());
    }
  }

  std::string chars_;
  std::vector<std::size_t> origin_;
  std::size_t pos_ = 0;
};

}  // namespace

Operator parse_operator_spec(std::string_view text) { return Parser(text).parse(); }

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace curvindex
