#include "oiglab/errors.hpp"
#include "oiglab/random.hpp"
#include "oiglab/rational.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

namespace oiglab {

namespace {

std::int64_t parse_integer(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

std::string trim(std::string_view text) {
  const auto b = text.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = text.find_last_not_of(" \t");
  return std::string(text.substr(b, e - b + 1));
}

}  // namespace

Rational parse_rational(std::string_view raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const auto num = parse_integer(std::string_view(text).substr(0, slash), text);
    const auto den = parse_integer(std::string_view(text).substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(num, den);
  }

  if (const auto dot = text.find('.'); dot != std::string::npos) {
    std::string_view whole = std::string_view(text).substr(0, dot);
    std::string_view frac = std::string_view(text).substr(dot + 1);
    if (frac.size() > 17 || frac.find_first_not_of("0123456789") != std::string_view::npos) {
      throw std::invalid_argument("malformed rational '" + text + "'");
    }
    const bool negative = !whole.empty() && whole.front() == '-';
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::int64_t int_part =
        (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_integer(whole, text);
    const std::int64_t frac_part = frac.empty() ? 0 : parse_integer(frac, text);
    const Rational magnitude = Rational(negative ? -int_part : int_part) + Rational(frac_part, scale);
    return negative ? -magnitude : magnitude;
  }

  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

std::int64_t floor_of(const Rational& q) {
  auto n = q.numerator();
  auto d = q.denominator();  // always positive
  auto f = n / d;
  if (n % d != 0 && n < 0) --f;
  return f;
}

std::int64_t ceil_of(const Rational& q) {
  auto n = q.numerator();
  auto d = q.denominator();
  auto c = n / d;
  if (n % d != 0 && n > 0) ++c;
  return c;
}

BudgetExceeded::BudgetExceeded(std::string limit, std::size_t allowed, std::size_t requested)
    : Error("budget '" + limit + "' exceeded: limit " + std::to_string(allowed) +
            ", needed at least " + std::to_string(requested)),
      limit_(std::move(limit)),
      allowed_(allowed),
      requested_(requested) {}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(line == 0 ? what
                      : what + " (line " + std::to_string(line) + ", column " +
                            std::to_string(column) + ")"),
      line_(line),
      column_(column) {}

Rng stream_generator(std::uint64_t master_seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

}  // namespace oiglab
