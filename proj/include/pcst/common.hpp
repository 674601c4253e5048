#ifndef PCST_COMMON_HPP
#define PCST_COMMON_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <system_error>

namespace pcst {

using real = double;
using node = int;

/// Marks a node outside the tree (p = *) in parent vectors.
inline constexpr node kNone = -1;

inline constexpr real kNegInf = -std::numeric_limits<real>::infinity();
inline constexpr real kPosInf = std::numeric_limits<real>::infinity();

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// gamma * x with 0 * (-inf) taken as 0, so an inactive reinforcement term
/// never poisons a finite entry.
inline real scaled(real gamma, real x) { return gamma == 0.0 ? 0.0 : gamma * x; }

/// Shortest decimal text that parses back to the same double.
inline std::string format_real(real x)
{
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{})
    throw Error("cannot format number");
  return std::string(buf.data(), end);
}

/// Parses a full token as a double; returns false on trailing garbage.
inline bool parse_real(std::string_view text, real& out)
{
  if (text == "inf") { out = kPosInf; return true; }
  if (text == "-inf") { out = kNegInf; return true; }
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

/// Seedable random source shared by generators and solver noise.
///
/// The engine is std::mt19937_64 (fully specified by the standard). Every
/// derived draw is computed here from raw 64-bit outputs rather than through
/// <random> distributions, whose algorithms are implementation defined, so a
/// (seed, call sequence) pair yields the same numbers on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  real uniform01() { return static_cast<real>(engine_() >> 11) * 0x1.0p-53; }

  real uniform(real lo, real hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
  {
    const auto span = static_cast<real>(hi - lo + 1);
    auto k = static_cast<std::int64_t>(std::floor(uniform01() * span));
    return lo + std::min<std::int64_t>(k, hi - lo);
  }

  /// Box-Muller; consumes two uniforms per call.
  real normal(real mean, real sd)
  {
    const real u1 = 1.0 - uniform01();  // (0, 1]
    const real u2 = uniform01();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace pcst

#endif
