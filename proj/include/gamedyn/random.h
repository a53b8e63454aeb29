#ifndef GAMEDYN_RANDOM_H_
#define GAMEDYN_RANDOM_H_

#include <cmath>
#include <cstdint>

namespace gamedyn {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based stream: the value at `counter` is the (counter+1)-th output of
// a SplitMix64 generator whose state starts at `key`. Any element can be
// produced independently, so results do not depend on evaluation order.
class CounterStream {
 public:
  constexpr CounterStream(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(seed ^ mix64((stream + 1) * 0xD1B54A32D192ED03ULL))) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return mix64(key_ + (counter + 1) * kGoldenGamma);
  }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  constexpr double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound).
  constexpr std::uint64_t below(std::uint64_t counter,
                                std::uint64_t bound) const {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(bits(counter)) * bound) >> 64);
  }

  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

// Standard normal quantile, Wichura's AS241 (PPND16). Relative accuracy about
// 1e-16 on (0, 1).
inline double normal_quantile(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

inline double CounterStream::normal(std::uint64_t counter) const {
  return normal_quantile(uniform(counter));
}

}  // namespace gamedyn

#endif  // GAMEDYN_RANDOM_H_
