#include "roughiso/random.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace roughiso {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash64(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

std::uint64_t hash_string(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

Seed Seed::child(std::string label, std::uint64_t counter) const {
  Seed s = *this;
  s.labels.emplace_back(std::move(label), counter);
  return s;
}

std::uint64_t Seed::digest() const {
  std::uint64_t h = mix64(master);
  for (const auto& [label, counter] : labels) {
    h = mix64(h ^ hash_string(label));
    h = mix64(h ^ counter);
  }
  return h;
}

Rng::Rng(const Seed& seed) : engine_(seed.digest()) {}

double Rng::uniform_open0() {
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * bound) >> 64);
}

std::int64_t Rng::geom_half() {
  std::int64_t base = 0;
  for (;;) {
    std::uint64_t w = engine_();
    if (w != 0) return base + std::countr_zero(w) + 1;
    base += 64;
  }
}

std::int64_t Rng::geom_le(std::int64_t M) {
  if (M < 1) throw std::invalid_argument("geom_le needs M >= 1");
  if (M > 62) {
    // P(Geom(1/2) > 62) = 2^-62; conditioning by redraw is exact and the
    // loop body essentially never repeats.
    for (;;) {
      std::int64_t k = geom_half();
      if (k <= M) return k;
    }
  }
  // v uniform on [1, 2^M - 1]; the count of v with bit width b is 2^(b-1),
  // so k = M - width(v) + 1 has mass proportional to 2^-k on {1..M}.
  std::uint64_t range = (std::uint64_t{1} << M) - 1;
  std::uint64_t v = 1 + below(range);
  return M - static_cast<std::int64_t>(std::bit_width(v)) + 1;
}

std::int64_t Rng::geom(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("geom needs p in (0,1]");
  if (p == 1.0) return 1;
  if (p == 0.5) return geom_half();
  double u = uniform_open0();
  double k = std::ceil(std::log(u) / std::log1p(-p));
  return k < 1.0 ? 1 : static_cast<std::int64_t>(k);
}

double long_gap_probability(std::int64_t M) { return std::ldexp(1.0, static_cast<int>(-M)); }

std::int64_t Rng::run_length(std::int64_t M) {
  double u = uniform_open0();
  double v = std::floor(std::log(u) / std::log1p(-long_gap_probability(M)));
  return static_cast<std::int64_t>(v);
}

std::int64_t Rng::run_length_below(std::int64_t M, std::int64_t K) {
  if (K < 1) throw std::invalid_argument("run_length_below needs K >= 1");
  double lq = std::log1p(-long_gap_probability(M));  // log(1 - 2^-M)
  double mass = -std::expm1(static_cast<double>(K) * lq);  // 1 - (1 - 2^-M)^K
  double u = uniform_open0();
  double z = std::ceil(std::log1p(-u * mass) / lq) - 1.0;
  if (z < 0.0) z = 0.0;
  if (z > static_cast<double>(K - 1)) z = static_cast<double>(K - 1);
  return static_cast<std::int64_t>(z);
}

double Rng::exponential(double rate) { return -std::log(uniform_open0()) / rate; }

}  // namespace roughiso
