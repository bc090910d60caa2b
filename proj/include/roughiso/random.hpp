#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace roughiso {

/// Master seed plus a path of (purpose, counter) labels.
///
/// A stream is identified by the whole path, so adding a new labelled
/// stream never shifts the draws of an existing one.
struct Seed {
  std::uint64_t master = 0;
  std::vector<std::pair<std::string, std::uint64_t>> labels;

  [[nodiscard]] Seed child(std::string label, std::uint64_t counter = 0) const;
  /// 64-bit digest of master and labels.
  [[nodiscard]] std::uint64_t digest() const;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
/// Seed derivation for parallel trials: mix64(master ^ mix64(index + golden)).
std::uint64_t hash64(std::uint64_t master, std::uint64_t index);
/// FNV-1a over the bytes of `text`, then mixed.
std::uint64_t hash_string(const std::string& text);

/// Random stream (mt19937_64) with the samplers used throughout.
class Rng {
 public:
  explicit Rng(const Seed& seed);
  explicit Rng(std::uint64_t state) : engine_(state) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on (0, 1], 53 bits.
  double uniform_open0();
  /// Uniform integer in [0, bound) via 128-bit multiply-shift.
  std::uint64_t below(std::uint64_t bound);

  /// Geometric(1/2) on {1, 2, ...}: trailing zeros of random words.
  std::int64_t geom_half();
  /// Geom(1/2) conditioned to be <= M (inverse CDF of the renormalized law).
  std::int64_t geom_le(std::int64_t M);
  /// M + Geom(1/2).
  std::int64_t geom_gt(std::int64_t M) { return M + geom_half(); }
  /// Geometric(p) on {1, 2, ...} by inverse CDF.
  std::int64_t geom(double p);
  /// Geom(2^-M) - 1: number of short gaps before the next long one.
  std::int64_t run_length(std::int64_t M);
  /// Geom(2^-M) - 1 conditioned to be < K.
  std::int64_t run_length_below(std::int64_t M, std::int64_t K);
  /// Exponential with the given rate.
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

/// Probability that a Geom(1/2) gap is long, 2^-M, as a double.
double long_gap_probability(std::int64_t M);

}  // namespace roughiso
