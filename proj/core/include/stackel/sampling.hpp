#pragma once

#include "stackel/rational.hpp"
#include "stackel/scalar_field.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace stk {

/// Deterministic random source. Every randomized routine in the library
/// receives one of these (or a seed), so identical seeds give identical runs.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    long integer(long lo, long hi); // inclusive
    double uniform(double lo, double hi);
    /// Random rational num/den with |num| <= num_range (nonzero optional)
    /// and 1 <= den <= den_max.
    Rational rational(long num_range, long den_max, bool nonzero = false);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Stable sub-seed derivation, so independent sampling streams within one
/// command do not alias.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// A point (double coordinates) at which every field in `fields` evaluates
/// without hitting a pole. Throws PoleError after `max_tries` failures.
std::vector<double> sample_point(std::span<const ScalarField> fields, int dimension,
                                 SeededRng& rng, int max_tries = 200);

/// Rational point, every field evaluable; exact-backend fields are checked
/// exactly. Throws PoleError after `max_tries` failures.
std::vector<Rational> sample_rational_point(std::span<const ScalarField> fields, int dimension,
                                            SeededRng& rng, int max_tries = 200);

std::vector<double> to_double_point(std::span<const Rational> point);

} // namespace stk
