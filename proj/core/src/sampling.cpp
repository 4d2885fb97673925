#include "stackel/sampling.hpp"

#include "stackel/errors.hpp"

namespace stk {

long SeededRng::integer(long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    return dist(engine_);
}

double SeededRng::uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(engine_);
}

Rational SeededRng::rational(long num_range, long den_max, bool nonzero) {
    long num = integer(-num_range, num_range);
    if (nonzero) {
        while (num == 0) num = integer(-num_range, num_range);
    }
    long den = integer(1, den_max);
    return stk::rational(num, den);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 step over seed xor stream
    std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> sample_point(std::span<const ScalarField> fields, int dimension,
                                 SeededRng& rng, int max_tries) {
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<double> point(static_cast<std::size_t>(dimension));
        for (auto& x : point) x = rng.uniform(-2.0, 2.0);
        bool ok = true;
        for (const ScalarField& f : fields) {
            try {
                (void)f.evaluate(point);
            } catch (const PoleError&) {
                ok = false;
                break;
            }
        }
        if (ok) return point;
    }
    throw PoleError("failed to sample a pole-free point");
}

std::vector<Rational> sample_rational_point(std::span<const ScalarField> fields, int dimension,
                                            SeededRng& rng, int max_tries) {
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<Rational> point(static_cast<std::size_t>(dimension));
        for (auto& x : point) x = rng.rational(8, 4);
        bool ok = true;
        std::vector<double> dpoint = to_double_point(point);
        for (const ScalarField& f : fields) {
            try {
                if (f.backend() == Backend::Exact)
                    (void)f.evaluate_exact(point);
                else
                    (void)f.evaluate(dpoint);
            } catch (const PoleError&) {
                ok = false;
                break;
            }
        }
        if (ok) return point;
    }
    throw PoleError("failed to sample a pole-free rational point");
}

std::vector<double> to_double_point(std::span<const Rational> point) {
    std::vector<double> out(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) out[i] = to_double(point[i]);
    return out;
}

} // namespace stk
