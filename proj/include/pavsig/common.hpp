#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace pavsig {

// Raised for malformed or inconsistent configuration (dimension mismatch,
// missing hidden information for an oracle, bad config file).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (out-of-range action, bad window).
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// A learner produced a non-finite TD error.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation is undefined for the given variant.
struct NotApplicableError : std::logic_error {
    using std::logic_error::logic_error;
};

// Truncated-return oracle cannot certify the requested precision.
struct OraclePrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seeded generator with platform-independent draws. The standard
// distributions are implementation-defined, which would break byte-identical
// outputs across toolchains, so integer and real draws are done by hand on
// top of the raw mt19937_64 stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(splitmix64(seed)) {}

    // Independent stream derived from (seed, stream id).
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        return Rng(splitmix64(seed ^ splitmix64(stream + 0x51ED270B27ULL)));
    }

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi], unbiased via rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi < lo) throw ContractViolation("uniform_int: hi < lo");
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) return static_cast<std::int64_t>(engine_());
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % range;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return lo + static_cast<std::int64_t>(draw % range);
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace pavsig
