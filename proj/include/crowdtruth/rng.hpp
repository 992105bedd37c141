#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace crowdtruth {

// splitmix64 step; used to derive independent substream seeds from a base
// seed so parallel generation stays schedule-independent.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

// Seeded sampler. All distribution transforms are implemented here (rather
// than with std:: distributions, whose algorithms are implementation-defined)
// so identical seeds give identical draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }
    double uniform01();                // [0, 1), 53-bit resolution
    double uniform01_open();           // (0, 1]
    int uniform_int(int bound);        // [0, bound), unbiased
    double normal();                   // standard normal, Marsaglia polar
    double gamma(double alpha);        // shape alpha > 0, unit scale
    void dirichlet(std::span<const double> alpha, std::span<double> out);
    int categorical(std::span<const double> probs);  // 0-based index

    // k distinct values from [0, n), ascending.
    std::vector<int> sample_without_replacement(int n, int k);

private:
    std::mt19937_64 eng_;
};

// Truncated Zipf on {1..n_max} with P(N) proportional to N^(-exponent).
class ZipfSampler {
public:
    ZipfSampler(int n_max, double exponent);
    int sample(Rng& rng) const;
    double prob(int value) const;

private:
    std::vector<double> cdf_;
    std::vector<double> pmf_;
};

}  // namespace crowdtruth
