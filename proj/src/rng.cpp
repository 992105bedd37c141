#include "crowdtruth/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace crowdtruth {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform01_open() {
    return 1.0 - uniform01();
}

int Rng::uniform_int(int bound) {
    if (bound <= 0) throw std::invalid_argument("uniform_int: bound must be positive");
    const std::uint64_t b = static_cast<std::uint64_t>(bound);
    const std::uint64_t threshold = (0 - b) % b;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold) return static_cast<int>(r % b);
    }
}

double Rng::normal() {
    for (;;) {
        double u = 2.0 * uniform01() - 1.0;
        double v = 2.0 * uniform01() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

double Rng::gamma(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("gamma: alpha must be positive");
    if (alpha < 1.0) {
        // Boost trick: Gamma(a) = Gamma(a+1) * U^(1/a).
        return gamma(alpha + 1.0) * std::pow(uniform01_open(), 1.0 / alpha);
    }
    // Marsaglia & Tsang squeeze method.
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

void Rng::dirichlet(std::span<const double> alpha, std::span<double> out) {
    if (alpha.size() != out.size()) throw std::invalid_argument("dirichlet: size mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        out[k] = gamma(alpha[k]);
        sum += out[k];
    }
    if (sum <= 0.0) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
        return;
    }
    for (double& v : out) v /= sum;
}

int Rng::categorical(std::span<const double> probs) {
    double total = 0.0;
    for (double p : probs) total += p;
    const double r = uniform01() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
        acc += probs[k];
        if (r < acc) return static_cast<int>(k);
    }
    return static_cast<int>(probs.size()) - 1;
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        int j = i + uniform_int(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

ZipfSampler::ZipfSampler(int n_max, double exponent) {
    if (n_max < 1) throw std::invalid_argument("ZipfSampler: n_max must be >= 1");
    if (!(exponent > 0.0)) throw std::invalid_argument("ZipfSampler: exponent must be positive");
    pmf_.resize(n_max);
    double z = 0.0;
    for (int v = 1; v <= n_max; ++v) {
        pmf_[v - 1] = std::pow(static_cast<double>(v), -exponent);
        z += pmf_[v - 1];
    }
    cdf_.resize(n_max);
    double acc = 0.0;
    for (int v = 0; v < n_max; ++v) {
        pmf_[v] /= z;
        acc += pmf_[v];
        cdf_[v] = acc;
    }
    cdf_.back() = 1.0;
}

int ZipfSampler::sample(Rng& rng) const {
    const double r = rng.uniform01();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), r);
    if (it == cdf_.end()) --it;
    return static_cast<int>(it - cdf_.begin()) + 1;
}

double ZipfSampler::prob(int value) const {
    return pmf_.at(value - 1);
}

}  // namespace crowdtruth
