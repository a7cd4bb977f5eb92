#ifndef PASSAGE_SIMULATE_HPP
#define PASSAGE_SIMULATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "passage/chain.hpp"
#include "passage/errors.hpp"

namespace passage {

inline constexpr std::int64_t kDefaultStepCap = 10'000'000;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent substream per (i, j, trial), all derived from the master seed.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t i, std::uint64_t j,
                                    std::uint64_t trial) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ (0x9e3779b97f4a7c15ULL + i));
    h = splitmix64(h ^ (0x9e3779b97f4a7c15ULL + j));
    h = splitmix64(h ^ (0x9e3779b97f4a7c15ULL + trial));
    return h;
}

// Uniform in [0, 1) from the top 53 bits of the engine output. Avoids
// std::uniform_real_distribution, whose output is implementation-defined.
template <class Engine>
double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Precomputed row CDFs for repeated transition sampling.
class ChainSampler {
  public:
    explicit ChainSampler(const TransitionMatrix& t) : n_(t.n()), cdf_(t.n()), last_(t.n(), 0) {
        for (int i = 0; i < n_; ++i) {
            cdf_[i].resize(n_);
            double acc = 0.0;
            for (int j = 0; j < n_; ++j) {
                acc += t(i, j);
                cdf_[i][j] = acc;
                if (t(i, j) > 0.0) last_[i] = j;
            }
        }
    }

    template <class Engine>
    int step(int state, Engine& eng) const {
        const double u = detail::uniform01(eng);
        const auto& c = cdf_[state];
        const int j = static_cast<int>(std::upper_bound(c.begin(), c.end(), u) - c.begin());
        return j < n_ ? j : last_[state];  // u beyond a row sum slightly below 1
    }

    // First passage time F_ij = min{p >= 1 : X_p = j | X_0 = i}. Even i = j
    // needs at least one step. Throws once the step cap is hit.
    template <class Engine>
    std::int64_t first_passage(int i, int j, Engine& eng,
                               std::int64_t step_cap = kDefaultStepCap) const {
        int state = i;
        for (std::int64_t p = 1; p <= step_cap; ++p) {
            state = step(state, eng);
            if (state == j) return p;
        }
        throw NumericError("step cap " + std::to_string(step_cap) +
                           " exceeded sampling passage " + std::to_string(i + 1) + " -> " +
                           std::to_string(j + 1));
    }

  private:
    int n_;
    std::vector<std::vector<double>> cdf_;
    std::vector<int> last_;
};

template <class Engine>
std::int64_t sample_first_passage(const TransitionMatrix& t, int i, int j, Engine& eng,
                                  std::int64_t step_cap = kDefaultStepCap) {
    return ChainSampler(t).first_passage(i, j, eng, step_cap);
}

// Sample means and standard errors of the first passage times.
struct SimulationReport {
    Matrix m_hat;
    Matrix stderr_;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
};

// `trials` independent samples per (i, j) pair, each on its own substream so
// the report is reproducible bit-for-bit from (t, trials, seed) regardless of
// evaluation order.
inline SimulationReport estimate_mfpt(const TransitionMatrix& t, std::int64_t trials,
                                      std::uint64_t seed,
                                      std::int64_t step_cap = kDefaultStepCap) {
    if (trials < 1) throw ValidationError("trials must be >= 1");
    const int n = t.n();
    const ChainSampler sampler(t);
    SimulationReport rep;
    rep.m_hat = Matrix::Zero(n, n);
    rep.stderr_ = Matrix::Zero(n, n);
    rep.trials = trials;
    rep.seed = seed;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double mean = 0.0, m2 = 0.0;  // Welford
            for (std::int64_t trial = 0; trial < trials; ++trial) {
                std::mt19937_64 eng(detail::substream_seed(seed, i, j, trial));
                const double x =
                    static_cast<double>(sampler.first_passage(i, j, eng, step_cap));
                const double d = x - mean;
                mean += d / static_cast<double>(trial + 1);
                m2 += d * (x - mean);
            }
            rep.m_hat(i, j) = mean;
            rep.stderr_(i, j) =
                trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1)) /
                                 std::sqrt(static_cast<double>(trials))
                           : 0.0;
        }
    return rep;
}

}  // namespace passage

#endif
