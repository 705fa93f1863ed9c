#include "tailbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <random>
#include <thread>

namespace tailbound {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s = h ^ (stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
    h = splitmix64(s);
    return splitmix64(s) ^ h;
}

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

unsigned worker_count() {
    if (const char* env = std::getenv("TAILBOUND_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

constexpr std::size_t kMcChunk = 65536;

// Runs fn(chunk_index, first_sample, count) over all chunks; the chunk
// decomposition is fixed, so results do not depend on the worker count.
template <class Fn>
void for_each_chunk(std::size_t samples, Fn fn) {
    const std::size_t chunks = (samples + kMcChunk - 1) / kMcChunk;
    const unsigned workers = std::min<unsigned>(
        worker_count(), static_cast<unsigned>(chunks));
    auto run_stride = [&](unsigned offset) {
        for (std::size_t c = offset; c < chunks; c += workers) {
            const std::size_t first = c * kMcChunk;
            fn(c, first, std::min(kMcChunk, samples - first));
        }
    };
    if (workers <= 1) {
        run_stride(0);
        return;
    }
    std::vector<std::future<void>> futs;
    futs.reserve(workers);
    for (unsigned wkr = 0; wkr < workers; ++wkr) {
        futs.push_back(std::async(std::launch::async, run_stride, wkr));
    }
    for (auto& f : futs) f.get();
}

std::uint64_t count_signs_ge(const std::vector<double>& a, std::size_t i,
                             double partial, double t, bool two_sided) {
    if (i == a.size()) {
        std::uint64_t c = partial >= t ? 1u : 0u;
        if (two_sided && -partial >= t) ++c;
        return c;
    }
    return count_signs_ge(a, i + 1, partial + a[i], t, two_sided) +
           count_signs_ge(a, i + 1, partial - a[i], t, two_sided);
}

// All signed half-sums of the given weights, each accumulated in index
// order; not sorted.
std::vector<double> half_sums(const double* a, std::size_t n) {
    std::vector<double> sums{0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t sz = sums.size();
        sums.resize(2 * sz);
        for (std::size_t j = 0; j < sz; ++j) {
            sums[sz + j] = sums[j] - a[i];
            sums[j] = sums[j] + a[i];
        }
    }
    return sums;
}

double sample_discrete(const DiscreteZeroMeanDistribution& d,
                       const std::vector<double>& cum, double u) {
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const std::size_t idx =
        std::min(static_cast<std::size_t>(it - cum.begin()),
                 d.support.size() - 1);
    return d.support[idx];
}

std::vector<double> cumulative(const DiscreteZeroMeanDistribution& d) {
    std::vector<double> cum(d.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        acc += d.probs[i];
        cum[i] = acc;
    }
    return cum;
}

}  // namespace

WeightVector::WeightVector(std::vector<double> a) : a_(std::move(a)) {
    if (a_.empty()) throw std::invalid_argument("WeightVector: empty");
    double ss = 0.0;
    for (const double v : a_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("WeightVector: non-finite entry");
        }
        ss += v * v;
    }
    if (!(ss > 0.0)) throw std::invalid_argument("WeightVector: zero norm");
    const double inv = 1.0 / std::sqrt(ss);
    for (double& v : a_) v *= inv;
}

DiscreteZeroMeanDistribution DiscreteZeroMeanDistribution::make(
    std::vector<double> support, std::vector<double> probs) {
    if (support.empty() || support.size() != probs.size()) {
        throw std::invalid_argument("distribution: support/probs size mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (!std::isfinite(support[i]) || std::fabs(support[i]) > 1.0 + 1e-12) {
            throw std::invalid_argument(
                "distribution: support must lie in [-1, 1]");
        }
        if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) {
            throw std::invalid_argument("distribution: bad probability");
        }
        total += probs[i];
    }
    if (!(total > 0.0)) throw std::invalid_argument("distribution: zero mass");
    double mean = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        probs[i] /= total;
        support[i] = std::clamp(support[i], -1.0, 1.0);
        mean += support[i] * probs[i];
    }
    if (std::fabs(mean) > 1e-12) {
        throw std::invalid_argument("distribution: mean is not zero");
    }
    return DiscreteZeroMeanDistribution{std::move(support), std::move(probs)};
}

DiscreteZeroMeanDistribution DiscreteZeroMeanDistribution::rademacher() {
    return DiscreteZeroMeanDistribution{{1.0, -1.0}, {0.5, 0.5}};
}

DiscreteZeroMeanDistribution DiscreteZeroMeanDistribution::two_point(double u,
                                                                     double v) {
    if (!(u > 0.0 && u <= 1.0 && v > 0.0 && v <= 1.0)) {
        throw std::invalid_argument("two_point: u, v must lie in (0, 1]");
    }
    const double p = v / (u + v);
    return DiscreteZeroMeanDistribution{{u, -v}, {p, 1.0 - p}};
}

MartingaleSpec make_seeded_martingale(WeightVector a,
                                      std::uint64_t rule_seed) {
    auto rule = [rule_seed](std::size_t step, std::uint64_t history) {
        std::uint64_t s = rule_seed ^ (0xA24BAED4963EE407ULL * (step + 1));
        (void)splitmix64(s);
        s ^= history * 0x9FB21C651E98DF25ULL + 0x2545F4914F6CDD1DULL;
        const std::uint64_t h1 = splitmix64(s);
        const std::uint64_t h2 = splitmix64(s);
        // map into (0.05, 1] to keep conditional laws nondegenerate
        const double u = 0.05 + 0.95 * (static_cast<double>(h1 >> 11) * 0x1.0p-53);
        const double v = 0.05 + 0.95 * (static_cast<double>(h2 >> 11) * 0x1.0p-53);
        return std::make_pair(u, v);
    };
    return MartingaleSpec{std::move(a), rule};
}

HilbertInstance HilbertInstance::make(
    std::vector<std::vector<double>> vectors,
    std::vector<DiscreteZeroMeanDistribution> d) {
    if (vectors.empty() || vectors.size() != d.size()) {
        throw std::invalid_argument("hilbert: vectors/dists size mismatch");
    }
    const std::size_t dim = vectors.front().size();
    if (dim == 0) throw std::invalid_argument("hilbert: zero dimension");
    double ss = 0.0;
    for (const auto& v : vectors) {
        if (v.size() != dim) {
            throw std::invalid_argument("hilbert: inconsistent dimensions");
        }
        for (const double c : v) {
            if (!std::isfinite(c)) {
                throw std::invalid_argument("hilbert: non-finite coordinate");
            }
            ss += c * c;
        }
    }
    if (!(ss > 0.0)) throw std::invalid_argument("hilbert: zero norm");
    const double inv = 1.0 / std::sqrt(ss);
    for (auto& v : vectors) {
        for (double& c : v) c *= inv;
    }
    return HilbertInstance{std::move(vectors), std::move(d)};
}

double exact_rademacher_tail(const WeightVector& w, double x, bool two_sided) {
    const std::size_t n = w.size();
    if (n > 25) {
        throw CapacityError(
            "exact_rademacher_tail: n > 25; use exact_rademacher_tail_mitm");
    }
    const double t = x - kAtomTol;
    if (two_sided && t <= 0.0) return 1.0;
    const std::uint64_t count =
        count_signs_ge(w.weights(), 0, 0.0, t, two_sided);
    return static_cast<double>(count) /
           static_cast<double>(std::uint64_t{1} << n);
}

RademacherMitm::RademacherMitm(const WeightVector& w) : n_(w.size()) {
    if (n_ > 46) {
        throw CapacityError("exact_rademacher_tail_mitm: n > 46");
    }
    const std::size_t h = n_ / 2;
    lo_sums_ = half_sums(w.weights().data(), h);
    hi_sums_ = half_sums(w.weights().data() + h, n_ - h);
    std::sort(lo_sums_.begin(), lo_sums_.end());
    std::sort(hi_sums_.begin(), hi_sums_.end());
}

double RademacherMitm::tail(double x, bool two_sided) const {
    const double t = x - kAtomTol;
    if (two_sided && t <= 0.0) return 1.0;
    std::uint64_t count = 0;
    // u + hi[j] >= t: as u grows the qualifying suffix of hi only extends.
    std::size_t j = hi_sums_.size();
    for (const double u : lo_sums_) {
        while (j > 0 && u + hi_sums_[j - 1] >= t) --j;
        count += hi_sums_.size() - j;
    }
    if (two_sided) {
        // u + hi[k] <= -t: the qualifying prefix of hi only shrinks.
        std::size_t k = hi_sums_.size();
        for (const double u : lo_sums_) {
            while (k > 0 && u + hi_sums_[k - 1] > -t) --k;
            count += k;
        }
    }
    return static_cast<double>(count) /
           static_cast<double>(std::uint64_t{1} << n_);
}

double exact_rademacher_tail_mitm(const WeightVector& w, double x,
                                  bool two_sided) {
    return RademacherMitm(w).tail(x, two_sided);
}

std::vector<std::pair<double, double>> convolve_bounded_sum(
    const WeightVector& w,
    const std::vector<DiscreteZeroMeanDistribution>& dists) {
    if (dists.size() != w.size()) {
        throw std::invalid_argument("convolution: weights/dists size mismatch");
    }
    double state_count = 1.0;
    for (const auto& d : dists) {
        state_count *= static_cast<double>(d.support.size());
        if (state_count > 1e7) {
            throw CapacityError("convolution: product of support sizes > 1e7");
        }
    }
    std::vector<std::pair<double, double>> law{{0.0, 1.0}};
    std::vector<std::pair<double, double>> next;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        const double a = w.weights()[i];
        const auto& d = dists[i];
        next.clear();
        next.reserve(law.size() * d.support.size());
        for (const auto& [atom, p] : law) {
            for (std::size_t j = 0; j < d.support.size(); ++j) {
                next.emplace_back(atom + a * d.support[j], p * d.probs[j]);
            }
        }
        std::sort(next.begin(), next.end());
        law.clear();
        double mass = 0.0;
        for (const auto& [atom, p] : next) {
            if (!law.empty() && atom - law.back().first < 1e-12) {
                // merge: probability-weighted atom position
                auto& [la, lp] = law.back();
                la = (la * lp + atom * p) / (lp + p);
                lp += p;
            } else {
                law.emplace_back(atom, p);
            }
            mass += p;
        }
        for (auto& [atom, p] : law) p /= mass;
    }
    return law;
}

double tail_of_law(const std::vector<std::pair<double, double>>& law, double x,
                   bool two_sided) {
    const double t = x - kAtomTol;
    if (two_sided && t <= 0.0) return 1.0;
    double mass = 0.0;
    for (const auto& [atom, p] : law) {
        if (atom >= t || (two_sided && -atom >= t)) mass += p;
    }
    return std::min(mass, 1.0);
}

double exact_bounded_sum_tail(
    const WeightVector& w,
    const std::vector<DiscreteZeroMeanDistribution>& dists, double x,
    bool two_sided) {
    return tail_of_law(convolve_bounded_sum(w, dists), x, two_sided);
}

double mc_margin(std::size_t samples) {
    return std::sqrt(std::log(1.0 / kMcDelta) /
                     (2.0 * static_cast<double>(samples)));
}

std::vector<double> mc_martingale_samples(const MartingaleSpec& spec,
                                          std::size_t samples,
                                          std::uint64_t seed) {
    const std::size_t n = spec.a.size();
    if (n > 64) {
        throw std::invalid_argument("martingale: at most 64 steps supported");
    }
    if (!spec.rule) throw std::invalid_argument("martingale: missing rule");
    const std::vector<double>& a = spec.a.weights();
    std::vector<double> out(samples);
    for_each_chunk(samples, [&](std::size_t chunk, std::size_t first,
                                std::size_t count) {
        std::mt19937_64 eng(substream_seed(seed, chunk));
        for (std::size_t s = 0; s < count; ++s) {
            std::uint64_t history = 0;
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto [u, v] = spec.rule(i, history);
                if (!(u > 0.0 && u <= 1.0 && v > 0.0 && v <= 1.0)) {
                    throw std::invalid_argument(
                        "martingale: rule values must lie in (0, 1]");
                }
                const double p = v / (u + v);
                if (uniform01(eng) < p) {
                    sum += a[i] * u;
                    history |= std::uint64_t{1} << i;
                } else {
                    sum -= a[i] * v;
                }
            }
            out[first + s] = sum;
        }
    });
    return out;
}

std::pair<double, double> mc_martingale_tail(const MartingaleSpec& spec,
                                             double x, std::size_t samples,
                                             std::uint64_t seed) {
    if (samples < 10000) {
        throw std::invalid_argument("mc: samples must be >= 1e4");
    }
    const std::vector<double> sums = mc_martingale_samples(spec, samples, seed);
    std::size_t hits = 0;
    for (const double s : sums) {
        if (s >= x) ++hits;
    }
    return {static_cast<double>(hits) / static_cast<double>(samples),
            mc_margin(samples)};
}

std::vector<double> mc_hilbert_samples(const HilbertInstance& inst,
                                       std::size_t samples,
                                       std::uint64_t seed) {
    const std::size_t n = inst.vectors.size();
    const std::size_t dim = inst.vectors.front().size();
    std::vector<std::vector<double>> cums;
    cums.reserve(n);
    for (const auto& d : inst.dists) cums.push_back(cumulative(d));
    std::vector<double> out(samples);
    for_each_chunk(samples, [&](std::size_t chunk, std::size_t first,
                                std::size_t count) {
        std::mt19937_64 eng(substream_seed(seed, chunk));
        std::vector<double> acc(dim);
        for (std::size_t s = 0; s < count; ++s) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double eta =
                    sample_discrete(inst.dists[i], cums[i], uniform01(eng));
                for (std::size_t c = 0; c < dim; ++c) {
                    acc[c] += eta * inst.vectors[i][c];
                }
            }
            double ss = 0.0;
            for (const double c : acc) ss += c * c;
            out[first + s] = std::sqrt(ss);
        }
    });
    return out;
}

std::pair<double, double> mc_hilbert_tail(const HilbertInstance& inst,
                                          double x, std::size_t samples,
                                          std::uint64_t seed) {
    if (samples < 10000) {
        throw std::invalid_argument("mc: samples must be >= 1e4");
    }
    const std::vector<double> norms = mc_hilbert_samples(inst, samples, seed);
    std::size_t hits = 0;
    for (const double v : norms) {
        if (v >= x) ++hits;
    }
    return {static_cast<double>(hits) / static_cast<double>(samples),
            mc_margin(samples)};
}

VerificationReport verify_instance(
    const std::function<std::pair<double, double>(double)>& tail_source,
    bool two_sided, const std::vector<BoundKind>& kinds,
    const std::vector<double>& x_grid) {
    if (kinds.empty()) throw std::invalid_argument("verify: no bounds given");
    for (const BoundKind k : kinds) {
        if (is_two_sided(k) != two_sided) {
            throw std::invalid_argument(
                "verify: bound " + bound_name(k) + " does not pair with a " +
                (two_sided ? "two" : "one") + "-sided tail");
        }
    }
    VerificationReport rep;
    rep.kinds = kinds;
    rep.rows.reserve(x_grid.size());
    for (const double x : x_grid) {
        if (!(x > 0.0)) throw std::invalid_argument("verify: grid x must be > 0");
        VerificationRow row;
        row.x = x;
        const auto [tail, margin] = tail_source(x);
        row.tail = tail;
        row.margin = margin;
        row.bounds.reserve(kinds.size());
        for (const BoundKind k : kinds) {
            const double b = bound_value(k, x);
            row.bounds.push_back(b);
            if (tail - margin > b + kViolationSlack) row.violation = true;
        }
        rep.any_violation = rep.any_violation || row.violation;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace tailbound
