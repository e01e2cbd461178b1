#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace tzone::rng {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// A pure function of (counter, key): no state, no ordering constraints.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static Counter single_round(const Counter& c, const Key& k) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Uniform in (0, 1) from 64 random bits; never returns 0 or 1.
inline double to_open_unit(std::uint64_t bits) {
    // 52 bits so that the largest value, 1 - 2^-53, is representable
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

inline std::uint64_t join(std::uint32_t hi, std::uint32_t lo) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

/// Standard normal draws addressed by (seed, stream, index).
///
/// Ziggurat (128 layers, Marsaglia-Tsang with Doornik's tail). Normal i
/// takes its first attempt from half of Philox block i/2; the rare
/// rejections draw from a separate counter range tagged with i and the
/// attempt number. Every draw is therefore a pure function of
/// (seed, stream, index), and results do not depend on evaluation order.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32) & 0x7FFFFFFFu) {}

    double operator()(std::uint64_t index) {
        const std::uint64_t block = index >> 1;
        if (block != cached_block_) {
            cached_ = Philox4x32::generate({static_cast<std::uint32_t>(block),
                                            static_cast<std::uint32_t>(block >> 32), stream_lo_,
                                            stream_hi_},
                                           key_);
            cached_block_ = block;
        }
        const std::uint64_t bits =
            (index & 1u) ? join(cached_[3], cached_[2]) : join(cached_[1], cached_[0]);
        return draw(bits, index);
    }

private:
    static constexpr int kLayers = 128;
    static constexpr double kR = 3.442619855899;
    static constexpr double kV = 9.91256303526217e-3;

    struct Tables {
        std::array<double, kLayers + 1> x{};
        std::array<double, kLayers> ratio{};
        Tables() {
            double f = std::exp(-0.5 * kR * kR);
            x[0] = kV / f;
            x[1] = kR;
            x[kLayers] = 0.0;
            for (int i = 2; i < kLayers; ++i) {
                x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + f));
                f = std::exp(-0.5 * x[i] * x[i]);
            }
            for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
        }
    };

    static const Tables& tables() {
        static const Tables t;
        return t;
    }

    // Layer from the low 7 bits, signed uniform from the high 53.
    static double signed_unit(std::uint64_t bits) {
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-52 - 1.0;
    }

    double draw(std::uint64_t bits, std::uint64_t index) const {
        const Tables& t = tables();
        std::uint32_t attempt = 0;
        std::array<std::uint32_t, 4> extra{};
        while (true) {
            const int layer = static_cast<int>(bits & 0x7Fu);
            const double u = signed_unit(bits);
            if (std::abs(u) < t.ratio[layer]) return u * t.x[layer];

            extra = fallback(index, attempt++);
            if (layer == 0) return tail(u < 0.0, index, attempt);
            const double xs = u * t.x[layer];
            const double f0 = std::exp(-0.5 * (t.x[layer] * t.x[layer] - xs * xs));
            const double f1 = std::exp(-0.5 * (t.x[layer + 1] * t.x[layer + 1] - xs * xs));
            if (f1 + to_open_unit(join(extra[1], extra[0])) * (f0 - f1) < 1.0) return xs;
            bits = join(extra[3], extra[2]);
        }
    }

    double tail(bool negative, std::uint64_t index, std::uint32_t attempt) const {
        double x = 0.0;
        double y = 0.0;
        do {
            const auto r = fallback(index, attempt++);
            x = std::log(to_open_unit(join(r[1], r[0]))) / kR;
            y = std::log(to_open_unit(join(r[3], r[2])));
        } while (-2.0 * y < x * x);
        return negative ? x - kR : kR - x;
    }

    // Counter range with the top stream bit set, disjoint from the main draws.
    std::array<std::uint32_t, 4> fallback(std::uint64_t index, std::uint32_t attempt) const {
        return Philox4x32::generate(
            {static_cast<std::uint32_t>(index),
             (static_cast<std::uint32_t>(index >> 32) & 0xFFFFu) | (attempt << 16), stream_lo_,
             stream_hi_ | 0x80000000u},
            key_);
    }

    Philox4x32::Key key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t cached_block_ = ~std::uint64_t{0};
    Philox4x32::Counter cached_{};
};

}  // namespace tzone::rng
