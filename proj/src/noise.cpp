/*
   Copyright 2026 The pksim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "pksim/noise.hpp"

#include <cmath>
#include <numbers>

#include "pksim/errors.hpp"

namespace pksim {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr std::uint64_t kKeySalt = 0x243F6A8885A308D3ull;
constexpr std::uint64_t kCounterSalt = 0x13198A2E03707344ull;
constexpr std::uint64_t kReplicaSalt = 0xA4093822299F31D0ull;

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ (mix64(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)));
}

std::uint64_t stream_hash(std::uint64_t salt, std::uint64_t seed, const LineageIndex& idx,
                          Purpose purpose) {
    std::uint64_t h = mix64(seed ^ salt);
    h = combine(h, idx.line());
    h = combine(h, idx.bits());
    h = combine(h, std::uint64_t(idx.length()));
    h = combine(h, std::uint64_t(purpose));
    return h;
}

} // namespace

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

PhiloxCounter philox4x32(PhiloxCounter c, PhiloxKey k) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * c[0];
        const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * c[2];
        const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kPhiloxW0;
        k[1] += kPhiloxW1;
    }
    return c;
}

Stream::Stream(std::uint64_t seed, const LineageIndex& idx, Purpose purpose) {
    const std::uint64_t hk = stream_hash(kKeySalt, seed, idx, purpose);
    const std::uint64_t hc = stream_hash(kCounterSalt, seed, idx, purpose);
    key_ = {std::uint32_t(hk), std::uint32_t(hk >> 32)};
    hi0_ = std::uint32_t(hc);
    hi1_ = std::uint32_t(hc >> 32);
}

std::array<std::uint64_t, 2> Stream::block(std::uint64_t counter) const {
    const auto out = philox4x32({std::uint32_t(counter), std::uint32_t(counter >> 32), hi0_, hi1_},
                                key_);
    return {std::uint64_t(out[0]) | (std::uint64_t(out[1]) << 32),
            std::uint64_t(out[2]) | (std::uint64_t(out[3]) << 32)};
}

double Stream::uniform(std::uint64_t counter) const {
    return double(block(counter)[0] >> 11) * kTwoPow53Inv;
}

double Stream::uniform_open0(std::uint64_t counter) const {
    return double((block(counter)[0] >> 11) + 1) * kTwoPow53Inv;
}

std::array<double, 2> Stream::normal_pair(std::uint64_t counter) const {
    const auto b = block(counter);
    const double u1 = double((b[0] >> 11) + 1) * kTwoPow53Inv;
    const double u2 = double(b[1] >> 11) * kTwoPow53Inv;
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
}

ClockCursor::ClockCursor(std::uint64_t seed, const LineageIndex& idx, double lambda_bar)
    : gaps_(seed, idx, Purpose::ClockTime),
      marks_(seed, idx, Purpose::ClockMark),
      lambda_bar_(lambda_bar) {
    if (!(lambda_bar > 0.0)) throw InvalidArgument("lambda_bar must be positive");
    time_ = -std::log(gaps_.uniform_open0(0)) / lambda_bar_;
}

double ClockCursor::mark() const { return lambda_bar_ * marks_.uniform(index_); }

void ClockCursor::advance() {
    ++index_;
    time_ += -std::log(gaps_.uniform_open0(index_)) / lambda_bar_;
}

void ClockCursor::skip_to(double t) {
    while (time_ < t) advance();
}

NoiseUniverse NoiseUniverse::replica(std::uint64_t r) const {
    return NoiseUniverse(mix64(seed_ ^ mix64(r + kReplicaSalt)), dim_);
}

Point NoiseUniverse::wiener_increment(const LineageIndex& idx, std::uint64_t step, double dt,
                                      Purpose purpose) const {
    const auto z = Stream(seed_, idx, purpose).normal_pair(step);
    const double s = std::sqrt(dt);
    Point p{};
    p[0] = s * z[0];
    if (dim_ > 1) p[1] = s * z[1];
    return p;
}

std::vector<Point> NoiseUniverse::wiener_increments(const LineageIndex& idx, std::uint64_t k0,
                                                    std::uint64_t k1, double dt) const {
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    const Stream s(seed_, idx, Purpose::Wiener);
    const double sq = std::sqrt(dt);
    std::vector<Point> out;
    out.reserve(k1 > k0 ? k1 - k0 : 0);
    for (std::uint64_t k = k0; k < k1; ++k) {
        const auto z = s.normal_pair(k);
        Point p{};
        p[0] = sq * z[0];
        if (dim_ > 1) p[1] = sq * z[1];
        out.push_back(p);
    }
    return out;
}

std::vector<ClockEvent> NoiseUniverse::clock_events(const LineageIndex& idx, double t0, double t1,
                                                    double lambda_bar) const {
    std::vector<ClockEvent> out;
    ClockCursor c(seed_, idx, lambda_bar);
    c.skip_to(t0);
    while (c.time() < t1) {
        out.push_back({c.time(), c.mark()});
        c.advance();
    }
    return out;
}

} // namespace pksim
