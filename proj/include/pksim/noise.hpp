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

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pksim/lineage.hpp"
#include "pksim/population.hpp"

namespace pksim {

// Philox4x32-10 block function (Salmon et al., SC'11). Pure: the output is a
// function of (counter, key) only.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

enum class Purpose : std::uint32_t {
    Wiener = 1,
    ClockTime = 2,
    ClockMark = 3,
    Init = 4,
    MassWiener = 5,
    MassInit = 6,
};

// Address of one infinite stream. The 64-bit key and the upper counter words
// are derived from independent hashes of (seed, line, word, purpose); the
// lower two counter words carry the position within the stream.
class Stream {
public:
    Stream(std::uint64_t seed, const LineageIndex& idx, Purpose purpose);

    // Two 64-bit words for position `counter`.
    std::array<std::uint64_t, 2> block(std::uint64_t counter) const;
    // Uniform on [0, 1).
    double uniform(std::uint64_t counter) const;
    // Uniform on (0, 1].
    double uniform_open0(std::uint64_t counter) const;
    // Two independent standard normals via Box-Muller on one block.
    std::array<double, 2> normal_pair(std::uint64_t counter) const;

private:
    PhiloxKey key_{};
    std::uint32_t hi0_ = 0;
    std::uint32_t hi1_ = 0;
};

struct ClockEvent {
    double time = 0.0;
    double mark = 0.0;
};

// Incremental reader of one Poisson clock. Event n sits at the cumulative sum
// of exponential gaps 0..n, always anchored at t = 0, so any window of the
// clock is a deterministic restriction of the same infinite sequence.
class ClockCursor {
public:
    ClockCursor(std::uint64_t seed, const LineageIndex& idx, double lambda_bar);

    double time() const { return time_; }
    std::uint64_t index() const { return index_; }
    double mark() const;
    void advance();
    // Advances until time() >= t.
    void skip_to(double t);

private:
    Stream gaps_;
    Stream marks_;
    double lambda_bar_;
    std::uint64_t index_ = 0;
    double time_ = 0.0;
};

// The shared family of noise sources indexed by (line, word). Every value is
// a pure function of the master seed and its address, so all models and all
// population sizes see the same realisation.
//
// Changing lambda_bar changes every clock: event times are gaps divided by
// the dominating rate.
class NoiseUniverse {
public:
    NoiseUniverse(std::uint64_t master_seed, int dim) : seed_(master_seed), dim_(dim) {}

    std::uint64_t master_seed() const { return seed_; }
    int dim() const { return dim_; }

    // Universe for an independent replica of an experiment.
    NoiseUniverse replica(std::uint64_t r) const;

    // Increment of W_{idx} over step k, i.e. W((k+1)dt) - W(k dt).
    Point wiener_increment(const LineageIndex& idx, std::uint64_t step, double dt,
                           Purpose purpose = Purpose::Wiener) const;
    std::vector<Point> wiener_increments(const LineageIndex& idx, std::uint64_t k0,
                                         std::uint64_t k1, double dt) const;

    std::vector<ClockEvent> clock_events(const LineageIndex& idx, double t0, double t1,
                                         double lambda_bar) const;
    ClockCursor clock(const LineageIndex& idx, double lambda_bar) const {
        return ClockCursor(seed_, idx, lambda_bar);
    }

    Stream stream(const LineageIndex& idx, Purpose purpose) const {
        return Stream(seed_, idx, purpose);
    }

private:
    std::uint64_t seed_;
    int dim_;
};

std::uint64_t mix64(std::uint64_t x);

} // namespace pksim
