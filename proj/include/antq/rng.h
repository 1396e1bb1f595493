// Copyright 2026 The antq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANTQ_RNG_H
#define ANTQ_RNG_H

#include <array>
#include <cstdint>

namespace antq {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11, "Random123").
/// Maps a 128-bit counter and 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

/// Reproducible stream built on Philox4x32-10.
///
/// A stream is identified by (seed, stream id). Block b of the stream is
/// philox4x32_10({lo(b), hi(b), lo(id), hi(id)}, {lo(seed), hi(seed)}), read as two
/// little-endian 64-bit words (word0 | word1 << 32, word2 | word3 << 32).
/// Child streams keep the seed; their id is the first 64-bit word of
/// philox4x32_10({lo(i), hi(i), lo(id), hi(id)}, {lo(seed) ^ 0x9E3779B9, hi(seed) ^ 0xBB67AE85}).
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Independent child stream number `index`.
    Rng substream(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

}  // namespace antq

#endif
