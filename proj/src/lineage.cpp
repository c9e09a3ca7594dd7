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

#include "pksim/lineage.hpp"

#include "pksim/errors.hpp"

namespace pksim {

LineageIndex::LineageIndex(std::uint32_t line, std::uint64_t bits, int length)
    : line_(line), length_(static_cast<std::uint8_t>(length)), bits_(bits) {
    if (line == 0) throw InvalidArgument("line numbers start at 1");
    if (length < 0 || length > kMaxDepth)
        throw DepthExceeded("word length " + std::to_string(length) + " outside [0, 64]");
    if (length < 64 && (bits >> length) != 0)
        throw InvalidArgument("word bits exceed word length");
}

LineageIndex LineageIndex::from_word(std::uint32_t line, const std::string& word) {
    std::uint64_t bits = 0;
    int len = 0;
    for (char c : word) {
        if (c != '0' && c != '1') throw InvalidArgument("word symbols must be 0 or 1");
        if (len == kMaxDepth) throw DepthExceeded("word longer than 64 symbols");
        bits = (bits << 1) | std::uint64_t(c - '0');
        ++len;
    }
    return LineageIndex(line, bits, len);
}

int LineageIndex::symbol(int pos) const {
    return int((bits_ >> (length_ - 1 - pos)) & 1u);
}

std::string LineageIndex::word() const {
    std::string w;
    w.reserve(length_);
    for (int p = 0; p < length_; ++p) w.push_back(char('0' + symbol(p)));
    return w;
}

LineageIndex LineageIndex::parent() const {
    if (length_ == 0) throw RootHasNoParent("line " + std::to_string(line_));
    return LineageIndex(line_, bits_ >> 1, length_ - 1);
}

std::pair<LineageIndex, LineageIndex> LineageIndex::children() const {
    if (length_ == kMaxDepth)
        throw DepthExceeded("cell " + to_string(*this) + " is at the maximum depth");
    return {LineageIndex(line_, bits_ << 1, length_ + 1),
            LineageIndex(line_, (bits_ << 1) | 1u, length_ + 1)};
}

std::string to_string(const LineageIndex& idx) {
    return "(" + std::to_string(idx.line()) + ", ∅" + idx.word() + ")";
}

std::size_t LineageHash::operator()(const LineageIndex& idx) const noexcept {
    std::uint64_t h = idx.bits() * 0x9E3779B97F4A7C15ull;
    h ^= (std::uint64_t(idx.line()) << 8 | std::uint64_t(idx.length())) + 0x632BE59BD9B4E019ull +
         (h << 6) + (h >> 2);
    return std::size_t(h);
}

} // namespace pksim
