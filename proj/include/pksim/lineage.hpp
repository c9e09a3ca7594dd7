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

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

namespace pksim {

// Identity of a cell: founder line i >= 1 plus its Ulam-Harris word. The word
// is packed into `bits`, first symbol in the most significant used position,
// so numeric order of `bits` equals lexicographic order at equal length.
class LineageIndex {
public:
    static constexpr int kMaxDepth = 64;

    LineageIndex() = default;
    explicit LineageIndex(std::uint32_t line, std::uint64_t bits = 0, int length = 0);

    static LineageIndex root(std::uint32_t line) { return LineageIndex(line); }

    // Parses "∅101" style words as plain "101"; empty string is the root.
    static LineageIndex from_word(std::uint32_t line, const std::string& word);

    std::uint32_t line() const { return line_; }
    std::uint64_t bits() const { return bits_; }
    int length() const { return length_; }
    bool is_root() const { return length_ == 0; }

    // Symbol at position `pos` (0 = first generation).
    int symbol(int pos) const;
    std::string word() const;

    // Throws RootHasNoParent for the founder.
    LineageIndex parent() const;
    // Throws DepthExceeded past kMaxDepth generations.
    std::pair<LineageIndex, LineageIndex> children() const;

    // Line, then word length, then lexicographic word.
    friend auto operator<=>(const LineageIndex& a, const LineageIndex& b) {
        if (auto c = a.line_ <=> b.line_; c != 0) return c;
        if (auto c = a.length_ <=> b.length_; c != 0) return c;
        return a.bits_ <=> b.bits_;
    }
    friend bool operator==(const LineageIndex&, const LineageIndex&) = default;

private:
    std::uint32_t line_ = 1;
    std::uint8_t length_ = 0;
    std::uint64_t bits_ = 0;
};

std::string to_string(const LineageIndex& idx);

struct LineageHash {
    std::size_t operator()(const LineageIndex& idx) const noexcept;
};

} // namespace pksim
