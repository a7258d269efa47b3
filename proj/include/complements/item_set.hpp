// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace complements {

// A subset of at most 64 items (or bundle indices), stored as a bitmask.
// Item ids are 0-based.
class ItemSet {
 public:
  static constexpr int kMaxItems = 64;

  constexpr ItemSet() = default;
  constexpr explicit ItemSet(std::uint64_t bits) : bits_(bits) {}

  static ItemSet full(int m) {
    if (m < 0 || m > kMaxItems) {
      throw std::out_of_range("ItemSet::full: item count " + std::to_string(m) + " outside [0, 64]");
    }
    return ItemSet(m == kMaxItems ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
  }

  static ItemSet of(std::initializer_list<int> items) {
    ItemSet s;
    for (int i : items) s = s.with(i);
    return s;
  }

  static ItemSet of(const std::vector<int>& items) {
    ItemSet s;
    for (int i : items) s = s.with(i);
    return s;
  }

  static ItemSet singleton(int i) { return ItemSet().with(i); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }

  constexpr bool contains(int i) const { return ((bits_ >> i) & 1U) != 0; }
  constexpr bool subset_of(ItemSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(ItemSet other) const { return (bits_ & other.bits_) != 0; }

  ItemSet with(int i) const {
    check(i);
    return ItemSet(bits_ | (std::uint64_t{1} << i));
  }
  ItemSet without(int i) const {
    check(i);
    return ItemSet(bits_ & ~(std::uint64_t{1} << i));
  }
  ItemSet flipped(int i) const {
    check(i);
    return ItemSet(bits_ ^ (std::uint64_t{1} << i));
  }

  // Largest item id plus one; 0 for the empty set.
  constexpr int extent() const { return bits_ == 0 ? 0 : 64 - std::countl_zero(bits_); }

  std::vector<int> items() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  friend constexpr ItemSet operator|(ItemSet a, ItemSet b) { return ItemSet(a.bits_ | b.bits_); }
  friend constexpr ItemSet operator&(ItemSet a, ItemSet b) { return ItemSet(a.bits_ & b.bits_); }
  // Set difference a \ b.
  friend constexpr ItemSet operator-(ItemSet a, ItemSet b) { return ItemSet(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(ItemSet a, ItemSet b) = default;

 private:
  static void check(int i) {
    if (i < 0 || i >= kMaxItems) {
      throw std::out_of_range("item id " + std::to_string(i) + " outside [0, 64)");
    }
  }

  std::uint64_t bits_ = 0;
};

// Lexicographic order on the ascending item sequences, so {0} < {0,1} < {0,2} < {1}.
constexpr bool lex_less(ItemSet a, ItemSet b) {
  const std::uint64_t diff = a.bits() ^ b.bits();
  if (diff == 0) return false;
  const int x = std::countr_zero(diff);
  const auto above = [x](ItemSet s) { return x < 63 && (s.bits() >> (x + 1)) != 0; };
  if (a.contains(x)) {
    // b agrees with a below x and lacks x: b is either a prefix of a or continues above x.
    return above(b);
  }
  return !above(a);
}

// 1-based, comma separated: "{1,3}".
inline std::string to_string(ItemSet s) {
  std::string out = "{";
  bool first = true;
  for (int i : s.items()) {
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

}  // namespace complements
