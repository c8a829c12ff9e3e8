#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace dccs {

using VertexId = std::uint32_t;

// Sorted ascending, no duplicates.
using VertexSet = std::vector<VertexId>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Set of 0-based layer indices stored as a 64-bit mask.
class LayerSet {
 public:
  static constexpr int kMaxLayers = 64;

  constexpr LayerSet() = default;
  constexpr explicit LayerSet(std::uint64_t bits) : bits_(bits) {}
  LayerSet(std::initializer_list<int> layers) {
    for (int i : layers) bits_ |= bit(i);
  }

  static constexpr LayerSet all(int l) {
    return LayerSet(l >= kMaxLayers ? ~std::uint64_t{0} : (std::uint64_t{1} << l) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1U; }
  constexpr LayerSet with(int i) const { return LayerSet(bits_ | bit(i)); }
  constexpr LayerSet without(int i) const { return LayerSet(bits_ & ~bit(i)); }
  constexpr bool subset_of(LayerSet o) const { return (bits_ & ~o.bits_) == 0; }

  // Largest member, or -1 for the empty set.
  constexpr int max() const { return bits_ == 0 ? -1 : 63 - std::countl_zero(bits_); }
  constexpr int min() const { return bits_ == 0 ? -1 : std::countr_zero(bits_); }

  std::vector<int> ids() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  // Lexicographic order on the ascending id sequences.
  friend bool lex_less(LayerSet a, LayerSet b) {
    if (a == b) return false;
    std::uint64_t diff = a.bits_ ^ b.bits_;
    int first = std::countr_zero(diff);
    std::uint64_t from_first = ~((std::uint64_t{1} << first) - 1);
    // The sets agree below `first`. The one holding `first` is smaller unless the other one
    // has no further elements, in which case the other is a proper prefix.
    bool a_has = a.contains(first);
    bool other_ended = ((a_has ? b.bits_ : a.bits_) & from_first) == 0;
    return a_has ? !other_ended : other_ended;
  }

  friend constexpr LayerSet operator|(LayerSet a, LayerSet b) { return LayerSet(a.bits_ | b.bits_); }
  friend constexpr LayerSet operator&(LayerSet a, LayerSet b) { return LayerSet(a.bits_ & b.bits_); }
  friend constexpr LayerSet operator-(LayerSet a, LayerSet b) { return LayerSet(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(LayerSet a, LayerSet b) = default;

  // 1-based rendering such as "{1,3}".
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i : ids()) {
      if (!first) s += ',';
      s += std::to_string(i + 1);
      first = false;
    }
    return s + "}";
  }

 private:
  static constexpr std::uint64_t bit(int i) { return std::uint64_t{1} << i; }
  std::uint64_t bits_ = 0;
};

struct SearchParams {
  int d = 4;
  int s = 3;
  int k = 10;
  std::uint64_t seed = 0;

  void validate(int num_layers) const {
    if (d < 0) throw Error("d must be non-negative");
    if (s < 1) throw Error("s must be at least 1");
    if (s > num_layers) {
      throw Error("s=" + std::to_string(s) + " exceeds the layer count " + std::to_string(num_layers));
    }
    if (k < 1) throw Error("k must be at least 1");
  }
};

}  // namespace dccs
