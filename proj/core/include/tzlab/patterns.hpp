#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tzlab {

inline constexpr std::size_t kWordBits = 64;

inline constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

/// Mask of the valid bits in the last word of a `bits`-long lane.
inline constexpr std::uint64_t tail_mask(std::size_t bits) {
  const auto rem = bits % kWordBits;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

/// `count` patterns over `width` pins, stored pin-major: pin p owns a lane of
/// words() words, bit t of the lane is the pin's value in pattern t. Unused
/// tail bits are always zero.
class PatternBlock {
 public:
  PatternBlock() = default;
  PatternBlock(std::size_t width, std::size_t count);

  std::size_t width() const { return width_; }
  std::size_t count() const { return count_; }
  std::size_t words() const { return words_; }
  bool empty() const { return count_ == 0; }

  bool get(std::size_t pattern, std::size_t pin) const {
    return (data_[pin * words_ + pattern / kWordBits] >> (pattern % kWordBits)) & 1U;
  }
  void set(std::size_t pattern, std::size_t pin, bool value);

  std::span<const std::uint64_t> lane(std::size_t pin) const {
    return {data_.data() + pin * words_, words_};
  }
  std::span<std::uint64_t> lane(std::size_t pin) { return {data_.data() + pin * words_, words_}; }

  /// "0110..." in pin order.
  std::string row(std::size_t pattern) const;

  /// Patterns [begin, begin + n).
  PatternBlock slice(std::size_t begin, std::size_t n) const;
  /// Concatenation; widths must agree.
  void append(const PatternBlock& other);
  void push_back(const std::vector<bool>& pattern);

  /// Uniform random patterns from a seeded mt19937_64 stream.
  static PatternBlock random(std::size_t width, std::size_t count, std::uint64_t seed);
  /// All 2^width patterns; pattern i assigns bit j of i to pin j.
  static PatternBlock exhaustive(std::size_t width);
  /// Patterns [first, first + n) of the exhaustive enumeration.
  static PatternBlock exhaustive_range(std::size_t width, std::uint64_t first, std::size_t n);
  static PatternBlock from_rows(std::size_t width, const std::vector<std::string>& rows);

  friend bool operator==(const PatternBlock& a, const PatternBlock& b) {
    return a.width_ == b.width_ && a.count_ == b.count_ && a.data_ == b.data_;
  }

 private:
  std::size_t width_ = 0;
  std::size_t count_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

/// Pattern file: one `01` string per line in PI order, `#` comments.
PatternBlock parse_patterns(std::string_view text, std::size_t width);
std::string write_patterns(const PatternBlock& block);
PatternBlock read_pattern_file(const std::string& path, std::size_t width);
void write_pattern_file(const PatternBlock& block, const std::string& path);

}  // namespace tzlab
