#include "tzlab/patterns.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "tzlab/error.hpp"

namespace tzlab {

PatternBlock::PatternBlock(std::size_t width, std::size_t count)
    : width_(width), count_(count), words_(words_for(count)), data_(width * words_, 0) {}

void PatternBlock::set(std::size_t pattern, std::size_t pin, bool value) {
  auto& word = data_[pin * words_ + pattern / kWordBits];
  const auto bit = std::uint64_t{1} << (pattern % kWordBits);
  word = value ? (word | bit) : (word & ~bit);
}

std::string PatternBlock::row(std::size_t pattern) const {
  std::string out(width_, '0');
  for (std::size_t pin = 0; pin < width_; ++pin) {
    if (get(pattern, pin)) out[pin] = '1';
  }
  return out;
}

PatternBlock PatternBlock::slice(std::size_t begin, std::size_t n) const {
  if (begin + n > count_) throw Error("pattern slice out of range");
  PatternBlock out(width_, n);
  if (begin % kWordBits == 0) {
    for (std::size_t pin = 0; pin < width_; ++pin) {
      auto src = lane(pin);
      auto dst = out.lane(pin);
      for (std::size_t w = 0; w < out.words_; ++w) dst[w] = src[begin / kWordBits + w];
      if (out.words_ > 0) dst[out.words_ - 1] &= tail_mask(n);
    }
    return out;
  }
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t pin = 0; pin < width_; ++pin) out.set(t, pin, get(begin + t, pin));
  }
  return out;
}

void PatternBlock::append(const PatternBlock& other) {
  if (other.width_ != width_) throw InterfaceError("cannot append patterns of different width");
  PatternBlock merged(width_, count_ + other.count_);
  for (std::size_t pin = 0; pin < width_; ++pin) {
    auto dst = merged.lane(pin);
    auto a = lane(pin);
    for (std::size_t w = 0; w < words_; ++w) dst[w] = a[w];
  }
  for (std::size_t t = 0; t < other.count_; ++t) {
    for (std::size_t pin = 0; pin < width_; ++pin) merged.set(count_ + t, pin, other.get(t, pin));
  }
  *this = std::move(merged);
}

void PatternBlock::push_back(const std::vector<bool>& pattern) {
  if (pattern.size() != width_) throw InterfaceError("pattern width mismatch");
  const auto t = count_;
  if (words_for(count_ + 1) != words_) {
    PatternBlock grown(width_, count_ + 1);
    for (std::size_t pin = 0; pin < width_; ++pin) {
      auto src = lane(pin);
      auto dst = grown.lane(pin);
      for (std::size_t w = 0; w < words_; ++w) dst[w] = src[w];
    }
    *this = std::move(grown);
  } else {
    ++count_;
  }
  for (std::size_t pin = 0; pin < width_; ++pin) set(t, pin, pattern[pin]);
}

PatternBlock PatternBlock::random(std::size_t width, std::size_t count, std::uint64_t seed) {
  PatternBlock out(width, count);
  std::mt19937_64 rng(seed);
  for (std::size_t w = 0; w < out.words_; ++w) {
    for (std::size_t pin = 0; pin < width; ++pin) out.data_[pin * out.words_ + w] = rng();
  }
  if (out.words_ > 0) {
    for (std::size_t pin = 0; pin < width; ++pin) {
      out.data_[pin * out.words_ + out.words_ - 1] &= tail_mask(count);
    }
  }
  return out;
}

PatternBlock PatternBlock::exhaustive(std::size_t width) {
  if (width > 30) throw BoundError("exhaustive enumeration over more than 30 inputs");
  return exhaustive_range(width, 0, std::size_t{1} << width);
}

PatternBlock PatternBlock::exhaustive_range(std::size_t width, std::uint64_t first, std::size_t n) {
  PatternBlock out(width, n);
  // Low pins follow a fixed 64-periodic pattern when `first` is word aligned.
  static constexpr std::uint64_t kLow[6] = {
      0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
      0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
  };
  if (first % kWordBits == 0) {
    for (std::size_t w = 0; w < out.words_; ++w) {
      const std::uint64_t base = first + w * kWordBits;
      for (std::size_t pin = 0; pin < width; ++pin) {
        std::uint64_t word = pin < 6 ? kLow[pin] : (((base >> pin) & 1U) ? ~std::uint64_t{0} : 0);
        out.data_[pin * out.words_ + w] = word;
      }
    }
    if (out.words_ > 0) {
      for (std::size_t pin = 0; pin < width; ++pin) {
        out.data_[pin * out.words_ + out.words_ - 1] &= tail_mask(n);
      }
    }
    return out;
  }
  for (std::size_t t = 0; t < n; ++t) {
    const auto value = first + t;
    for (std::size_t pin = 0; pin < width; ++pin) out.set(t, pin, (value >> pin) & 1U);
  }
  return out;
}

PatternBlock PatternBlock::from_rows(std::size_t width, const std::vector<std::string>& rows) {
  PatternBlock out(width, rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t].size() != width) {
      throw InterfaceError("pattern '" + rows[t] + "' has " + std::to_string(rows[t].size()) +
                           " bits, expected " + std::to_string(width));
    }
    for (std::size_t pin = 0; pin < width; ++pin) {
      const char c = rows[t][pin];
      if (c != '0' && c != '1') throw Error("pattern '" + rows[t] + "' contains '" + c + "'");
      out.set(t, pin, c == '1');
    }
  }
  return out;
}

PatternBlock parse_patterns(std::string_view text, std::size_t width) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string compact;
    for (char c : line) {
      if (c != ' ' && c != '\t' && c != '\r') compact += c;
    }
    if (!compact.empty()) rows.push_back(std::move(compact));
  }
  return PatternBlock::from_rows(width, rows);
}

std::string write_patterns(const PatternBlock& block) {
  std::string out;
  out.reserve(block.count() * (block.width() + 1));
  for (std::size_t t = 0; t < block.count(); ++t) {
    out += block.row(t);
    out += '\n';
  }
  return out;
}

PatternBlock read_pattern_file(const std::string& path, std::size_t width) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open pattern file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_patterns(buffer.str(), width);
}

void write_pattern_file(const PatternBlock& block, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write pattern file '" + path + "'");
  out << write_patterns(block);
}

}  // namespace tzlab
