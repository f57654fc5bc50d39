#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace strategem {

// Fixed-width bitset over the member indices of a hypothesis class. Used as the
// canonical key of a version space.
class MemberSet {
 public:
  MemberSet() = default;
  explicit MemberSet(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}

  static MemberSet full(std::size_t width) {
    MemberSet s(width);
    for (std::size_t i = 0; i < width; ++i) s.insert(i);
    return s;
  }

  std::size_t width() const { return width_; }

  bool contains(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void insert(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void erase(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const {
    for (auto w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  // Smallest member index, or width() when empty.
  std::size_t first() const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] != 0) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    }
    return width_;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      auto w = words_[k];
      while (w != 0) {
        f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  MemberSet operator&(const MemberSet& o) const {
    MemberSet r = *this;
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= o.words_[k];
    return r;
  }
  MemberSet operator|(const MemberSet& o) const {
    MemberSet r = *this;
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] |= o.words_[k];
    return r;
  }
  // this \ o
  MemberSet minus(const MemberSet& o) const {
    MemberSet r = *this;
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= ~o.words_[k];
    return r;
  }

  friend bool operator==(const MemberSet&, const MemberSet&) = default;
  friend bool operator<(const MemberSet& a, const MemberSet& b) { return a.words_ < b.words_; }

  std::size_t hash() const {
    std::size_t h = width_;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

struct MemberSetHash {
  std::size_t operator()(const MemberSet& s) const { return s.hash(); }
};

}  // namespace strategem
