#ifndef TOPOCUBE_BITS_HPP
#define TOPOCUBE_BITS_HPP

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

namespace topocube {

inline int popcount64(std::uint64_t w) { return std::popcount(w); }

inline std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

// Dynamic bit vector used for assignments over arbitrarily many variables.
// Coordinate i is 0-based internally; variable v (1-based) lives at i = v-1.
class BitVec {
  public:
    BitVec() : n_(0) {}
    explicit BitVec(int n) : n_(n), words_((n + 63) / 64, 0) {}
    BitVec(int n, std::uint64_t packed) : BitVec(n) {
        if (!words_.empty()) words_[0] = packed & low_mask(n);
    }

    int size() const { return n_; }
    bool get(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(int i, bool v) {
        std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }
    void flip(int i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::uint64_t word0() const { return words_.empty() ? 0 : words_[0]; }

    int hamming(const BitVec& o) const {
        int d = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) d += popcount64(words_[w] ^ o.words_[w]);
        return d;
    }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && words_ == o.words_; }

    static std::uint64_t low_mask(int n) {
        return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    }

  private:
    int n_;
    std::vector<std::uint64_t> words_;
};

inline int hamming64(std::uint64_t a, std::uint64_t b) { return popcount64(a ^ b); }

// Deterministic RNG wrapper. std::uniform_int_distribution is not pinned by the
// standard, so bounded draws go through an explicit rejection loop to keep
// seeded runs byte-identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        std::uint64_t x = eng_();
        while (x > limit) x = eng_();
        return x % bound;
    }

    bool coin() { return eng_() & 1; }

    // Uniform double in [0,1) with 53 random bits.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 eng_;
};

// Stable per-trial seed derivation (splitmix64 over the pair).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace topocube

#endif
