#ifndef EIFEVAL_RANDOM_HPP
#define EIFEVAL_RANDOM_HPP

#include <cstdint>
#include <random>

namespace eifeval {

// Counter-based stream key. Children are derived by hashing, so a child
// stream depends only on its path from the root seed and never on the
// order in which siblings were consumed.
class Stream {
 public:
  constexpr explicit Stream(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  constexpr Stream child(std::uint64_t index) const {
    return Stream(Raw{}, mix(key_ + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  std::mt19937_64 engine() const { return std::mt19937_64(key_); }

  constexpr std::uint64_t key() const { return key_; }

  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  struct Raw {};
  constexpr Stream(Raw, std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
};

// Domain tags for the first level below a trial stream.
namespace stream_tag {
inline constexpr std::uint64_t data = 1;
inline constexpr std::uint64_t folds = 2;
}  // namespace stream_tag

}  // namespace eifeval

#endif  // EIFEVAL_RANDOM_HPP
