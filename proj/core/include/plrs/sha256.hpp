#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace plrs {

/// SHA-256 (FIPS 180-2). Used for config digests and output comparison.
class Sha256 {
 public:
  Sha256();

  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }

  /// Finalizes and returns the 32-byte digest. The object must not be
  /// updated afterwards.
  std::array<std::uint8_t, 32> digest();

  static std::string hex_digest(std::string_view s);

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_;
  std::uint64_t bit_count_ = 0;
  std::array<std::uint8_t, 64> buffer_;
  std::size_t buffer_len_ = 0;
};

}  // namespace plrs
