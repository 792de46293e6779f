#ifndef NSFOM_DETAIL_SHA1_HPP
#define NSFOM_DETAIL_SHA1_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <string>

namespace nsfom::detail {

// Plain SHA-1, enough for content-addressing experiment inputs.
class Sha1 {
 public:
  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    total_ += len;
    while (len > 0) {
      const std::size_t room = 64 - fill_;
      const std::size_t take = len < room ? len : room;
      std::memcpy(buf_.data() + fill_, p, take);
      fill_ += take;
      p += take;
      len -= take;
      if (fill_ == 64) {
        process(buf_.data());
        fill_ = 0;
      }
    }
  }

  std::string hex_digest() {
    const std::uint64_t bits = total_ * 8;
    unsigned char pad = 0x80;
    update(&pad, 1);
    const unsigned char zero = 0;
    while (fill_ != 56) update(&zero, 1);
    unsigned char len_be[8];
    for (int i = 0; i < 8; ++i) len_be[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
    std::memcpy(buf_.data() + 56, len_be, 8);
    process(buf_.data());
    static const char* hexc = "0123456789abcdef";
    std::string out;
    out.reserve(40);
    for (std::uint32_t w : h_) {
      for (int i = 28; i >= 0; i -= 4) out.push_back(hexc[(w >> i) & 0xF]);
    }
    return out;
  }

 private:
  static std::uint32_t rol(std::uint32_t v, int b) { return (v << b) | (v >> (32 - b)); }

  void process(const unsigned char* block) {
    std::uint32_t w[80];
    for (int i = 0; i < 16; ++i) {
      w[i] = (std::uint32_t(block[4 * i]) << 24) | (std::uint32_t(block[4 * i + 1]) << 16) |
             (std::uint32_t(block[4 * i + 2]) << 8) | std::uint32_t(block[4 * i + 3]);
    }
    for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
    std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3], e = h_[4];
    for (int i = 0; i < 80; ++i) {
      std::uint32_t f, k;
      if (i < 20) {
        f = (b & c) | (~b & d);
        k = 0x5A827999;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDC;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6;
      }
      const std::uint32_t tmp = rol(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rol(b, 30);
      b = a;
      a = tmp;
    }
    h_[0] += a;
    h_[1] += b;
    h_[2] += c;
    h_[3] += d;
    h_[4] += e;
  }

  std::array<std::uint32_t, 5> h_{0x67452301, 0xEFCDAB89, 0x98BADCFE, 0x10325476,
                                  0xC3D2E1F0};
  std::array<unsigned char, 64> buf_{};
  std::size_t fill_ = 0;
  std::uint64_t total_ = 0;
};

// Git-style blob hash of a byte string.
inline std::string sha1_blob_hex(const std::string& content) {
  Sha1 h;
  const std::string head = "blob " + std::to_string(content.size());
  h.update(head.data(), head.size() + 1);  // include the NUL terminator
  h.update(content.data(), content.size());
  return h.hex_digest();
}

}  // namespace nsfom::detail

#endif  // NSFOM_DETAIL_SHA1_HPP
