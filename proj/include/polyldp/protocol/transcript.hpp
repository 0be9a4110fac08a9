// Copyright 2026 The polyldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Transcripts record every message of a simulated round with its exact size
// in bits. Payload bits are stored LSB-first within each byte.
//
// Binary layout (all integers little-endian):
//   "PLDT"  u16 version  u16 tag_len  tag bytes
//   u64 message_count  u64 total_bits
//   u8 uniform_size  [u32 bit_size if uniform]
//   u8 sequential_players  [u64 player per message otherwise]
//   [u32 bit_size per message if not uniform]
//   payload bit stream: every message's bits back to back, zero padded to a
//   byte boundary at the end.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyldp/core/error.hpp"

namespace polyldp {

struct MessageRecord {
  std::uint64_t player = 0;
  std::vector<std::uint8_t> payload;  // ceil(bit_size / 8) bytes
  std::uint32_t bit_size = 0;
};

struct Transcript {
  std::string tag;
  std::vector<MessageRecord> messages;
  std::uint64_t total_bits = 0;

  void add(MessageRecord m) {
    total_bits += m.bit_size;
    messages.push_back(std::move(m));
  }
};

struct CommStats {
  std::uint64_t total_bits = 0;
  std::uint64_t max_player_bits = 0;
  std::uint64_t messages = 0;
};

// Exact accounting; bits are summed per player before taking the max.
inline CommStats comm_stats(const Transcript& t) {
  CommStats s;
  s.messages = t.messages.size();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> per_player;
  per_player.reserve(t.messages.size());
  for (const auto& m : t.messages) {
    s.total_bits += m.bit_size;
    per_player.emplace_back(m.player, m.bit_size);
  }
  std::sort(per_player.begin(), per_player.end());
  for (std::size_t i = 0; i < per_player.size();) {
    std::uint64_t bits = 0;
    std::size_t j = i;
    for (; j < per_player.size() && per_player[j].first == per_player[i].first; ++j) {
      bits += per_player[j].second;
    }
    s.max_player_bits = std::max(s.max_player_bits, bits);
    i = j;
  }
  return s;
}

namespace detail {

inline void put_u64_bits(std::vector<std::uint8_t>& out, std::uint64_t v, int bits) {
  for (int i = 0; i < bits; i += 8) out.push_back(static_cast<std::uint8_t>(v >> i));
}

inline std::uint64_t get_u64_bits(std::span<const std::uint8_t> in, int bits) {
  std::uint64_t v = 0;
  for (int i = 0; i < bits; i += 8) v |= static_cast<std::uint64_t>(in[i / 8]) << i;
  return v;
}

class BitWriter {
 public:
  void write(std::span<const std::uint8_t> bytes, std::uint32_t bits) {
    for (std::uint32_t i = 0; i < bits; ++i) {
      const bool bit = (bytes[i / 8] >> (i % 8)) & 1;
      if (used_ % 8 == 0) buffer_.push_back(0);
      if (bit) buffer_.back() |= static_cast<std::uint8_t>(1u << (used_ % 8));
      ++used_;
    }
  }
  const std::vector<std::uint8_t>& bytes() const { return buffer_; }

 private:
  std::vector<std::uint8_t> buffer_;
  std::uint64_t used_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::vector<std::uint8_t> read(std::uint32_t bits) {
    std::vector<std::uint8_t> out((bits + 7) / 8, 0);
    for (std::uint32_t i = 0; i < bits; ++i, ++pos_) {
      if (pos_ / 8 >= bytes_.size()) throw DomainError("transcript: truncated payload");
      if ((bytes_[pos_ / 8] >> (pos_ % 8)) & 1) {
        out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
      }
    }
    return out;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t pos_ = 0;
};

class ByteCursor {
 public:
  explicit ByteCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint64_t take(int width_bytes) {
    if (pos_ + width_bytes > bytes_.size()) throw DomainError("transcript: truncated header");
    const auto v = get_u64_bits(bytes_.subspan(pos_), width_bytes * 8);
    pos_ += width_bytes;
    return v;
  }
  std::span<const std::uint8_t> take_bytes(std::size_t count) {
    if (pos_ + count > bytes_.size()) throw DomainError("transcript: truncated header");
    auto out = bytes_.subspan(pos_, count);
    pos_ += count;
    return out;
  }
  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline constexpr std::uint16_t kTranscriptVersion = 1;

inline std::vector<std::uint8_t> encode_transcript(const Transcript& t) {
  std::vector<std::uint8_t> out = {'P', 'L', 'D', 'T'};
  detail::put_u64_bits(out, kTranscriptVersion, 16);
  if (t.tag.size() > 0xffff) throw DomainError("encode_transcript: tag too long");
  detail::put_u64_bits(out, t.tag.size(), 16);
  out.insert(out.end(), t.tag.begin(), t.tag.end());
  detail::put_u64_bits(out, t.messages.size(), 64);
  detail::put_u64_bits(out, t.total_bits, 64);

  const bool uniform =
      std::all_of(t.messages.begin(), t.messages.end(), [&](const MessageRecord& m) {
        return m.bit_size == t.messages.front().bit_size;
      });
  out.push_back(uniform ? 1 : 0);
  if (uniform) {
    detail::put_u64_bits(out, t.messages.empty() ? 0 : t.messages.front().bit_size, 32);
  }
  bool sequential = true;
  for (std::size_t i = 0; i < t.messages.size(); ++i) sequential &= t.messages[i].player == i;
  out.push_back(sequential ? 1 : 0);
  if (!sequential) {
    for (const auto& m : t.messages) detail::put_u64_bits(out, m.player, 64);
  }
  if (!uniform) {
    for (const auto& m : t.messages) detail::put_u64_bits(out, m.bit_size, 32);
  }
  detail::BitWriter bits;
  for (const auto& m : t.messages) bits.write(m.payload, m.bit_size);
  out.insert(out.end(), bits.bytes().begin(), bits.bytes().end());
  return out;
}

inline Transcript decode_transcript(std::span<const std::uint8_t> bytes) {
  detail::ByteCursor cur(bytes);
  const auto magic = cur.take_bytes(4);
  if (!std::equal(magic.begin(), magic.end(), "PLDT")) {
    throw DomainError("decode_transcript: bad magic");
  }
  if (cur.take(2) != kTranscriptVersion) {
    throw DomainError("decode_transcript: unsupported version");
  }
  Transcript t;
  const auto tag = cur.take_bytes(cur.take(2));
  t.tag.assign(tag.begin(), tag.end());
  const std::uint64_t count = cur.take(8);
  const std::uint64_t total = cur.take(8);
  const bool uniform = cur.take(1) != 0;
  const auto uniform_size = uniform ? static_cast<std::uint32_t>(cur.take(4)) : 0u;
  const bool sequential = cur.take(1) != 0;
  t.messages.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    t.messages[i].player = sequential ? i : cur.take(8);
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    t.messages[i].bit_size = uniform ? uniform_size : static_cast<std::uint32_t>(cur.take(4));
  }
  detail::BitReader reader(cur.rest());
  for (auto& m : t.messages) {
    m.payload = reader.read(m.bit_size);
    t.total_bits += m.bit_size;
  }
  if (t.total_bits != total) throw DomainError("decode_transcript: total_bits mismatch");
  return t;
}

inline nlohmann::json transcript_to_json(const Transcript& t) {
  static constexpr char kHex[] = "0123456789abcdef";
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : t.messages) {
    std::string hex;
    for (auto b : m.payload) {
      hex.push_back(kHex[b >> 4]);
      hex.push_back(kHex[b & 15]);
    }
    messages.push_back({{"player", m.player}, {"bit_size", m.bit_size}, {"payload", hex}});
  }
  return {{"tag", t.tag}, {"total_bits", t.total_bits}, {"messages", messages}};
}

inline Transcript transcript_from_json(const nlohmann::json& j) {
  Transcript t;
  t.tag = j.at("tag").get<std::string>();
  for (const auto& m : j.at("messages")) {
    MessageRecord r;
    r.player = m.at("player").get<std::uint64_t>();
    r.bit_size = m.at("bit_size").get<std::uint32_t>();
    const auto hex = m.at("payload").get<std::string>();
    if (hex.size() % 2 != 0) throw DomainError("transcript_from_json: odd payload hex");
    for (std::size_t i = 0; i < hex.size(); i += 2) {
      r.payload.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
    }
    t.add(std::move(r));
  }
  if (t.total_bits != j.at("total_bits").get<std::uint64_t>()) {
    throw DomainError("transcript_from_json: total_bits mismatch");
  }
  return t;
}

// Payload helpers for the built-in message kinds.
inline std::vector<std::uint8_t> pack_doubles(std::span<const double> values) {
  std::vector<std::uint8_t> out;
  out.reserve(values.size() * 8);
  for (double v : values) detail::put_u64_bits(out, std::bit_cast<std::uint64_t>(v), 64);
  return out;
}

inline std::vector<double> unpack_doubles(std::span<const std::uint8_t> payload) {
  std::vector<double> out(payload.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::bit_cast<double>(detail::get_u64_bits(payload.subspan(8 * i), 64));
  }
  return out;
}

inline std::vector<std::uint8_t> pack_uint(std::uint64_t v, int bits) {
  std::vector<std::uint8_t> out;
  detail::put_u64_bits(out, v, bits);
  out.resize((bits + 7) / 8);
  return out;
}

inline std::uint64_t unpack_uint(std::span<const std::uint8_t> payload, int bits) {
  std::uint64_t v = 0;
  for (int i = 0; i < bits; ++i) {
    if ((payload[i / 8] >> (i % 8)) & 1) v |= std::uint64_t{1} << i;
  }
  return v;
}

}  // namespace polyldp
