#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pnav/geom.hpp"

namespace pnav::io {

/// One tracked-body pose sample of the record/replay stream.
struct PoseFrame {
  std::uint32_t seq = 0;
  std::uint64_t timestamp_us = 0;
  std::uint16_t body_id = 0;
  geom::UnitQuaternion orientation;
  geom::Point3 position_mm = geom::Point3::Zero();
};

struct BodyEntry {
  std::uint16_t body_id = 0;
  std::string name;
};

/// In-memory form of a .pnav stream file.
struct StreamData {
  std::vector<BodyEntry> bodies;
  std::vector<PoseFrame> frames;  // ordered by timestamp
};

/// Binary layout (all integers and doubles little-endian):
///   magic "PNAV" | u16 version=1 | u16 body_count
///   per body: u16 body_id | u16 name_len | name bytes
///   per frame: u32 record_len=70 | u32 seq | u64 timestamp_us |
///              u16 body_id | 7 x f64 (qw qx qy qz tx ty tz)
/// Validation failures throw CorruptFile naming the byte offset.
std::string encode_stream(const StreamData& data);
StreamData decode_stream(const std::string& bytes);

void write_stream(const std::string& path, const StreamData& data);
StreamData read_stream(const std::string& path);

/// Delivers frames in order, sleeping out the recorded timestamp gaps
/// divided by `rate` (rate <= 0 delivers as fast as possible; recorded
/// streams are typically ~20 Hz, so rate 1 replays in real time).
void replay(const StreamData& data, double rate, const std::function<void(const PoseFrame&)>& sink);

/// Single-producer single-consumer loopback channel: the stand-in for the
/// tracking transport layer. Delivery is in-order and lossless.
class LoopbackChannel {
public:
  void push(const PoseFrame& f);
  void close();
  /// Blocks until a frame arrives or the channel closes empty.
  std::optional<PoseFrame> pop();

private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<PoseFrame> queue_;
  bool closed_ = false;
};

}  // namespace pnav::io
