#include "pnav/io/stream.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

#include "pnav/io/csv.hpp"

namespace pnav::io {

namespace {

constexpr char kMagic[4] = {'P', 'N', 'A', 'V'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint32_t kRecordLen = 4 + 8 + 2 + 7 * 8;  // 70

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint64_t offset() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }
  std::uint64_t remaining() const { return bytes_.size() - pos_; }

  void need(std::uint64_t n, const char* what) {
    if (remaining() < n)
      throw CorruptFile(std::string("truncated stream: expected ") + what, pos_);
  }

  std::uint16_t u16(const char* what) {
    need(2, what);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    pos_ += 2;
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

  std::string raw(std::uint64_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

private:
  const std::string& bytes_;
  std::uint64_t pos_ = 0;
};

void validate_order(const StreamData& data) {
  std::map<std::uint16_t, std::uint32_t> last_seq;
  std::uint64_t last_ts = 0;
  for (std::size_t i = 0; i < data.frames.size(); ++i) {
    const PoseFrame& f = data.frames[i];
    if (i > 0 && f.timestamp_us < last_ts)
      throw CorruptFile("frame " + std::to_string(i) + " timestamp decreases");
    last_ts = f.timestamp_us;
    auto it = last_seq.find(f.body_id);
    if (it != last_seq.end() && f.seq <= it->second)
      throw CorruptFile("frame " + std::to_string(i) + " seq " + std::to_string(f.seq) +
                        " not increasing for body " + std::to_string(f.body_id));
    last_seq[f.body_id] = f.seq;
  }
}

}  // namespace

std::string encode_stream(const StreamData& data) {
  validate_order(data);
  std::string out;
  out.append(kMagic, 4);
  put_u16(out, kVersion);
  if (data.bodies.size() > UINT16_MAX) throw CorruptFile("too many bodies");
  put_u16(out, static_cast<std::uint16_t>(data.bodies.size()));
  for (const auto& b : data.bodies) {
    put_u16(out, b.body_id);
    if (b.name.size() > UINT16_MAX) throw CorruptFile("body name too long");
    put_u16(out, static_cast<std::uint16_t>(b.name.size()));
    out += b.name;
  }
  for (const auto& f : data.frames) {
    put_u32(out, kRecordLen);
    put_u32(out, f.seq);
    put_u64(out, f.timestamp_us);
    put_u16(out, f.body_id);
    put_f64(out, f.orientation.w);
    put_f64(out, f.orientation.x);
    put_f64(out, f.orientation.y);
    put_f64(out, f.orientation.z);
    put_f64(out, f.position_mm.x());
    put_f64(out, f.position_mm.y());
    put_f64(out, f.position_mm.z());
  }
  return out;
}

StreamData decode_stream(const std::string& bytes) {
  Reader r(bytes);
  if (r.raw(4, "magic") != std::string(kMagic, 4)) throw CorruptFile("bad magic, not a PNAV stream", 0);
  const std::uint16_t version = r.u16("version");
  if (version != kVersion)
    throw CorruptFile("unsupported stream version " + std::to_string(version), r.offset() - 2);

  StreamData data;
  const std::uint16_t body_count = r.u16("body count");
  for (std::uint16_t i = 0; i < body_count; ++i) {
    BodyEntry b;
    b.body_id = r.u16("body id");
    const std::uint16_t len = r.u16("body name length");
    b.name = r.raw(len, "body name");
    data.bodies.push_back(std::move(b));
  }

  while (!r.at_end()) {
    const std::uint64_t record_start = r.offset();
    const std::uint32_t len = r.u32("record length");
    if (len != kRecordLen)
      throw CorruptFile("bad record length " + std::to_string(len), record_start);
    if (r.remaining() < len) throw CorruptFile("truncated record", record_start);

    PoseFrame f;
    f.seq = r.u32("seq");
    f.timestamp_us = r.u64("timestamp");
    f.body_id = r.u16("body id");
    const double qw = r.f64("qw"), qx = r.f64("qx"), qy = r.f64("qy"), qz = r.f64("qz");
    const double norm = std::sqrt(qw * qw + qx * qx + qy * qy + qz * qz);
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9 || qw < 0.0)
      throw CorruptFile("non-canonical quaternion in record", record_start);
    f.orientation.w = qw;
    f.orientation.x = qx;
    f.orientation.y = qy;
    f.orientation.z = qz;
    f.position_mm = {r.f64("tx"), r.f64("ty"), r.f64("tz")};
    data.frames.push_back(f);
  }
  validate_order(data);
  return data;
}

void write_stream(const std::string& path, const StreamData& data) {
  write_text_file(path, encode_stream(data));
}

StreamData read_stream(const std::string& path) { return decode_stream(read_text_file(path)); }

void replay(const StreamData& data, double rate, const std::function<void(const PoseFrame&)>& sink) {
  std::uint64_t prev_ts = 0;
  bool first = true;
  for (const auto& f : data.frames) {
    if (!first && rate > 0.0) {
      const double gap_us = static_cast<double>(f.timestamp_us - prev_ts) / rate;
      if (gap_us > 0.0)
        std::this_thread::sleep_for(std::chrono::microseconds(static_cast<std::int64_t>(gap_us)));
    }
    first = false;
    prev_ts = f.timestamp_us;
    sink(f);
  }
}

void LoopbackChannel::push(const PoseFrame& f) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    queue_.push_back(f);
  }
  cv_.notify_one();
}

void LoopbackChannel::close() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    closed_ = true;
  }
  cv_.notify_one();
}

std::optional<PoseFrame> LoopbackChannel::pop() {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return closed_ || !queue_.empty(); });
  if (queue_.empty()) return std::nullopt;
  PoseFrame f = queue_.front();
  queue_.pop_front();
  return f;
}

}  // namespace pnav::io
