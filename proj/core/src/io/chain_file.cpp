#include "pnav/io/chain_file.hpp"

#include <sstream>

#include "pnav/io/csv.hpp"

namespace pnav::io {

robot::KinematicChain parse_chain(const std::string& text) {
  std::vector<robot::Joint> joints;
  geom::RigidTransform tcp;
  bool have_tcp = false;

  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;

    std::vector<double> nums;
    double v;
    while (ls >> v) nums.push_back(v);
    if (!ls.eof()) throw ParseError("chain line " + std::to_string(lineno) + ": non-numeric field");

    if (kind == "joint") {
      if (nums.size() != 6 && nums.size() != 10)
        throw ParseError("chain line " + std::to_string(lineno) +
                         ": joint needs 6 or 10 numbers, got " + std::to_string(nums.size()));
      robot::Joint j;
      j.axis = geom::Vec3(nums[0], nums[1], nums[2]);
      const double n = j.axis.norm();
      if (n < 1e-9) throw ParseError("chain line " + std::to_string(lineno) + ": zero joint axis");
      j.axis /= n;
      j.offset_mm = geom::Vec3(nums[3], nums[4], nums[5]);
      if (nums.size() == 10)
        j.zero_rotation = geom::UnitQuaternion(nums[6], nums[7], nums[8], nums[9]).to_rotation();
      joints.push_back(j);
    } else if (kind == "tcp") {
      if (nums.size() != 7)
        throw ParseError("chain line " + std::to_string(lineno) + ": tcp needs 7 numbers, got " +
                         std::to_string(nums.size()));
      if (have_tcp) throw ParseError("chain line " + std::to_string(lineno) + ": duplicate tcp line");
      tcp = geom::RigidTransform::from_quaternion(geom::UnitQuaternion(nums[0], nums[1], nums[2], nums[3]),
                                                  geom::Vec3(nums[4], nums[5], nums[6]));
      have_tcp = true;
    } else {
      throw ParseError("chain line " + std::to_string(lineno) + ": unknown entry '" + kind + "'");
    }
  }
  if (joints.empty()) throw ParseError("chain description has no joints");
  return robot::KinematicChain(std::move(joints), tcp);
}

robot::KinematicChain load_chain(const std::string& path) { return parse_chain(read_text_file(path)); }

std::string chain_to_text(const robot::KinematicChain& chain) {
  std::ostringstream os;
  os << "# pnav chain description: joint ax ay az ox oy oz [qw qx qy qz]; tcp qw qx qy qz tx ty tz\n";
  for (const auto& j : chain.joints()) {
    os << "joint";
    for (int i = 0; i < 3; ++i) os << ' ' << format_double(j.axis(i));
    for (int i = 0; i < 3; ++i) os << ' ' << format_double(j.offset_mm(i));
    const geom::UnitQuaternion q = geom::UnitQuaternion::from_rotation(j.zero_rotation);
    if (std::abs(q.w - 1.0) > 1e-15 || q.x != 0.0 || q.y != 0.0 || q.z != 0.0)
      os << ' ' << format_double(q.w) << ' ' << format_double(q.x) << ' ' << format_double(q.y) << ' '
         << format_double(q.z);
    os << '\n';
  }
  const geom::UnitQuaternion q = chain.tcp_offset().quaternion();
  os << "tcp " << format_double(q.w) << ' ' << format_double(q.x) << ' ' << format_double(q.y) << ' '
     << format_double(q.z);
  for (int i = 0; i < 3; ++i) os << ' ' << format_double(chain.tcp_offset().translation()(i));
  os << '\n';
  return os.str();
}

}  // namespace pnav::io
