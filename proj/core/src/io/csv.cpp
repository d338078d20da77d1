#include "pnav/io/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pnav::io {

namespace {

// Lines of a CSV body, header skipped, blank lines and '#' comments ignored.
std::vector<std::vector<std::string>> parse_rows(const std::string& text, const char* expected_header,
                                                 std::size_t min_fields) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (first) {
      first = false;
      if (line == expected_header) continue;  // header row
    }
    auto fields = split_csv_line(line);
    if (fields.size() < min_fields)
      throw ParseError("line " + std::to_string(lineno) + ": expected >= " + std::to_string(min_fields) +
                       " fields, got " + std::to_string(fields.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

geom::RigidTransform transform_from_fields(const std::vector<std::string>& f, std::size_t offset) {
  const geom::UnitQuaternion q(parse_double(f[offset]), parse_double(f[offset + 1]),
                               parse_double(f[offset + 2]), parse_double(f[offset + 3]));
  const Eigen::Vector3d t(parse_double(f[offset + 4]), parse_double(f[offset + 5]),
                          parse_double(f[offset + 6]));
  return geom::RigidTransform::from_quaternion(q, t);
}

void append_transform_fields(std::ostringstream& os, const geom::RigidTransform& t) {
  const geom::UnitQuaternion q = t.quaternion();
  os << format_double(q.w) << ',' << format_double(q.x) << ',' << format_double(q.y) << ','
     << format_double(q.z) << ',' << format_double(t.translation().x()) << ','
     << format_double(t.translation().y()) << ',' << format_double(t.translation().z());
}

void check_name(const std::string& name) {
  if (name.empty()) throw ParseError("empty name field");
  if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos)
    throw ParseError("name '" + name + "' contains a CSV delimiter");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s.empty()) throw ParseError("empty numeric field");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ParseError("bad numeric field '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

static const char* kTransformHeader = "name,qw,qx,qy,qz,tx,ty,tz";

std::string transforms_to_csv(const std::vector<NamedTransform>& rows) {
  std::ostringstream os;
  os << kTransformHeader << '\n';
  for (const auto& r : rows) {
    check_name(r.name);
    os << r.name << ',';
    append_transform_fields(os, r.transform);
    os << '\n';
  }
  return os.str();
}

std::vector<NamedTransform> transforms_from_csv(const std::string& text) {
  std::vector<NamedTransform> out;
  for (const auto& f : parse_rows(text, kTransformHeader, 8))
    out.push_back({f[0], transform_from_fields(f, 1)});
  return out;
}

static const char* kFiducialHeader = "name,x,y,z";

std::string fiducials_to_csv(const registration::FiducialSet& set) {
  std::ostringstream os;
  os << kFiducialHeader << '\n';
  for (const auto& [name, p] : set.points) {
    check_name(name);
    os << name << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ','
       << format_double(p.z()) << '\n';
  }
  return os.str();
}

registration::FiducialSet fiducials_from_csv(const std::string& text, const std::string& frame) {
  registration::FiducialSet set(frame);
  for (const auto& f : parse_rows(text, kFiducialHeader, 4))
    set.add(f[0], {parse_double(f[1]), parse_double(f[2]), parse_double(f[3])});
  if (set.points.empty()) throw ParseError("fiducial file has no rows");
  return set;
}

static const char* kPairHeader =
    "name,tcp_qw,tcp_qx,tcp_qy,tcp_qz,tcp_tx,tcp_ty,tcp_tz,ref_qw,ref_qx,ref_qy,ref_qz,ref_tx,ref_ty,ref_tz";

std::string pose_pairs_to_csv(const std::vector<handeye::PosePair>& pairs) {
  std::ostringstream os;
  os << kPairHeader << '\n';
  int i = 0;
  for (const auto& p : pairs) {
    os << "pair" << i++ << ',';
    append_transform_fields(os, p.robot_tcp);
    os << ',';
    append_transform_fields(os, p.tracker_ref);
    os << '\n';
  }
  return os.str();
}

std::vector<handeye::PosePair> pose_pairs_from_csv(const std::string& text) {
  std::vector<handeye::PosePair> out;
  for (const auto& f : parse_rows(text, kPairHeader, 15))
    out.push_back({transform_from_fields(f, 1), transform_from_fields(f, 8)});
  return out;
}

static const char* kTrialHeader = "modality,seed,e_t_mm,e_o_deg,t_total_s";

std::string trials_to_csv(const std::vector<metrics::TrialResult>& trials) {
  std::ostringstream os;
  os << kTrialHeader << '\n';
  for (const auto& t : trials)
    os << metrics::to_string(t.modality) << ',' << t.seed << ',' << format_double(t.e_t_mm) << ','
       << format_double(t.e_o_deg) << ',' << format_double(t.t_total_s) << '\n';
  return os.str();
}

std::vector<metrics::TrialResult> trials_from_csv(const std::string& text) {
  std::vector<metrics::TrialResult> out;
  for (const auto& f : parse_rows(text, kTrialHeader, 5)) {
    metrics::TrialResult t;
    t.modality = metrics::modality_from_string(f[0]);
    t.seed = static_cast<std::uint64_t>(std::strtoull(f[1].c_str(), nullptr, 10));
    t.e_t_mm = parse_double(f[2]);
    t.e_o_deg = parse_double(f[3]);
    t.t_total_s = parse_double(f[4]);
    out.push_back(t);
  }
  return out;
}

std::vector<GroupedValue> grouped_values_from_csv(const std::string& text) {
  std::vector<GroupedValue> out;
  for (const auto& f : parse_rows(text, "group,value", 2)) out.push_back({f[0], parse_double(f[1])});
  return out;
}

std::string stats_to_csv(const std::vector<metrics::GroupStats>& stats) {
  std::ostringstream os;
  os << "metric";
  for (const auto& g : stats)
    os << ',' << metrics::to_string(g.modality) << "_median," << metrics::to_string(g.modality) << "_sd";
  os << '\n';
  auto row = [&](const char* name, auto median_of, auto sd_of) {
    os << name;
    for (const auto& g : stats) os << ',' << format_double(median_of(g)) << ',' << format_double(sd_of(g));
    os << '\n';
  };
  row("e_t_mm", [](const auto& g) { return g.median_e_t; }, [](const auto& g) { return g.sd_e_t; });
  row("e_o_deg", [](const auto& g) { return g.median_e_o; }, [](const auto& g) { return g.sd_e_o; });
  row("t_total_s", [](const auto& g) { return g.median_t; }, [](const auto& g) { return g.sd_t; });
  return os.str();
}

std::string wilcoxon_to_csv(const std::vector<scenario::PairwiseTest>& tests) {
  std::ostringstream os;
  os << "metric,group_a,group_b,u,p,stars\n";
  for (const auto& t : tests)
    os << t.metric << ',' << metrics::to_string(t.a) << ',' << metrics::to_string(t.b) << ','
       << format_double(t.u) << ',' << format_double(t.p) << ',' << t.stars << '\n';
  return os.str();
}

std::string calibration_to_csv(const scenario::CalibrationReport& report) {
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [key, value] : report.rows()) os << key << ',' << format_double(value) << '\n';
  return os.str();
}

std::string trajectory_to_csv(const std::vector<guidance::SimState>& traj) {
  std::ostringstream os;
  os << "t_s,x_mm,y_mm,z_mm,rx_rad,ry_rad,rz_rad,vx_mm_s,vy_mm_s,vz_mm_s,wx_rad_s,wy_rad_s,wz_rad_s\n";
  for (const auto& s : traj) {
    os << format_double(s.t_s);
    for (int i = 0; i < 6; ++i) os << ',' << format_double(s.x(i));
    for (int i = 0; i < 6; ++i) os << ',' << format_double(s.v(i));
    os << '\n';
  }
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw IoError("write to '" + path + "' failed");
}

}  // namespace pnav::io
