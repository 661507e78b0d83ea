#include "imu_csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace virtimu {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

double parse_number(const std::string& field, const std::string& path, std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw ParseError("imu csv: '" + path + "' line " + std::to_string(line_no) +
                     ": '" + field + "' is not a finite number");
  return v;
}

struct PendingGroup {
  std::string subject, activity, location;
  std::vector<double> times;
  std::vector<Vec3> accel, gyro;
  std::size_t first_line = 0;
};

ImuStream finalize_group(PendingGroup&& g, bool has_gyro, const std::string& path,
                         Source source) {
  if (g.times.size() < 2)
    throw ParseError("imu csv: '" + path + "': group (subject '" + g.subject + "', activity '" +
                     g.activity + "', location '" + g.location + "') starting at line " +
                     std::to_string(g.first_line) +
                     " has fewer than 2 rows; cannot infer a sample rate");

  std::vector<double> deltas(g.times.size() - 1);
  for (std::size_t i = 0; i + 1 < g.times.size(); ++i) {
    deltas[i] = g.times[i + 1] - g.times[i];
    if (deltas[i] <= 0.0)
      throw ParseError("imu csv: '" + path + "': non-monotone time in group (subject '" +
                       g.subject + "', location '" + g.location + "') near t=" +
                       std::to_string(g.times[i]));
  }
  std::vector<double> sorted_deltas(deltas);
  std::nth_element(sorted_deltas.begin(), sorted_deltas.begin() + sorted_deltas.size() / 2,
                   sorted_deltas.end());
  double median = sorted_deltas[sorted_deltas.size() / 2];
  for (double d : deltas)
    if (std::abs(d - median) > 1e-6)
      throw ParseError("imu csv: '" + path + "': mixed sample rates in group (subject '" +
                       g.subject + "', location '" + g.location + "'): time step " +
                       std::to_string(d) + " vs median " + std::to_string(median));

  double rate = 1.0 / median;
  if (std::abs(rate - std::round(rate)) <= 1e-6 * rate) rate = std::round(rate);

  ImuStream stream;
  stream.sample_rate = rate;
  stream.subject = g.subject;
  stream.activity = g.activity;
  stream.source = source;
  SensorTrack track;
  track.location = g.location;
  track.accel = std::move(g.accel);
  if (has_gyro) track.gyro = std::move(g.gyro);
  stream.tracks.push_back(std::move(track));
  return stream;
}

}  // namespace

std::vector<ImuStream> read_imu_csv(const std::string& path, Source source) {
  std::ifstream in(path);
  if (!in) throw IoError("imu csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError("imu csv: '" + path + "': empty file");
  std::vector<std::string> header = split_csv(line);
  const std::vector<std::string> base = {"t_s", "subject", "activity", "location",
                                         "ax", "ay", "az"};
  bool has_gyro;
  if (header.size() == 7 &&
      std::equal(base.begin(), base.end(), header.begin())) {
    has_gyro = false;
  } else if (header.size() == 10 && std::equal(base.begin(), base.end(), header.begin()) &&
             header[7] == "gx" && header[8] == "gy" && header[9] == "gz") {
    has_gyro = true;
  } else {
    throw ParseError("imu csv: '" + path +
                     "': header must be t_s,subject,activity,location,ax,ay,az[,gx,gy,gz]");
  }
  std::size_t n_fields = header.size();

  // Rows group by (subject, location); an activity change closes the group.
  std::vector<PendingGroup> open;
  std::vector<ImuStream> finished;
  auto flush = [&](PendingGroup& g) {
    finished.push_back(finalize_group(std::move(g), has_gyro, path, source));
  };

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv(line);
    if (fields.size() != n_fields)
      throw ParseError("imu csv: '" + path + "' line " + std::to_string(line_no) + ": expected " +
                       std::to_string(n_fields) + " fields, got " +
                       std::to_string(fields.size()));
    double t = parse_number(fields[0], path, line_no);
    const std::string& subject = fields[1];
    const std::string& activity = fields[2];
    const std::string& location = fields[3];
    Vec3 accel(parse_number(fields[4], path, line_no), parse_number(fields[5], path, line_no),
               parse_number(fields[6], path, line_no));
    Vec3 gyro = Vec3::Zero();
    if (has_gyro)
      gyro = Vec3(parse_number(fields[7], path, line_no), parse_number(fields[8], path, line_no),
                  parse_number(fields[9], path, line_no));

    PendingGroup* group = nullptr;
    for (PendingGroup& g : open)
      if (g.subject == subject && g.location == location) {
        group = &g;
        break;
      }
    if (group && group->activity != activity) {
      flush(*group);
      *group = PendingGroup{subject, activity, location, {}, {}, {}, line_no};
    } else if (!group) {
      open.push_back(PendingGroup{subject, activity, location, {}, {}, {}, line_no});
      group = &open.back();
    }
    group->times.push_back(t);
    group->accel.push_back(accel);
    if (has_gyro) group->gyro.push_back(gyro);
  }
  for (PendingGroup& g : open) flush(g);
  if (finished.empty()) throw ParseError("imu csv: '" + path + "': no data rows");
  return finished;
}

void write_imu_csv(const std::vector<ImuStream>& streams, const std::string& path) {
  if (streams.empty()) throw std::invalid_argument("imu csv: nothing to write");
  bool has_gyro = !streams[0].tracks.empty() && streams[0].tracks[0].has_gyro();
  for (const ImuStream& s : streams) {
    s.validate();
    if (s.tracks.empty()) throw std::invalid_argument("imu csv: stream without tracks");
    for (const SensorTrack& t : s.tracks)
      if (t.has_gyro() != has_gyro)
        throw std::invalid_argument(
            "imu csv: cannot mix gyro and gyro-less tracks in one file");
    for (const std::string* field : {&s.subject, &s.activity})
      if (field->find_first_of(",\n\r") != std::string::npos)
        throw std::invalid_argument("imu csv: metadata fields must not contain commas");
    for (const SensorTrack& t : s.tracks)
      if (t.location.find_first_of(",\n\r") != std::string::npos)
        throw std::invalid_argument("imu csv: location must not contain commas");
  }

  std::ofstream out(path);
  if (!out) throw IoError("imu csv: cannot write '" + path + "'");
  out << "t_s,subject,activity,location,ax,ay,az";
  if (has_gyro) out << ",gx,gy,gz";
  out << "\n";

  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const ImuStream& s : streams) {
    for (const SensorTrack& t : s.tracks) {
      for (std::size_t k = 0; k < t.accel.size(); ++k) {
        out << num(static_cast<double>(k) / s.sample_rate) << ',' << s.subject << ','
            << s.activity << ',' << t.location << ',' << num(t.accel[k].x()) << ','
            << num(t.accel[k].y()) << ',' << num(t.accel[k].z());
        if (has_gyro)
          out << ',' << num(t.gyro[k].x()) << ',' << num(t.gyro[k].y()) << ','
              << num(t.gyro[k].z());
        out << "\n";
      }
    }
  }
  if (!out) throw IoError("imu csv: write failed for '" + path + "'");
}

}  // namespace virtimu
