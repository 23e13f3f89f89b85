#include "survdom/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "survdom/errors.hpp"

namespace survdom {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string_view rest(line);
  for (;;) {
    const auto pos = rest.find(',');
    out.push_back(trim(rest.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

double require_double(const std::string& s, std::size_t line, const std::string& what) {
  double v = 0.0;
  if (!parse_double(s, v)) throw DataError("line " + std::to_string(line) + ": invalid " + what + " '" + s + "'");
  return v;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("header has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

bool is_skippable(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace

SurvivalSample Dataset::sample(const std::string& group) const {
  std::vector<Observation> obs;
  for (const auto& r : records)
    if (r.group == group) obs.push_back({r.time, r.status});
  if (obs.empty()) throw DataError("group '" + group + "' has no records");
  return SurvivalSample(std::move(obs), group);
}

Dataset read_dataset(std::istream& in, const CsvColumns& columns) {
  std::string censor_value = columns.censor_value;
  if (censor_value.empty()) censor_value = columns.event_value == "2" ? "1" : "0";
  if (censor_value == columns.event_value) throw DataError("event and censor codes coincide");

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (is_skippable(line)) continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw DataError("input has no header row");
  const std::size_t ti = column_index(header, columns.time);
  const std::size_t si = column_index(header, columns.status);
  const std::size_t gi = column_index(header, columns.group);
  const std::size_t need = std::max({ti, si, gi}) + 1;

  Dataset data;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    const auto fields = split_csv(line);
    if (fields.size() < need)
      throw DataError("line " + std::to_string(line_no) + ": expected at least " + std::to_string(need) + " fields");
    const double t = require_double(fields[ti], line_no, "time");
    if (!(t > 0.0)) throw DataError("line " + std::to_string(line_no) + ": time must be positive");
    Status status;
    if (fields[si] == columns.event_value) {
      status = Status::Event;
    } else if (fields[si] == censor_value) {
      status = Status::Censored;
    } else {
      throw DataError("line " + std::to_string(line_no) + ": unknown status code '" + fields[si] + "'");
    }
    const std::string& g = fields[gi];
    if (g.empty()) throw DataError("line " + std::to_string(line_no) + ": empty group label");
    if (std::find(data.groups.begin(), data.groups.end(), g) == data.groups.end()) data.groups.push_back(g);
    data.records.push_back({t, status, g});
  }
  if (data.records.empty()) throw DataError("input has no data rows");
  return data;
}

Dataset read_dataset(const std::filesystem::path& path, const CsvColumns& columns) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_dataset(in, columns);
}

std::pair<SurvivalSample, SurvivalSample> two_samples(const Dataset& data, const std::string& first,
                                                      const std::string& second) {
  if (data.groups.size() != 2)
    throw DataError("expected exactly two groups, found " + std::to_string(data.groups.size()));
  std::string a = first.empty() ? (second == data.groups[0] ? data.groups[1] : data.groups[0]) : first;
  std::string b = second.empty() ? (a == data.groups[0] ? data.groups[1] : data.groups[0]) : second;
  for (const auto& g : {a, b})
    if (std::find(data.groups.begin(), data.groups.end(), g) == data.groups.end())
      throw DataError("group '" + g + "' not present in data");
  if (a == b) throw DataError("the two groups must differ");
  return {data.sample(a), data.sample(b)};
}

std::pair<SurvivalSample, SurvivalSample> ingest_csv(const std::filesystem::path& path, const CsvColumns& columns) {
  return two_samples(read_dataset(path, columns));
}

void write_step_csv(std::ostream& out, const std::vector<std::pair<std::string, StepCurve>>& curves) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "group,time,survival\n";
  for (const auto& [label, curve] : curves) {
    out << label << ",0,1\n";
    for (std::size_t i = 0; i < curve.jump_count(); ++i)
      out << label << ',' << curve.jump_times()[i] << ',' << curve.values()[i] << '\n';
  }
  out.precision(old_precision);
}

std::vector<std::pair<std::string, StepCurve>> read_step_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> parts;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 3) throw DataError("line " + std::to_string(line_no) + ": expected group,time,survival");
    const double t = require_double(f[1], line_no, "time");
    const double v = require_double(f[2], line_no, "survival");
    if (!parts.contains(f[0])) order.push_back(f[0]);
    auto& [times, values] = parts[f[0]];
    if (t == 0.0) continue;
    times.push_back(t);
    values.push_back(v);
  }
  std::vector<std::pair<std::string, StepCurve>> out;
  for (const auto& g : order) {
    auto& [times, values] = parts[g];
    out.emplace_back(g, StepCurve(std::move(times), std::move(values)));
  }
  return out;
}

std::vector<Scenario> read_scenarios(std::istream& in) {
  std::vector<Scenario> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    const auto f = split_csv(line);
    if (out.empty() && !f.empty() && f[0] == "label") continue;
    if (f.size() != 7) throw DataError("scenario line " + std::to_string(line_no) + ": expected 7 fields");
    Scenario s;
    s.label = f[0];
    s.dist_t = {require_double(f[1], line_no, "shapeT"), require_double(f[2], line_no, "scaleT")};
    s.dist_u = {require_double(f[3], line_no, "shapeU"), require_double(f[4], line_no, "scaleU")};
    try {
      s.censor = parse_censor_target(f[5]);
    } catch (const DomainError& e) {
      throw DataError("scenario line " + std::to_string(line_no) + ": " + e.what());
    }
    const double n = require_double(f[6], line_no, "n");
    if (n < 2.0 || n != std::floor(n)) throw DataError("scenario line " + std::to_string(line_no) + ": n must be an integer >= 2");
    s.n = static_cast<std::size_t>(n);
    for (double p : {s.dist_t.shape, s.dist_t.scale, s.dist_u.shape, s.dist_u.scale})
      if (!(p > 0.0)) throw DataError("scenario line " + std::to_string(line_no) + ": gamma parameters must be positive");
    out.push_back(std::move(s));
  }
  if (out.empty()) throw DataError("scenario file is empty");
  return out;
}

void write_rejection_csv(std::ostream& out, const RejectionTable& table) {
  out << "label,shapeT,scaleT,shapeU,scaleU,censor,n,replications,completed,failed,censored_fraction";
  for (double a : table.alphas) out << ",rate_" << a;
  out << ",seed\n";
  for (const auto& row : table.rows) {
    const auto& s = row.scenario;
    out << s.label << ',' << s.dist_t.shape << ',' << s.dist_t.scale << ',' << s.dist_u.shape << ','
        << s.dist_u.scale << ',' << to_string(s.censor) << ',' << s.n << ',' << table.replications << ','
        << row.completed << ',' << row.failed << ',' << std::fixed << std::setprecision(4) << row.censored_fraction;
    for (double r : row.rates) out << ',' << r;
    out.unsetf(std::ios::fixed);
    out << std::setprecision(6) << ',' << table.seed << '\n';
  }
}

}  // namespace survdom
