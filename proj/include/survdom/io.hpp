#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "survdom/simulation.hpp"
#include "survdom/survival.hpp"

namespace survdom {

struct CsvColumns {
  std::string time = "time";
  std::string status = "status";
  std::string group = "group";
  std::string event_value = "1";
  /// Empty means "0", or "1" when the event code is "2" (R survival coding).
  std::string censor_value;
};

struct DatasetRecord {
  double time;
  Status status;
  std::string group;
};

/// Parsed records plus the group labels in order of first appearance.
struct Dataset {
  std::vector<DatasetRecord> records;
  std::vector<std::string> groups;

  SurvivalSample sample(const std::string& group) const;
};

/// Reads a header-first comma-separated file. Malformed rows raise DataError
/// naming the line number.
Dataset read_dataset(std::istream& in, const CsvColumns& columns = {});
Dataset read_dataset(const std::filesystem::path& path, const CsvColumns& columns = {});

/// Splits a dataset with exactly two groups. When `first`/`second` are given
/// they select the order; otherwise order of appearance is used.
std::pair<SurvivalSample, SurvivalSample> two_samples(const Dataset& data, const std::string& first = {},
                                                      const std::string& second = {});

std::pair<SurvivalSample, SurvivalSample> ingest_csv(const std::filesystem::path& path,
                                                     const CsvColumns& columns = {});

/// Step coordinates, one row per (group, time, value): the origin (0, 1) and
/// each jump with its post-jump value. Values print with round-trip precision.
void write_step_csv(std::ostream& out, const std::vector<std::pair<std::string, StepCurve>>& curves);
std::vector<std::pair<std::string, StepCurve>> read_step_csv(std::istream& in);

/// One scenario per line: label,shapeT,scaleT,shapeU,scaleU,censor(P20|P50),n.
/// Blank lines, '#' comments and a leading header line are skipped.
std::vector<Scenario> read_scenarios(std::istream& in);

void write_rejection_csv(std::ostream& out, const RejectionTable& table);

}  // namespace survdom
