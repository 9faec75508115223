#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace gentropy {

/// One experiment measurement row. `trial` is a trial index or "aggregate".
struct Record {
  std::string experiment;
  long n = 0;
  std::string trial = "aggregate";
  std::string metric;
  double value = 0.0;
  std::string citation;
};

/// Locale-free float with 17 significant digits; byte-stable output makes
/// determinism auditable.
std::string format_float17(double value);

/// CSV with header (experiment,n,trial,metric,value,citation).
void write_records_csv(std::ostream& os, std::span<const Record> records);

}  // namespace gentropy
