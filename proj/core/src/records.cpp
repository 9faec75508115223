#include "gentropy/records.hpp"

#include <cmath>
#include <cstdio>

namespace gentropy {

std::string format_float17(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_records_csv(std::ostream& os, std::span<const Record> records) {
  os << "experiment,n,trial,metric,value,citation\n";
  for (const auto& r : records) {
    os << r.experiment << ',' << r.n << ',' << r.trial << ',' << r.metric
       << ',' << format_float17(r.value) << ',' << r.citation << '\n';
  }
}

}  // namespace gentropy
