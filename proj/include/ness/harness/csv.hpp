#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "ness/harness/scan.hpp"

namespace ness::harness {

/// 12 significant digits; nan for missing values.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

inline void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "scan_value,measure,n,numeric,lin_term,log_term,const_fit,residual,flag\n";
  for (const auto& r : rows) {
    os << format_number(r.scan_value) << ',' << r.measure.label() << ',' << r.measure.n << ','
       << format_number(r.numeric) << ',' << format_number(r.lin_term) << ',' << format_number(r.log_term) << ','
       << format_number(r.const_fit) << ',' << format_number(r.residual) << ',' << csv_escape(r.flag()) << '\n';
  }
}

}  // namespace ness::harness
