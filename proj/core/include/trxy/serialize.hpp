#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "trxy/free_probability.hpp"
#include "trxy/graphs.hpp"
#include "trxy/swap.hpp"

namespace trxy {

// Structured (JSON) forms. Polynomials are arrays of [exponent-vector, "p/q"]
// pairs over an explicit variable list; emission is byte-stable.

struct CorrelatorRecord {
  std::string curve_name;
  std::string x;  // canonical text of x(z)
  std::string y;
  int g = 0;
  int n = 1;
  RationalFunction value;
  friend bool operator==(const CorrelatorRecord&, const CorrelatorRecord&) = default;
};

std::string emit_correlator(const CorrelatorRecord& r);
CorrelatorRecord parse_correlator(std::string_view json);

struct TermReportRecord {
  int g = 0;
  int n = 1;
  TermReport report;
};

std::string emit_term_report(const TermReportRecord& r);
TermReportRecord parse_term_report(std::string_view json);

std::string emit_graphs(const std::vector<DecoratedGraph>& graphs);
std::vector<DecoratedGraph> parse_graphs(std::string_view json);

struct SeriesRecord {
  int g = 0;
  int n = 1;
  MultiSeries series;
};

// {"g":..,"n":..,"order":..,"coefficients":[[[k1,..,kn],"p/q"],..]}; "order"
// is omitted for exact polynomials.
std::string emit_series(const SeriesRecord& r);
// Accepts one record, an array of records, or {"entries":[...]}; each
// coefficient may also be written flat as [k1,..,kn,"p/q"].
GeneratingSeries parse_series_file(std::string_view json);
std::string emit_series_file(const GeneratingSeries& s);

}  // namespace trxy
