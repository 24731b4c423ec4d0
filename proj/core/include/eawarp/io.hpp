#pragma once

#include <string>
#include <vector>

#include "eawarp/grid.hpp"
#include "eawarp/warping.hpp"

namespace eawarp {

/// Raw rows of a rating CSV: columns time,value with an optional header.
struct RatingSeries {
  std::vector<double> time;
  std::vector<double> value;
};

/// Parses a rating CSV. Accepts an optional "time,value" header. Throws
/// std::runtime_error (message names the file) unless there are >= 3 rows,
/// every field parses as a finite number, and time strictly increases.
RatingSeries read_rating_csv(const std::string& path);

/// Linear interpolation of the rows onto n equispaced points spanning the
/// observed interval. Rows that are already equispaced with exactly n points
/// pass through bit-identically. Requires n >= 2.
SampledFunction to_uniform(const RatingSeries& series, int n);

/// %.17g: the shortest fixed format that round-trips every double exactly.
std::string format_g17(double v);

/// CSV with header "time,<value_header>", one row per grid point, %.17g.
std::string function_csv(const SampledFunction& f, const std::string& value_header);

/// CSV with header "t,gamma" on the normalized grid, %.17g.
std::string warping_csv(const WarpingFunction& g);

/// Writes content to path via a temporary file in the same directory plus an
/// atomic rename, so readers never observe a partial file. Creates parent
/// directories. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace eawarp
