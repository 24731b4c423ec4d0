#include "eawarp/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "eawarp/numeric.hpp"

namespace eawarp {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.c_str();
  char* end = nullptr;
  errno = 0;
  out = std::strtod(b, &end);
  if (end == b || errno == ERANGE || !std::isfinite(out)) return false;
  while (*end != '\0') {
    if (!std::isspace(static_cast<unsigned char>(*end))) return false;
    ++end;
  }
  return true;
}

std::string strip(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

RatingSeries read_rating_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  RatingSeries rs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = strip(line);
    if (t.empty()) continue;
    const size_t comma = t.find(',');
    if (comma == std::string::npos)
      fail(path, "line " + std::to_string(lineno) + ": expected two columns");
    const std::string c1 = strip(t.substr(0, comma));
    const std::string c2 = strip(t.substr(comma + 1));
    double tv, vv;
    if (!parse_double(c1, tv) || !parse_double(c2, vv)) {
      if (lineno == 1) continue;  // header row
      fail(path, "line " + std::to_string(lineno) + ": not numeric");
    }
    rs.time.push_back(tv);
    rs.value.push_back(vv);
  }
  if (rs.time.size() < 3) fail(path, "needs at least 3 data rows");
  for (size_t i = 1; i < rs.time.size(); ++i)
    if (!(rs.time[i] > rs.time[i - 1]))
      fail(path, "time must strictly increase (row " + std::to_string(i + 1) + ")");
  return rs;
}

SampledFunction to_uniform(const RatingSeries& series, int n) {
  if (n < 2) throw std::invalid_argument("to_uniform: needs n >= 2");
  const size_t rows = series.time.size();
  if (rows < 2 || series.value.size() != rows)
    throw std::invalid_argument("to_uniform: malformed series");
  const double t0 = series.time.front(), t1 = series.time.back();
  UniformGrid grid(t0, t1, n);

  if (static_cast<size_t>(n) == rows) {
    bool equispaced = true;
    const double tol = 1e-9 * (t1 - t0);
    for (int m = 0; m < n && equispaced; ++m)
      equispaced = std::abs(series.time[static_cast<size_t>(m)] - grid.at(m)) <= tol;
    if (equispaced) return SampledFunction(grid, series.value);
  }

  std::vector<double> out(static_cast<size_t>(n));
  size_t seg = 0;
  for (int m = 0; m < n; ++m) {
    const double t = grid.at(m);
    while (seg + 2 < rows && series.time[seg + 1] < t) ++seg;
    const double ta = series.time[seg], tb = series.time[seg + 1];
    const double va = series.value[seg], vb = series.value[seg + 1];
    const double u = std::clamp((t - ta) / (tb - ta), 0.0, 1.0);
    out[static_cast<size_t>(m)] = va + u * (vb - va);
  }
  out.front() = series.value.front();
  out.back() = series.value.back();
  return SampledFunction(grid, std::move(out));
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string function_csv(const SampledFunction& f,
                         const std::string& value_header) {
  std::string out = "time," + value_header + "\n";
  for (int m = 0; m < f.size(); ++m)
    out += format_g17(f.grid().at(m)) + "," + format_g17(f[m]) + "\n";
  return out;
}

std::string warping_csv(const WarpingFunction& g) {
  std::string out = "t,gamma\n";
  for (int m = 0; m < g.size(); ++m)
    out += format_g17(g.grid().at(m)) + "," + format_g17(g[m]) + "\n";
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) fail(path, "cannot create parent directory: " + ec.message());
  }
  const fs::path tmp = target.parent_path() /
                       (target.filename().string() + ".tmp." +
                        std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(tmp.string(), "cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) fail(tmp.string(), "write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(path, "rename failed: " + ec.message());
  }
}

}  // namespace eawarp
