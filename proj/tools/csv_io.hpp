#ifndef MRJD_TOOLS_CSV_IO_HPP
#define MRJD_TOOLS_CSV_IO_HPP

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mrjd/types.hpp"

namespace mrjd_cli {

struct PriceSeries {
  std::vector<std::string> timestamps;
  std::vector<double> prices;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

// Timestamps are compared numerically when both sides parse as numbers,
// lexicographically otherwise (ISO-8601 dates sort correctly as text).
inline bool timestamp_less(const std::string& a, const std::string& b) {
  try {
    std::size_t pa = 0, pb = 0;
    const double xa = std::stod(a, &pa);
    const double xb = std::stod(b, &pb);
    if (pa == a.size() && pb == b.size()) return xa < xb;
  } catch (const std::exception&) {
  }
  return a < b;
}

inline PriceSeries ingest_csv(const std::string& path,
                              const std::string& date_col,
                              const std::string& price_col,
                              bool allow_unsorted) {
  std::ifstream in(path);
  if (!in) throw mrjd::invalid_input("cannot open input file: " + path);

  std::string line;
  if (!std::getline(in, line))
    throw mrjd::invalid_input("empty CSV file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);

  auto find_col = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw mrjd::invalid_input("missing column '" + name + "' in " + path);
    return std::size_t(it - header.begin());
  };
  const std::size_t di = find_col(date_col);
  const std::size_t pi = find_col(price_col);

  PriceSeries out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() <= std::max(di, pi))
      throw mrjd::invalid_input("unparseable row " + std::to_string(row) +
                                " in " + path);
    double price = 0.0;
    try {
      price = std::stod(fields[pi]);
    } catch (const std::exception&) {
      throw mrjd::invalid_input("unparseable price at row " +
                                std::to_string(row) + " in " + path);
    }
    if (!(price > 0.0))
      throw mrjd::invalid_input("non-positive price at row " +
                                std::to_string(row) + " in " + path);
    out.timestamps.push_back(fields[di]);
    out.prices.push_back(price);
  }
  if (out.prices.empty())
    throw mrjd::invalid_input("no data rows in " + path);

  bool sorted = true;
  for (std::size_t i = 1; i < out.timestamps.size(); ++i)
    if (timestamp_less(out.timestamps[i], out.timestamps[i - 1])) {
      sorted = false;
      break;
    }
  if (!sorted) {
    if (!allow_unsorted)
      throw mrjd::invalid_input(
          "timestamps are not monotone; pass --allow-unsorted to sort");
    std::vector<std::size_t> order(out.prices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return timestamp_less(out.timestamps[a], out.timestamps[b]);
    });
    PriceSeries sorted_out;
    for (std::size_t i : order) {
      sorted_out.timestamps.push_back(out.timestamps[i]);
      sorted_out.prices.push_back(out.prices[i]);
    }
    out = std::move(sorted_out);
  }
  return out;
}

}  // namespace mrjd_cli

#endif  // MRJD_TOOLS_CSV_IO_HPP
