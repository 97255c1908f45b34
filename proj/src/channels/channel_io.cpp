#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "marton/channel.hpp"

namespace marton {

namespace {

// Next line that is neither blank nor a '#' comment; false at end of input.
bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

std::vector<double> parse_numbers(const std::string& line, const std::string& source,
                                  std::size_t line_no) {
  std::istringstream ss(line);
  std::vector<double> values;
  std::string token;
  while (ss >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ParseError(source, line_no, "not a number: '" + token + "'");
    values.push_back(v);
  }
  return values;
}

}  // namespace

BroadcastChannel parse_channel(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no))
    throw ParseError(source, line_no, "missing header line '|X| |Y| |Z|'");
  const auto header = parse_numbers(line, source, line_no);
  if (header.size() != 3) throw ParseError(source, line_no, "header must hold three sizes");
  std::size_t sizes[3];
  for (int i = 0; i < 3; ++i) {
    if (header[i] < 1 || header[i] != std::floor(header[i]))
      throw ParseError(source, line_no, "sizes must be positive integers");
    sizes[i] = static_cast<std::size_t>(header[i]);
  }
  const std::size_t row_len = sizes[1] * sizes[2];
  std::vector<double> kernel;
  kernel.reserve(sizes[0] * row_len);
  for (std::size_t x = 0; x < sizes[0]; ++x) {
    if (!next_content_line(in, line, line_no))
      throw ParseError(source, line_no,
                       "expected " + std::to_string(sizes[0]) + " rows, found " +
                           std::to_string(x));
    const auto row = parse_numbers(line, source, line_no);
    if (row.size() != row_len)
      throw ParseError(source, line_no,
                       "row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(row_len));
    double sum = 0.0;
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0)
        throw ParseError(source, line_no, "negative or non-finite probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw ParseError(source, line_no, "row sums to " + std::to_string(sum) + ", not 1");
    kernel.insert(kernel.end(), row.begin(), row.end());
  }
  if (next_content_line(in, line, line_no))
    throw ParseError(source, line_no, "unexpected trailing content");
  return BroadcastChannel(sizes[0], sizes[1], sizes[2], std::move(kernel));
}

BroadcastChannel load_channel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open channel file " + path.string());
  return parse_channel(in, path.string());
}

void write_channel(std::ostream& out, const BroadcastChannel& channel) {
  out << channel.nx() << ' ' << channel.ny() << ' ' << channel.nz() << '\n';
  out << std::setprecision(17);
  for (std::size_t x = 0; x < channel.nx(); ++x) {
    for (std::size_t y = 0; y < channel.ny(); ++y)
      for (std::size_t z = 0; z < channel.nz(); ++z) {
        if (y || z) out << ' ';
        out << channel.q(x, y, z);
      }
    out << '\n';
  }
}

void save_channel(const BroadcastChannel& channel, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write channel file " + path.string());
  write_channel(out, channel);
}

}  // namespace marton
