#include "marton/joint_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "marton/channel.hpp"

namespace marton {

namespace {

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

JointDistribution parse_joint(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no))
    throw ParseError(source, line_no, "missing axis header such as 'U:2 X:2'");
  std::vector<Axis> axes;
  {
    std::istringstream ss(line);
    std::string token;
    while (ss >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
        throw ParseError(source, line_no, "axis token '" + token + "' is not NAME:SIZE");
      std::size_t used = 0;
      long size = 0;
      try {
        size = std::stol(token.substr(colon + 1), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() - colon - 1 || size < 1)
        throw ParseError(source, line_no, "bad axis size in '" + token + "'");
      axes.push_back({token.substr(0, colon), static_cast<std::size_t>(size)});
    }
  }
  if (axes.empty()) throw ParseError(source, line_no, "no axes declared");
  const std::size_t row_len = axes.back().size;
  const std::size_t rows = atom_count(axes) / row_len;
  std::vector<double> probs;
  probs.reserve(rows * row_len);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!next_content_line(in, line, line_no))
      throw ParseError(source, line_no,
                       "expected " + std::to_string(rows) + " rows, found " + std::to_string(r));
    std::istringstream ss(line);
    std::string token;
    std::size_t count = 0;
    while (ss >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw ParseError(source, line_no, "not a number: '" + token + "'");
      if (!std::isfinite(v) || v < 0.0)
        throw ParseError(source, line_no, "negative or non-finite probability");
      probs.push_back(v);
      ++count;
    }
    if (count != row_len)
      throw ParseError(source, line_no,
                       "row has " + std::to_string(count) + " entries, expected " +
                           std::to_string(row_len));
  }
  if (next_content_line(in, line, line_no))
    throw ParseError(source, line_no, "unexpected trailing content");
  double total = 0.0;
  for (double p : probs) total += p;
  if (std::abs(total - 1.0) > 1e-9)
    throw ParseError(source, line_no, "probabilities sum to " + std::to_string(total));
  try {
    // Tables written by write_joint load bit-exactly; others are renormalized.
    if (std::abs(total - 1.0) <= JointDistribution::kSumTolerance)
      return JointDistribution(std::move(axes), std::move(probs));
    return JointDistribution::from_weights(std::move(axes), std::move(probs));
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, 1, e.what());
  }
}

JointDistribution load_joint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open joint file " + path.string());
  return parse_joint(in, path.string());
}

void write_joint(std::ostream& out, const JointDistribution& dist) {
  for (std::size_t i = 0; i < dist.rank(); ++i)
    out << (i ? " " : "") << dist.axes()[i].name << ':' << dist.axes()[i].size;
  out << '\n' << std::setprecision(17);
  const std::size_t row_len = dist.axes().back().size;
  const auto p = dist.probs();
  for (std::size_t i = 0; i < p.size(); ++i)
    out << p[i] << ((i + 1) % row_len == 0 ? '\n' : ' ');
}

void save_joint(const JointDistribution& dist, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write joint file " + path.string());
  write_joint(out, dist);
}

}  // namespace marton
