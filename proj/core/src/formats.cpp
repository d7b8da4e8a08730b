#include "triform/formats.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace triform {

namespace {

// Splits into trimmed lines, keeping 1-based numbering for diagnostics.
std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    std::string trimmed = line.substr(begin, end - begin + 1);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    out.emplace_back(number, std::move(trimmed));
  }
  return out;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  return fields;
}

double parse_number(const std::string& token, const std::string& file, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, line, "expected a number, got '" + token + "'");
  }
}

int parse_int(const std::string& token, const std::string& file, int line) {
  int v = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(file, line, "expected an integer, got '" + token + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_graph_file(const TriangulatedLamanGraph& graph) {
  std::ostringstream out;
  out << "# triform graph spec: N then one henneberg step per line (v j k)\n";
  out << "N " << graph.vertex_count() << "\n";
  for (const HennebergStep& s : graph.steps())
    out << s.new_vertex << " " << s.parent.first << " " << s.parent.second
        << "\n";
  return out.str();
}

TriangulatedLamanGraph parse_graph_file(const std::string& text,
                                        const std::string& filename) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(filename, 1, "empty graph spec");

  std::istringstream head(lines[0].second);
  std::string tag;
  head >> tag;
  if (tag != "N")
    throw ParseError(filename, lines[0].first, "expected 'N <count>' header");
  std::string count_token;
  head >> count_token;
  const int n = parse_int(count_token, filename, lines[0].first);
  if (n < 2) throw ParseError(filename, lines[0].first, "N must be at least 2");

  std::vector<HennebergStep> steps;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream in(lines[i].second);
    std::string va, vb, vc, extra;
    in >> va >> vb >> vc;
    if (vc.empty() || (in >> extra))
      throw ParseError(filename, lines[i].first, "expected 'v j k'");
    steps.push_back({parse_int(va, filename, lines[i].first),
                     make_edge(parse_int(vb, filename, lines[i].first),
                               parse_int(vc, filename, lines[i].first))});
  }
  if (static_cast<int>(steps.size()) != n - 2)
    throw ParseError(filename, lines[0].first,
                     "expected " + std::to_string(n - 2) + " steps, found " +
                         std::to_string(steps.size()));
  try {
    return build_graph(steps);
  } catch (const std::invalid_argument& e) {
    throw ParseError(filename, lines[0].first, e.what());
  }
}

std::string format_configuration(const Configuration& p) {
  std::ostringstream out;
  for (const Vec2& x : p.points)
    out << format_double(x.x()) << " " << format_double(x.y()) << "\n";
  return out.str();
}

Configuration parse_configuration(const std::string& text,
                                  const std::string& filename) {
  Configuration p;
  for (const auto& [number, line] : content_lines(text)) {
    std::istringstream in(line);
    std::string xa, ya, extra;
    in >> xa >> ya;
    if (ya.empty() || (in >> extra))
      throw ParseError(filename, number, "expected 'x y'");
    p.points.emplace_back(parse_number(xa, filename, number),
                          parse_number(ya, filename, number));
  }
  if (p.points.empty()) throw ParseError(filename, 1, "empty configuration");
  return p;
}

std::string format_trajectory(const Trajectory& traj) {
  std::ostringstream out;
  const int n = traj.snapshots.empty() ? 0 : traj.snapshots.front().size();
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x" << i << ",y" << i;
  out << ",phi,grad_inf\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << format_double(traj.times[k]);
    for (const Vec2& x : traj.snapshots[k].points)
      out << "," << format_double(x.x()) << "," << format_double(x.y());
    out << "," << format_double(traj.potentials[k]) << ","
        << format_double(traj.gradient_norms[k]) << "\n";
  }
  return out.str();
}

Trajectory parse_trajectory(const std::string& text, const std::string& filename) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(filename, 1, "empty trajectory");
  const auto header = split_fields(lines[0].second, ',');
  if (header.size() < 4 || header.front() != "t")
    throw ParseError(filename, lines[0].first, "bad trajectory header");
  const int n = (static_cast<int>(header.size()) - 3) / 2;

  Trajectory traj;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i].second, ',');
    if (static_cast<int>(fields.size()) != 2 * n + 3)
      throw ParseError(filename, lines[i].first, "wrong field count");
    traj.times.push_back(parse_number(fields[0], filename, lines[i].first));
    Configuration cfg;
    for (int a = 0; a < n; ++a)
      cfg.points.emplace_back(
          parse_number(fields[1 + 2 * a], filename, lines[i].first),
          parse_number(fields[2 + 2 * a], filename, lines[i].first));
    traj.snapshots.push_back(std::move(cfg));
    traj.potentials.push_back(
        parse_number(fields[2 * n + 1], filename, lines[i].first));
    traj.gradient_norms.push_back(
        parse_number(fields[2 * n + 2], filename, lines[i].first));
  }
  return traj;
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_graph_file(const std::filesystem::path& path,
                      const TriangulatedLamanGraph& graph) {
  write_text_file(path, format_graph_file(graph));
}

TriangulatedLamanGraph read_graph_file(const std::filesystem::path& path) {
  return parse_graph_file(read_text_file(path), path.string());
}

void write_configuration(const std::filesystem::path& path, const Configuration& p) {
  write_text_file(path, format_configuration(p));
}

Configuration read_configuration(const std::filesystem::path& path) {
  return parse_configuration(read_text_file(path), path.string());
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  write_text_file(path, format_trajectory(traj));
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  return parse_trajectory(read_text_file(path), path.string());
}

}  // namespace triform
