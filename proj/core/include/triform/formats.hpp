#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "triform/dynamics.hpp"
#include "triform/geometry.hpp"
#include "triform/graph.hpp"

namespace triform {

/// Parse failure carrying "<file>:<line>: message".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, int line, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Graph spec file: a line "N <count>" followed by one step per line,
/// "v j k". Blank lines and lines starting with '#' are ignored.
std::string format_graph_file(const TriangulatedLamanGraph& graph);
TriangulatedLamanGraph parse_graph_file(const std::string& text,
                                        const std::string& filename = "<graph>");
void write_graph_file(const std::filesystem::path& path,
                      const TriangulatedLamanGraph& graph);
TriangulatedLamanGraph read_graph_file(const std::filesystem::path& path);

/// Configuration snapshot: one "x y" row per agent.
std::string format_configuration(const Configuration& p);
Configuration parse_configuration(const std::string& text,
                                  const std::string& filename = "<config>");
void write_configuration(const std::filesystem::path& path, const Configuration& p);
Configuration read_configuration(const std::filesystem::path& path);

/// Trajectory rows: header "t,x1,y1,...,xN,yN,phi,grad_inf" then one row per
/// snapshot, %.17g fields.
std::string format_trajectory(const Trajectory& traj);
Trajectory parse_trajectory(const std::string& text,
                            const std::string& filename = "<trajectory>");
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory(const std::filesystem::path& path);

std::string format_double(double v);  // shortest round-trip-safe, %.17g

/// FNV-1a 64-bit digest, hex.
std::string fnv1a_digest(const std::string& bytes);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace triform
