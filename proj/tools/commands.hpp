#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace triform::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::filesystem::path scenario;
  std::filesystem::path out_dir = "out";
  std::string format = "text";  // text | rows
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<double> tol;  // equilibrium tolerance override
};

int run_generate(int n, std::uint64_t seed, const std::filesystem::path& out);
int run_validate(const CommonOptions& opts);
int run_simulate(const CommonOptions& opts,
                 const std::optional<std::filesystem::path>& p0_path);
int run_equilibria(const CommonOptions& opts);
int run_partition(const CommonOptions& opts, const std::filesystem::path& config);
int run_spectrum(const CommonOptions& opts, const std::filesystem::path& config);
int run_enumerate(const CommonOptions& opts);
int run_basin(const CommonOptions& opts);
int run_verify(const CommonOptions& opts, double min_target_fraction);

}  // namespace triform::cli
