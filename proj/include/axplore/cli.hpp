#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "axplore/snn.hpp"

namespace axplore::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verification failure or no convergence
inline constexpr int kExitConfig = 2;   // configuration or IO error

inline constexpr const char* kDataDirEnv = "AXPLORE_DATA_DIR";

struct EncoderSettings {
  std::size_t timesteps = 350;
  std::optional<double> rate_scale;  // wins over target_total when set
  double target_total = 3500.0;
  std::uint64_t seed = 1;
};

struct ExploreSettings {
  std::size_t max_rounds = 0;
  std::size_t image_count = 10;
  std::optional<double> tau;  // upper bound of the acceptable error range
  int thresh_cut = 0;
  int reset_cut = 0;
};

struct RunConfig {
  std::filesystem::path model;
  std::filesystem::path data_dir;
  std::string images_file = "t10k-images-idx3-ubyte";
  std::string labels_file = "t10k-labels-idx1-ubyte";
  EncoderSettings encoder;
  ExploreSettings exploration;
  std::size_t verify_samples = 100;
  std::filesystem::path output_dir = "out";
  std::filesystem::path trains_dir;  // empty: <output_dir>/trains

  std::filesystem::path trains_path() const { return trains_dir.empty() ? output_dir / "trains" : trains_dir; }
  snn::IaOptions ia_options() const;
  // Throws ConfigError.
  void validate() const;
};

// Parses the JSON config document. Relative paths resolve against `base`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base = {});
RunConfig load_config(const std::filesystem::path& path);
// Applies AXPLORE_DATA_DIR when set.
void apply_env(RunConfig& config);

// Spike caches under trains_path(), named image_NNNNN.spkt, in index order.
std::vector<snn::SpikeTrain> load_trains(const RunConfig& config);
std::filesystem::path train_file(const std::filesystem::path& dir, std::size_t index);

enum class SimMode { Exact, Ia };

int cmd_encode(const RunConfig& config, std::ostream& log);
// In Ia mode the cut matrix comes from `k_path`, or all zero when empty.
int cmd_simulate(const RunConfig& config, SimMode mode, const std::filesystem::path& k_path, std::ostream& log);
int cmd_explore(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, const std::filesystem::path& k_path, std::ostream& log);
// Report CSV -> round,percent_involved
int cmd_report(const std::filesystem::path& report_csv, const std::filesystem::path& out_csv, std::ostream& log);

// Full command-line entry point; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace axplore::cli
