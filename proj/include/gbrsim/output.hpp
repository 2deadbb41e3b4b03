#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbrsim/engine.hpp"
#include "gbrsim/metrics.hpp"
#include "gbrsim/optimizer.hpp"

namespace gbr {

/// Shortest round-trip decimal form; integers print without a fraction.
std::string format_number(double value);

/// `# gbrsim config=<compact json>` line heading every CSV output.
std::string csv_provenance_line(const nlohmann::json& config);

/// height,count,mean_energy_<label>...[,ideal_randomized]. The ideal column is
/// the slice-level optimum scaled to the run length.
void write_slice_profile_csv(std::ostream& out, const nlohmann::json& config, const Topology& topology,
                             const std::vector<EnergyReport>& reports, const std::vector<std::string>& labels,
                             const std::optional<SliceFlow>& ideal, std::uint64_t rounds);

/// distance_bin_start,count,mean_energy_<label>... binned by distance to the nearest station.
void write_distance_profile_csv(std::ostream& out, const nlohmann::json& config, const Topology& topology,
                                const std::vector<EnergyReport>& reports, const std::vector<std::string>& labels,
                                double bin_width = 1.0);

/// node,x,y,height,energy_<label>...
void write_energy_map_csv(std::ostream& out, const nlohmann::json& config, const Topology& topology,
                          const std::vector<EnergyReport>& reports, const std::vector<std::string>& labels);

/// Streams round,sender,decision,target,cost rows.
class TransmissionLogWriter {
 public:
  TransmissionLogWriter(std::ostream& out, const nlohmann::json& config);
  void operator()(const Transmission& t);

 private:
  std::ostream* out_;
};

void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace gbr
