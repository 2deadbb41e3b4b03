#include "gbrsim/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gbrsim/errors.hpp"

namespace gbr {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string csv_provenance_line(const nlohmann::json& config) { return "# gbrsim config=" + config.dump(); }

void write_slice_profile_csv(std::ostream& out, const nlohmann::json& config, const Topology& topology,
                             const std::vector<EnergyReport>& reports, const std::vector<std::string>& labels,
                             const std::optional<SliceFlow>& ideal, std::uint64_t rounds) {
  std::vector<SliceEnergyProfile> profiles;
  for (const auto& r : reports) profiles.push_back(slice_energy_profile(r, topology.heights()));

  out << csv_provenance_line(config) << '\n' << "height,count";
  for (const auto& l : labels) out << ",mean_energy_" << l;
  if (ideal) out << ",ideal_randomized";
  out << '\n';

  for (int h = 1; h <= topology.max_height(); ++h) {
    const auto slot = static_cast<std::size_t>(h - 1);
    const std::size_t count = profiles.empty() ? 0 : profiles.front().counts[slot];
    out << h << ',' << count;
    for (const auto& p : profiles) out << ',' << format_number(p.mean_energy[slot]);
    if (ideal) out << ',' << format_number(ideal->slice_energy[slot] * static_cast<double>(rounds));
    out << '\n';
  }
}

void write_distance_profile_csv(std::ostream& out, const nlohmann::json& config, const Topology& topology,
                                const std::vector<EnergyReport>& reports, const std::vector<std::string>& labels,
                                double bin_width) {
  std::vector<DistanceEnergyProfile> profiles;
  for (const auto& r : reports) profiles.push_back(distance_energy_profile(r, topology, bin_width));

  out << csv_provenance_line(config) << '\n' << "distance_bin_start,count";
  for (const auto& l : labels) out << ",mean_energy_" << l;
  out << '\n';
  const std::size_t bins = profiles.empty() ? 0 : profiles.front().counts.size();
  for (std::size_t b = 0; b < bins; ++b) {
    out << format_number(static_cast<double>(b) * bin_width) << ',' << profiles.front().counts[b];
    for (const auto& p : profiles) out << ',' << format_number(p.mean_energy[b]);
    out << '\n';
  }
}

void write_energy_map_csv(std::ostream& out, const nlohmann::json& config, const Topology& topology,
                          const std::vector<EnergyReport>& reports, const std::vector<std::string>& labels) {
  std::vector<std::vector<EnergyMapRow>> maps;
  for (const auto& r : reports) maps.push_back(energy_map(r, topology.deployment()));

  out << csv_provenance_line(config) << '\n' << "node,x,y,height";
  for (const auto& l : labels) out << ",energy_" << l;
  out << '\n';
  const auto& sensors = topology.deployment().sensors;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    out << i << ',' << format_number(sensors[i].x) << ',' << format_number(sensors[i].y) << ','
        << topology.height(static_cast<NodeId>(i));
    for (const auto& m : maps) out << ',' << format_number(m[i].energy);
    out << '\n';
  }
}

TransmissionLogWriter::TransmissionLogWriter(std::ostream& out, const nlohmann::json& config) : out_(&out) {
  *out_ << csv_provenance_line(config) << '\n' << "round,sender,decision,target,cost\n";
}

void TransmissionLogWriter::operator()(const Transmission& t) {
  *out_ << t.round << ',' << t.sender << ',' << to_string(t.decision.kind) << ',';
  if (t.decision.kind == RoutingDecision::Kind::Forward) {
    *out_ << t.decision.target;
  } else if (t.station >= 0) {
    *out_ << "bs" << t.station;
  } else {
    *out_ << "bs";
  }
  *out_ << ',' << format_number(t.cost) << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

}  // namespace gbr
