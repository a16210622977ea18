#include <gyroscale/report.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gyroscale {
namespace {

namespace fs = std::filesystem;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void atomic_write(const fs::path& target, const std::string& content) {
  fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, target);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_csv(const ExperimentReport& rep, const std::string& dir) {
  std::ostringstream out;
  out << "experiment,epsilon,metric_name,value,est_error,wall_ms,config_hash\n";
  for (const MetricRow& r : rep.rows)
    out << r.experiment << "," << fmt(r.epsilon) << "," << r.metric << "," << fmt(r.value) << ","
        << fmt(r.est_error) << "," << fmt(r.wall_ms) << "," << rep.hash << "\n";
  atomic_write(fs::path(dir) / (rep.experiment + ".csv"), out.str());
}

void write_json(const ExperimentReport& rep, const std::string& dir) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["experiment"] = rep.experiment;
  j["config_hash"] = rep.hash;
  j["degenerate_exact"] = rep.degenerate_exact;
  j["slope_fitted"] = rep.slope_fitted;
  if (rep.slope_fitted) {
    j["slope"] = rep.slope;
    j["fit_residual"] = rep.fit_residual;
  }
  j["pass"] = rep.pass;
  j["total_wall_ms"] = rep.total_wall_ms;
  j["gates"] = rep.gate_lines;
  j["warnings"] = rep.warnings;
  nlohmann::json rows = nlohmann::json::array();
  for (const MetricRow& r : rep.rows)
    rows.push_back({{"epsilon", r.epsilon},
                    {"metric", r.metric},
                    {"value", r.value},
                    {"est_error", r.est_error}});
  j["rows"] = rows;
  atomic_write(fs::path(dir) / (rep.experiment + ".json"), j.dump(2) + "\n");
}

int report_command(const std::string& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("report: '" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<std::vector<std::string>> rows;
  std::set<std::string> hashes;
  for (const fs::path& file : files) {
    std::ifstream in(file);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (header) {
        header = false;
        continue;
      }
      auto cells = split_csv(line);
      if (cells.size() != 7)
        throw ConfigError("report: malformed row in '" + file.filename().string() + "'");
      hashes.insert(cells[6]);
      rows.push_back(std::move(cells));
    }
  }
  if (rows.empty()) throw ConfigError("report: no CSV rows under '" + dir + "'");
  if (hashes.size() > 1) {
    std::string list;
    for (const auto& h : hashes) list += (list.empty() ? "" : ", ") + h;
    throw ConfigError("report: directory mixes config hashes: " + list);
  }

  std::printf("config %s, %zu rows\n", hashes.begin()->c_str(), rows.size());
  std::printf("%-12s %-10s %-18s %-24s %-12s\n", "experiment", "epsilon", "metric", "value",
              "est_error");
  for (const auto& r : rows) {
    const double eps = std::strtod(r[1].c_str(), nullptr);
    const double val = std::strtod(r[3].c_str(), nullptr);
    const double est = std::strtod(r[4].c_str(), nullptr);
    std::printf("%-12s %-10.4g %-18s %-24.12g %-12.3g\n", r[0].c_str(), eps, r[2].c_str(), val,
                est);
  }
  return 0;
}

}  // namespace gyroscale
