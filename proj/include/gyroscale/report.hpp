// Deterministic CSV / JSON writers for experiment reports and the directory
// summarizer behind the report subcommand.
#ifndef GYROSCALE_REPORT
#define GYROSCALE_REPORT

#include <string>

#include <gyroscale/experiments.hpp>

namespace gyroscale {

// Writes <dir>/<experiment>.csv with the fixed schema
// experiment,epsilon,metric_name,value,est_error,wall_ms,config_hash
// atomically (temp file + rename). Creates dir if needed.
void write_csv(const ExperimentReport& rep, const std::string& dir);

// Writes <dir>/<experiment>.json: rows (without per-row wall time), gates,
// warnings, slope data, and the pass verdict.
void write_json(const ExperimentReport& rep, const std::string& dir);

// Prints a table of every CSV row under dir. Throws ConfigError when the
// rows carry more than one config hash or the directory has no rows.
int report_command(const std::string& dir);

}  // namespace gyroscale

#endif
