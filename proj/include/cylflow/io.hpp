#pragma once

#include <filesystem>

#include "cylflow/cases.hpp"
#include "cylflow/certificates.hpp"

namespace cylflow {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Parsed run configuration: simulator parameters plus persistence options.
struct RunConfig {
    SimConfig sim;
    std::string output_dir = "run_out";
    std::string forcing = "none";  // none | swirl_pulse
    double forcing_amp = 0.5;
    std::string raw_text;  // original file contents (hashed into the manifest)
};

/// Flat key = value format with [section] headers and # comments. Unknown
/// sections or keys are errors.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

/// Canned forcings selectable from a config file.
Forcing make_named_forcing(const std::string& name, double amp, double R,
                           double a);

uint64_t fnv1a(const std::string& text);

/// Atomic text write (temp file + rename).
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text);

std::string series_csv_text(const std::vector<StepRecord>& records);
std::string series_ext_csv_text(const std::vector<StepRecord>& records);
std::vector<StepRecord> read_series_csv(const std::filesystem::path& main_csv,
                                        const std::filesystem::path& ext_csv);

/// Snapshot checkpoint: text header (magic, version, Nr, Nz, R, a, t, field
/// list) followed by row-major little-endian doubles for u, Gamma, psi1.
void write_snapshot(const std::filesystem::path& path, const State& s,
                    const Grid& g);
struct SnapshotFile {
    double t = 0.0;
    int nr = 0, nz = 0;
    double R = 0.0, a = 0.0;
    std::vector<double> u, gamma, psi1;
};
SnapshotFile read_snapshot(const std::filesystem::path& path);

std::string certificate_text(const CertificateReport& rep);

/// CLI entry points (exit codes: 0 success, 1 strict-entry failure,
/// 2 configuration/artifact error, 3 numerical failure).
int cmd_run(const std::string& config_path);
int cmd_check(const std::string& run_dir);
int cmd_report(const std::vector<std::string>& run_dirs);

}  // namespace cylflow
