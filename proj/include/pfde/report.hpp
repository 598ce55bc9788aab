#pragma once

#include <map>
#include <string>
#include <vector>

#include "pfde/harness.hpp"
#include "pfde/structure.hpp"

namespace pfde {

// Reproducibility record for one CLI run. The manifest hash lands in the
// first line of every output file; identical manifests replay to identical
// bytes on one platform.
struct RunManifest {
    std::string command;
    std::string config_path;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string output_dir;
    std::map<std::string, std::string> overrides;
    std::string tool_version;

    std::uint64_t hash() const;
    std::string render() const;
    void write(const std::string& path) const;
};

std::string format_double(double v);

// Line-oriented CSV writer: "# manifest=<hex>" first, then the header row,
// LF endings, doubles via %.17g.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const RunManifest& manifest,
              const std::vector<std::string>& header);
    ~CsvWriter();

    void row(const std::vector<std::string>& cells);

private:
    struct Impl;
    Impl* impl_;
};

void write_trajectory_csv(const std::string& path, const RunManifest& manifest,
                          const Trajectory& tr);
void write_spectrum_csv(const std::string& path, const RunManifest& manifest,
                        const std::vector<SpectrumEstimate>& spectra);
void write_matrix_csv(const std::string& path, const RunManifest& manifest,
                      const InteractionMatrix& M);

struct CheckRow {
    std::string check;
    int case_id = 0;
    bool pass = false;
    double worst_margin = 0.0;
    double tolerance = 0.0;
};
void write_checks_csv(const std::string& path, const RunManifest& manifest,
                      const std::vector<CheckRow>& rows);

// Structured-text analysis report: matrix entries with provenance, block
// structure with I and J, per-block spectra, verdict. Sampling assumptions
// (grid coverage, omega-limit minimality) are stated in the file.
void write_analysis_report(const std::string& path, const RunManifest& manifest,
                           const ProblemSpec& p, const KSampler& sampler,
                           const InteractionMatrix& M, const BlockStructure& bs,
                           const std::vector<SpectrumEstimate>& spectra, const Verdict& verdict,
                           const PersistenceReport* empirical);

}  // namespace pfde
