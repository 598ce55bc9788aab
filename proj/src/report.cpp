#include "pfde/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pfde {

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string RunManifest::render() const {
    std::ostringstream out;
    out << "command = " << command << "\n";
    out << "config = " << config_path << "\n";
    out << "config_hash = " << to_hex(config_hash) << "\n";
    out << "seed = " << seed << "\n";
    out << "output_dir = " << output_dir << "\n";
    out << "tool_version = " << tool_version << "\n";
    for (const auto& [key, value] : overrides) out << "override." << key << " = " << value << "\n";
    return out.str();
}

std::uint64_t RunManifest::hash() const { return fnv1a64(render()); }

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write manifest '" + path + "'");
    out << render();
    out << "manifest_hash = " << to_hex(hash()) << "\n";
}

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const RunManifest& manifest,
                     const std::vector<std::string>& header)
    : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) throw ConfigError("cannot write output file '" + path + "'");
    impl_->out << "# manifest=" << to_hex(manifest.hash()) << "\n";
    row(header);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) impl_->out << ',';
        impl_->out << cells[i];
    }
    impl_->out << '\n';
}

void write_trajectory_csv(const std::string& path, const RunManifest& manifest,
                          const Trajectory& tr) {
    CsvWriter csv(path, manifest, {"t", "species", "node_index", "x", "value"});
    const ProblemSpec& p = tr.problem();
    for (std::size_t s = 0; s < tr.snapshot_times().size(); ++s) {
        const double t = tr.snapshot_times()[s];
        const Segment& seg = tr.snapshots()[s];
        for (int i = 0; i < p.n; ++i)
            for (int j = 0; j < p.nodes(); ++j)
                csv.row({format_double(t), std::to_string(i), std::to_string(j),
                         format_double(p.mesh.x(j)),
                         format_double(seg.at(seg.delay_steps(), i, j))});
    }
}

void write_spectrum_csv(const std::string& path, const RunManifest& manifest,
                        const std::vector<SpectrumEstimate>& spectra) {
    CsvWriter csv(path, manifest,
                  {"block", "sample_id", "lambda", "residual", "window_min_slope",
                   "window_max_slope"});
    for (const SpectrumEstimate& est : spectra)
        for (const SampleExponent& se : est.samples)
            csv.row({std::to_string(est.block + 1), std::to_string(se.sample_id),
                     format_double(se.lambda), format_double(se.residual),
                     format_double(se.window_min_slope), format_double(se.window_max_slope)});
}

void write_matrix_csv(const std::string& path, const RunManifest& manifest,
                      const InteractionMatrix& M) {
    CsvWriter csv(path, manifest, {"i", "j", "value"});
    for (int i = 0; i < M.n; ++i)
        for (int j = 0; j < M.n; ++j)
            csv.row({std::to_string(i + 1), std::to_string(j + 1), format_double(M.at(i, j))});
}

void write_checks_csv(const std::string& path, const RunManifest& manifest,
                      const std::vector<CheckRow>& rows) {
    CsvWriter csv(path, manifest, {"check", "case_id", "pass", "worst_margin", "tolerance"});
    for (const CheckRow& r : rows)
        csv.row({r.check, std::to_string(r.case_id), r.pass ? "1" : "0",
                 format_double(r.worst_margin), format_double(r.tolerance)});
}

void write_analysis_report(const std::string& path, const RunManifest& manifest,
                           const ProblemSpec& p, const KSampler& sampler,
                           const InteractionMatrix& M, const BlockStructure& bs,
                           const std::vector<SpectrumEstimate>& spectra, const Verdict& verdict,
                           const PersistenceReport* empirical) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write report '" + path + "'");
    out << "# manifest=" << to_hex(manifest.hash()) << "\n";
    out << "sampling {\n";
    if (sampler.mode == KSampler::Mode::ZeroSection) {
        out << "  mode = zero-section\n";
        out << "  grid_per_angle = " << sampler.grid_per_angle << "\n";
        out << "  note = sup over K approximated from below by the angle grid\n";
    } else {
        out << "  mode = omega-limit\n";
        out << "  t_skip = " << format_double(sampler.t_skip) << "\n";
        out << "  sample_count = " << sampler.sample_count << "\n";
        out << "  sample_spacing = " << format_double(sampler.sample_spacing) << "\n";
        out << "  assumption = omega-limit set treated as minimal with a flow extension (not verified)\n";
    }
    out << "}\n";

    out << "matrix {\n";
    out << "  n = " << M.n << "\n";
    for (int i = 0; i < M.n; ++i) {
        out << " ";
        for (int j = 0; j < M.n; ++j) out << " " << format_double(M.at(i, j));
        out << "\n";
    }
    for (int i = 0; i < M.n; ++i)
        for (int j = 0; j < M.n; ++j) {
            if (i == j) continue;
            const auto& pr = M.prov[static_cast<std::size_t>(i) * M.n + j];
            out << "  entry[" << i + 1 << "][" << j + 1 << "] = " << format_double(M.at(i, j))
                << "  samples=" << pr.sample_count << " argmax_sample=" << pr.argmax_sample
                << " argmax_node=" << pr.argmax_node
                << (pr.at_window_boundary ? " at_window_boundary" : "") << "\n";
        }
    out << "}\n";

    out << "blocks {\n";
    out << "  k = " << bs.k() << "\n";
    out << "  permutation =";
    for (int v : bs.perm) out << " " << v + 1;
    out << "\n";
    for (int b = 0; b < bs.k(); ++b) {
        out << "  block[" << b + 1 << "] = {";
        for (std::size_t i = 0; i < bs.blocks[b].size(); ++i)
            out << (i ? " " : "") << bs.blocks[b][i] + 1;
        out << "}\n";
    }
    out << "  I = {";
    for (std::size_t i = 0; i < bs.I.size(); ++i) out << (i ? " " : "") << bs.I[i] + 1;
    out << "}\n";
    out << "  J = {";
    for (std::size_t i = 0; i < bs.J.size(); ++i) out << (i ? " " : "") << bs.J[i] + 1;
    out << "}\n";
    out << "}\n";

    out << "spectra {\n";
    for (const SpectrumEstimate& est : spectra) {
        out << "  block[" << est.block + 1 << "] = [" << format_double(est.lower) << ", "
            << format_double(est.upper) << "]  samples=" << est.samples.size() << "\n";
    }
    out << "}\n";

    out << "verdict {\n";
    out << "  tol = " << format_double(verdict.tol) << "\n";
    out << "  uniformly_persistent = " << (verdict.uniformly_persistent ? "true" : "false")
        << "\n";
    out << "  strictly_persistent_at_zero = "
        << (verdict.strictly_persistent_at_zero ? "true" : "false") << "\n";
    if (verdict.inconclusive_reason)
        out << "  inconclusive = " << *verdict.inconclusive_reason << "\n";
    out << "}\n";

    if (empirical) {
        out << "empirical {\n";
        out << "  failed_witness = " << (empirical->failed_witness ? "true" : "false") << "\n";
        for (const PersistenceWitness& w : empirical->uniform_trials) {
            out << "  uniform_trial[" << w.trial << "] phi0=" << format_double(w.phi0_value)
                << (w.blowup ? " blowup" : "") << " t0=" << format_double(w.t0)
                << " late_infimum=";
            for (std::size_t i = 0; i < w.late_infimum.size(); ++i)
                out << (i ? " " : "") << format_double(w.late_infimum[i]);
            out << "\n";
        }
        for (const PersistenceWitness& w : empirical->strict_trials) {
            out << "  strict_trial[" << w.trial << "] phi0=" << format_double(w.phi0_value)
                << (w.blowup ? " blowup" : "") << " late_infimum=";
            for (std::size_t i = 0; i < w.late_infimum.size(); ++i)
                out << (i ? " " : "") << format_double(w.late_infimum[i]);
            out << "\n";
        }
        out << "}\n";
    }
    (void)p;
}

}  // namespace pfde
