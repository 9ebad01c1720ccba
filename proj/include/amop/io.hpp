#pragma once

#include "amop/diffsys.hpp"
#include "amop/eigenmode.hpp"
#include "amop/rotation_algebra.hpp"
#include "amop/spectral.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace amop::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value run configuration; flags override file entries.
struct RunConfig {
    std::string alpha = "golden";
    double beta = 2.0;
    double delta = 1.5;
    double gamma = 1.0;
    int N = 170;
    int phases = 16;
    int bins = 600;
    long long conv_p = 144, conv_q = 233;
    int dos_N = 932;
    std::uint64_t seed = 20240801;
    std::string outdir = "out";
    int threads = 0; // 0: library default

    static RunConfig from_file(const std::string& path);
    void apply_override(const std::string& key, const std::string& value);
    void validate() const;
    std::string canonical() const;      // stable key order, for hashing
    std::uint64_t config_hash() const;  // FNV-1a of canonical()
    PhaseReducer alpha_reducer() const { return parse_alpha(alpha); }
};

// artifact metadata lines embedded at the top of every output
std::string metadata_comment(const RunConfig& cfg);

void write_text(const std::filesystem::path& path, const std::string& body);

// CSV emitters (UTF-8, metadata comments, then a header row)
std::string csv_window(const RunConfig& cfg, const lattice::LatticeWindow& w);
std::string csv_measure(const RunConfig& cfg, const spectral::SpectralMeasure& mu);
std::string csv_cloud(const RunConfig& cfg, const std::vector<spectral::CloudPoint>& cloud);
std::string csv_points(const RunConfig& cfg, const std::vector<cplx>& pts,
                       const std::string& what);
std::string csv_resolvent_table(const RunConfig& cfg, const diffsys::ResolventTable& t);
std::string csv_orbit(const RunConfig& cfg, const std::vector<diffsys::TransferState>& orbit);

// JSON emitters (stable key order)
std::string json_algebra_element(const RunConfig& cfg, const rotalg::AlgebraElement& a);
std::string json_series(const RunConfig& cfg, const lattice::LaurentSeries& s);
std::string json_level_curve(const RunConfig& cfg, const spectral::LevelCurve& c);
std::string json_mode(const RunConfig& cfg, const eigenmode::EigenMode& m, cplx Gamma,
                      double gamma_residual);

// static SVG figures
std::string svg_scatter(const std::vector<cplx>& pts, const std::vector<std::vector<cplx>>& lines,
                        double pad = 0.5);

} // namespace amop::io
