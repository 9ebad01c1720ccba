#include "amop/io.hpp"

#include "amop/version.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace amop::io {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    RunConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) cfg.apply_override(key, value);
    }
    return cfg;
}

void RunConfig::apply_override(const std::string& key, const std::string& value) {
    try {
        if (key == "alpha")
            alpha = value;
        else if (key == "beta")
            beta = std::stod(value);
        else if (key == "delta")
            delta = std::stod(value);
        else if (key == "gamma")
            gamma = std::stod(value);
        else if (key == "N")
            N = std::stoi(value);
        else if (key == "phases")
            phases = std::stoi(value);
        else if (key == "bins")
            bins = std::stoi(value);
        else if (key == "convergent") {
            auto slash = value.find('/');
            if (slash == std::string::npos) throw IoError("config: convergent must be p/q");
            conv_p = std::stoll(value.substr(0, slash));
            conv_q = std::stoll(value.substr(slash + 1));
        } else if (key == "dos_N")
            dos_N = std::stoi(value);
        else if (key == "seed")
            seed = std::stoull(value);
        else if (key == "outdir")
            outdir = value;
        else if (key == "threads")
            threads = std::stoi(value);
        else
            throw IoError("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw IoError("config: bad value for '" + key + "'");
    }
}

void RunConfig::validate() const {
    if (beta <= 1.0) throw IoError("config: beta must exceed 1");
    if (delta < 1.0) throw IoError("config: delta must be >= 1");
    if (gamma <= 1.0 / beta || gamma >= beta) throw IoError("config: gamma outside (1/beta, beta)");
    if (N < 8) throw IoError("config: N too small");
    if (phases < 1 || bins < 8) throw IoError("config: sampling counts too small");
    if (conv_q < 1) throw IoError("config: convergent denominator must be positive");
    parse_alpha(alpha);
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << "alpha=" << alpha << ";beta=" << fmt(beta) << ";delta=" << fmt(delta)
       << ";gamma=" << fmt(gamma) << ";N=" << N << ";phases=" << phases << ";bins=" << bins
       << ";convergent=" << conv_p << "/" << conv_q << ";dos_N=" << dos_N << ";seed=" << seed;
    return os.str();
}

std::uint64_t RunConfig::config_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string metadata_comment(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# amop " << AMOP_VERSION << "\n";
    os << "# config_hash " << std::hex << cfg.config_hash() << std::dec << "\n";
    os << "# seed " << cfg.seed << "\n";
    os << "# " << cfg.canonical() << "\n";
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << body;
}

std::string csv_window(const RunConfig& cfg, const lattice::LatticeWindow& w) {
    std::ostringstream os;
    os << metadata_comment(cfg) << "n,re,im\n";
    for (int n = w.n_min; n <= w.n_max; ++n)
        os << n << "," << fmt(w.at(n).real()) << "," << fmt(w.at(n).imag()) << "\n";
    return os.str();
}

std::string csv_measure(const RunConfig& cfg, const spectral::SpectralMeasure& mu) {
    std::ostringstream os;
    os << metadata_comment(cfg) << "node,weight\n";
    for (size_t i = 0; i < mu.nodes.size(); ++i)
        os << fmt(mu.nodes[i]) << "," << fmt(mu.weights[i]) << "\n";
    return os.str();
}

std::string csv_cloud(const RunConfig& cfg, const std::vector<spectral::CloudPoint>& cloud) {
    std::ostringstream os;
    os << metadata_comment(cfg) << "re,im,edge_mass,phase_index\n";
    for (const auto& cp : cloud)
        os << fmt(cp.z.real()) << "," << fmt(cp.z.imag()) << "," << fmt(cp.edge_mass) << ","
           << cp.phase_index << "\n";
    return os.str();
}

std::string csv_points(const RunConfig& cfg, const std::vector<cplx>& pts,
                       const std::string& what) {
    std::ostringstream os;
    os << metadata_comment(cfg) << "# " << what << "\nre,im\n";
    for (const auto& z : pts) os << fmt(z.real()) << "," << fmt(z.imag()) << "\n";
    return os.str();
}

std::string csv_resolvent_table(const RunConfig& cfg, const diffsys::ResolventTable& t) {
    std::ostringstream os;
    os << metadata_comment(cfg) << "p,q,re,im\n";
    for (int p = -t.p_max; p <= t.p_max; ++p)
        for (int q = -t.q_max; q <= t.q_max; ++q)
            os << p << "," << q << "," << fmt(t.at(p, q).real()) << "," << fmt(t.at(p, q).imag())
               << "\n";
    return os.str();
}

std::string csv_orbit(const RunConfig& cfg, const std::vector<diffsys::TransferState>& orbit) {
    std::ostringstream os;
    os << metadata_comment(cfg) << "p,x_ppp_re,x_ppp_im,x_ppm_re,x_ppm_im,x_pp_re,x_pp_im\n";
    for (const auto& st : orbit) {
        os << st.p;
        for (int i = 0; i < 3; ++i)
            os << "," << fmt(st.v[static_cast<size_t>(i)].real()) << ","
               << fmt(st.v[static_cast<size_t>(i)].imag());
        os << "\n";
    }
    return os.str();
}

namespace {

ordered_json meta_json(const RunConfig& cfg) {
    ordered_json j;
    j["version"] = AMOP_VERSION;
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash()));
    j["config_hash"] = hex;
    j["seed"] = cfg.seed;
    return j;
}

} // namespace

std::string json_algebra_element(const RunConfig& cfg, const rotalg::AlgebraElement& a) {
    ordered_json j;
    j["meta"] = meta_json(cfg);
    j["alpha_id"] = a.alpha().id();
    ordered_json entries = ordered_json::array();
    for (const auto& [k, c] : a.coeffs())
        entries.push_back({k.p, k.q, c.real(), c.imag()});
    j["entries"] = entries;
    return j.dump(2) + "\n";
}

std::string json_series(const RunConfig& cfg, const lattice::LaurentSeries& s) {
    ordered_json j;
    j["meta"] = meta_json(cfg);
    j["half_width"] = s.J;
    ordered_json entries = ordered_json::array();
    for (int k = -s.J; k <= s.J; ++k)
        if (s.coeff(k) != cplx(0.0)) entries.push_back({k, s.coeff(k).real(), s.coeff(k).imag()});
    j["entries"] = entries;
    return j.dump(2) + "\n";
}

std::string json_level_curve(const RunConfig& cfg, const spectral::LevelCurve& c) {
    ordered_json j;
    j["meta"] = meta_json(cfg);
    j["level"] = c.level;
    ordered_json lines = ordered_json::array();
    for (const auto& line : c.polylines) {
        ordered_json pl = ordered_json::array();
        for (const auto& z : line) pl.push_back({z.real(), z.imag()});
        lines.push_back(pl);
    }
    j["polylines"] = lines;
    return j.dump(2) + "\n";
}

std::string json_mode(const RunConfig& cfg, const eigenmode::EigenMode& m, cplx Gamma,
                      double gamma_residual) {
    ordered_json j;
    j["meta"] = meta_json(cfg);
    j["phase"] = {m.x.real(), m.x.imag()};
    j["delta"] = m.delta;
    j["beta"] = m.beta;
    j["eigenvalue"] = {m.chi.real(), m.chi.imag()};
    j["residual"] = m.residual;
    j["decay_rate"] = m.decay_rate;
    j["decay_left"] = m.decay_left;
    j["decay_right"] = m.decay_right;
    j["decay_fit_rms"] = m.fit_rms;
    j["multiplier"] = {Gamma.real(), Gamma.imag()};
    j["multiplier_residual"] = gamma_residual;
    return j.dump(2) + "\n";
}

std::string svg_scatter(const std::vector<cplx>& pts, const std::vector<std::vector<cplx>>& lines,
                        double pad) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto grow = [&](const cplx& z) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    };
    for (const auto& z : pts) grow(z);
    for (const auto& line : lines)
        for (const auto& z : line) grow(z);
    if (x0 > x1) {
        x0 = y0 = -1.0;
        x1 = y1 = 1.0;
    }
    x0 -= pad;
    y0 -= pad;
    x1 += pad;
    y1 += pad;
    const double W = 800.0, H = 800.0 * (y1 - y0) / (x1 - x0);
    auto X = [&](double x) { return (x - x0) / (x1 - x0) * W; };
    auto Y = [&](double y) { return H - (y - y0) / (y1 - y0) * H; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& line : lines) {
        os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\" points=\"";
        for (const auto& z : line) os << X(z.real()) << "," << Y(z.imag()) << " ";
        os << "\"/>\n";
    }
    for (const auto& z : pts)
        os << "<circle cx=\"" << X(z.real()) << "\" cy=\"" << Y(z.imag())
           << "\" r=\"1.6\" fill=\"#d62728\"/>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace amop::io
