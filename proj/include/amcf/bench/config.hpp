#ifndef AMCF_BENCH_CONFIG_HPP
#define AMCF_BENCH_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "../tracker.hpp"

// Flat "key = value" tracker configuration. '#' starts a comment. Keys:
// lambda1 lambda2 lambda3 gamma eta nu mu phi varphi tau K cell search_scale
// context_scale sigma_factor scale_count scale_step max_patch strict

namespace amcf::bench {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v, int line) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty())
        fail(ErrorKind::InvalidInput, "config line " + std::to_string(line) + ": '" + key + "' expects a number");
    return out;
}

inline int to_int(const std::string& key, const std::string& v, int line) {
    const double d = to_double(key, v, line);
    if (d != std::floor(d))
        fail(ErrorKind::InvalidInput, "config line " + std::to_string(line) + ": '" + key + "' expects an integer");
    return static_cast<int>(d);
}

} // namespace detail

/// Applies key/value settings on top of `base`, then validates.
inline TrackerConfig parse_config(std::istream& in, TrackerConfig base = {}) {
    TrackerConfig c = base;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::InvalidInput, "config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const auto num = [&] { return detail::to_double(key, value, line_no); };
        const auto integer = [&] { return detail::to_int(key, value, line_no); };

        if (key == "lambda1") c.lambda1 = num();
        else if (key == "lambda2") c.lambda2 = num();
        else if (key == "lambda3") c.lambda3 = num();
        else if (key == "gamma") c.gamma = num();
        else if (key == "eta") c.eta = num();
        else if (key == "nu") c.nu = num();
        else if (key == "mu") c.mu = num();
        else if (key == "phi") c.phi = num();
        else if (key == "varphi") c.varphi = num();
        else if (key == "tau") c.tau = num();
        else if (key == "K") c.K = integer();
        else if (key == "cell") c.cell = integer();
        else if (key == "search_scale") c.search_scale = num();
        else if (key == "context_scale") c.context_scale = num();
        else if (key == "sigma_factor") c.sigma_factor = num();
        else if (key == "scale_count") c.scale_count = integer();
        else if (key == "scale_step") c.scale_step = num();
        else if (key == "max_patch") c.max_patch = integer();
        else if (key == "strict") c.strict = integer() != 0;
        else fail(ErrorKind::InvalidInput, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    validate(c);
    return c;
}

inline TrackerConfig load_config(const std::filesystem::path& file, TrackerConfig base = {}) {
    std::ifstream in(file);
    if (!in)
        fail(ErrorKind::InvalidInput, "cannot open config " + file.string());
    return parse_config(in, base);
}

inline std::string format_config(const TrackerConfig& c) {
    std::ostringstream o;
    o.precision(17);
    o << "lambda1 = " << c.lambda1 << "\nlambda2 = " << c.lambda2 << "\nlambda3 = " << c.lambda3
      << "\ngamma = " << c.gamma << "\neta = " << c.eta << "\nnu = " << c.nu << "\nmu = " << c.mu
      << "\nphi = " << c.phi << "\nvarphi = " << c.varphi << "\ntau = " << c.tau << "\nK = " << c.K
      << "\ncell = " << c.cell << "\nsearch_scale = " << c.search_scale << "\ncontext_scale = " << c.context_scale
      << "\nsigma_factor = " << c.sigma_factor << "\nscale_count = " << c.scale_count
      << "\nscale_step = " << c.scale_step << "\nmax_patch = " << c.max_patch << "\nstrict = " << (c.strict ? 1 : 0)
      << '\n';
    return o.str();
}

} // namespace amcf::bench

#endif
