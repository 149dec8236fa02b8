#pragma once

#include <cctype>
#include <climits>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mbo/acqui/acquisition.hpp"
#include "mbo/core/box.hpp"
#include "mbo/gp/hp_optimize.hpp"
#include "mbo/gp/kernel.hpp"
#include "mbo/gp/mean.hpp"
#include "mbo/opt/inner.hpp"

namespace mbo {

/// Scalar knobs of the optimization loop. noise is a variance, added to the
/// kernel diagonal (not a standard deviation).
struct ParamsConfig {
    double noise = 0.001;
    int init_samples = 10;
    int max_evaluations = 200;
    bool hp_opt_enabled = true;
    int hp_opt_period = 1;  // refit hyperparameters every k observations

    void validate() const {
        if (noise < 0.0) throw std::invalid_argument("ParamsConfig: noise must be >= 0");
        if (init_samples < 1) throw std::invalid_argument("ParamsConfig: init_samples must be >= 1");
        if (max_evaluations < init_samples)
            throw std::invalid_argument("ParamsConfig: max_evaluations must be >= init_samples");
        if (hp_opt_period < 1) throw std::invalid_argument("ParamsConfig: hp_opt_period must be >= 1");
    }
};

/// Everything the loop needs besides the objective. The inner optimizer is
/// optional because its default depends on the input dimension.
struct BoConfig {
    ParamsConfig params;
    KernelConfig kernel = KernelConfig::squared_exponential_iso();
    MeanConfig mean = MeanConfig::data_mean();
    AcquiConfig acqui = AcquiConfig::gp_ucb(0.1);
    std::optional<InnerOptimizerSpec> inner;  // nullopt: default_inner_optimizer(dim)
    HpOptOptions hp_opt;
    InitStrategy init_strategy = InitStrategy::uniform_random;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] inline void config_error(int line_no, const std::string& what) {
    std::ostringstream os;
    os << "config line " << line_no << ": " << what;
    throw std::invalid_argument(os.str());
}

inline double parse_real(const std::string& v, int line_no) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) config_error(line_no, "trailing characters in number '" + v + "'");
        return x;
    } catch (const std::invalid_argument&) {
        config_error(line_no, "expected a number, got '" + v + "'");
    } catch (const std::out_of_range&) {
        config_error(line_no, "number out of range: '" + v + "'");
    }
}

inline int parse_int(const std::string& v, int line_no) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) config_error(line_no, "trailing characters in integer '" + v + "'");
        if (x < INT_MIN || x > INT_MAX) config_error(line_no, "integer out of range: '" + v + "'");
        return static_cast<int>(x);
    } catch (const std::invalid_argument&) {
        config_error(line_no, "expected an integer, got '" + v + "'");
    } catch (const std::out_of_range&) {
        config_error(line_no, "integer out of range: '" + v + "'");
    }
}

inline bool parse_bool(const std::string& v, int line_no) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    config_error(line_no, "expected a boolean (true/false/1/0/on/off), got '" + v + "'");
}

inline void apply_config_entry(BoConfig& cfg, const std::string& section, const std::string& key,
                               const std::string& value, int line_no) {
    if (section == "bo") {
        if (key == "noise") {
            cfg.params.noise = parse_real(value, line_no);
        } else if (key == "init_samples") {
            cfg.params.init_samples = parse_int(value, line_no);
        } else if (key == "max_evaluations") {
            cfg.params.max_evaluations = parse_int(value, line_no);
        } else if (key == "hp_opt_enabled") {
            cfg.params.hp_opt_enabled = parse_bool(value, line_no);
        } else if (key == "hp_opt_period") {
            cfg.params.hp_opt_period = parse_int(value, line_no);
        } else if (key == "init_strategy") {
            if (value == "uniform")
                cfg.init_strategy = InitStrategy::uniform_random;
            else if (value == "latin")
                cfg.init_strategy = InitStrategy::latin_hypercube;
            else
                config_error(line_no, "bo.init_strategy must be 'uniform' or 'latin'");
        } else {
            config_error(line_no, "unknown key 'bo." + key + "'");
        }
    } else if (section == "kernel") {
        if (key == "kind") {
            if (value == "se" || value == "squared_exponential")
                cfg.kernel.kind = KernelKind::squared_exponential;
            else if (value == "matern52")
                cfg.kernel.kind = KernelKind::matern52;
            else
                config_error(line_no, "kernel.kind must be 'se' or 'matern52'");
        } else if (key == "lengthscale") {
            const double l = parse_real(value, line_no);
            if (l <= 0.0) config_error(line_no, "kernel.lengthscale must be > 0");
            cfg.kernel.log_lengthscale = Eigen::VectorXd::Constant(1, std::log(l));
        } else if (key == "signal_variance") {
            const double s = parse_real(value, line_no);
            if (s <= 0.0) config_error(line_no, "kernel.signal_variance must be > 0");
            cfg.kernel.log_signal_variance = std::log(s);
        } else {
            config_error(line_no, "unknown key 'kernel." + key + "'");
        }
    } else if (section == "mean") {
        if (key == "kind") {
            if (value == "zero")
                cfg.mean = MeanConfig::zero();
            else if (value == "constant")
                cfg.mean.kind = MeanKind::constant;
            else if (value == "data")
                cfg.mean = MeanConfig::data_mean();
            else
                config_error(line_no, "mean.kind must be 'zero', 'constant' or 'data'");
        } else if (key == "value") {
            cfg.mean.value = parse_real(value, line_no);
        } else {
            config_error(line_no, "unknown key 'mean." + key + "'");
        }
    } else if (section == "acqui") {
        if (key == "kind") {
            if (value == "ucb")
                cfg.acqui.kind = AcquiKind::ucb;
            else if (value == "gp_ucb")
                cfg.acqui.kind = AcquiKind::gp_ucb;
            else if (value == "ei")
                cfg.acqui.kind = AcquiKind::ei;
            else
                config_error(line_no, "acqui.kind must be 'ucb', 'gp_ucb' or 'ei'");
        } else if (key == "kappa") {
            const double k = parse_real(value, line_no);
            if (k < 0.0) config_error(line_no, "acqui.kappa must be >= 0");
            cfg.acqui.kappa = k;
        } else if (key == "delta") {
            const double d = parse_real(value, line_no);
            if (!(d > 0.0 && d < 1.0)) config_error(line_no, "acqui.delta must be in (0,1)");
            cfg.acqui.delta = d;
        } else if (key == "xi") {
            const double x = parse_real(value, line_no);
            if (x < 0.0) config_error(line_no, "acqui.xi must be >= 0");
            cfg.acqui.xi = x;
        } else {
            config_error(line_no, "unknown key 'acqui." + key + "'");
        }
    } else if (section == "hp") {
        if (key == "restarts") {
            const int r = parse_int(value, line_no);
            if (r < 1) config_error(line_no, "hp.restarts must be >= 1");
            cfg.hp_opt.restarts = r;
        } else if (key == "max_iters") {
            const int m = parse_int(value, line_no);
            if (m < 1) config_error(line_no, "hp.max_iters must be >= 1");
            cfg.hp_opt.max_iters = m;
        } else {
            config_error(line_no, "unknown key 'hp." + key + "'");
        }
    } else {
        config_error(line_no, "unknown section '" + section + "'");
    }
}

}  // namespace detail

/// Parse `section.key = value` lines into cfg, overriding its current values.
/// Blank lines are skipped; '#' starts a comment. Throws std::invalid_argument
/// with a line number on any malformed or unknown entry.
inline void load_config_stream(BoConfig& cfg, std::istream& in) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) detail::config_error(line_no, "expected 'section.key = value'");
        const std::string lhs = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::size_t dot = lhs.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size() ||
            lhs.find('.', dot + 1) != std::string::npos)
            detail::config_error(line_no, "key must be 'section.key', got '" + lhs + "'");
        if (value.empty()) detail::config_error(line_no, "missing value for '" + lhs + "'");
        detail::apply_config_entry(cfg, lhs.substr(0, dot), lhs.substr(dot + 1), value, line_no);
    }
}

inline void load_config_file(BoConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    load_config_stream(cfg, in);
}

}  // namespace mbo
