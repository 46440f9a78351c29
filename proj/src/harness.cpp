// SPDX-License-Identifier: Apache-2.0

#include "lite/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "lite/dynamics.hpp"
#include "lite/errors.hpp"
#include "lite/rng.hpp"

namespace lite::harness {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (true) {
        const auto comma = value.find(',', start);
        items.push_back(trim(std::string_view(value).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

/// Key/value table that remembers which keys were consumed.
class Entries {
public:
    explicit Entries(std::string_view text) {
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto nl = text.find('\n', pos);
            const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            ++line_no;
            add_line(raw, line_no);
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
    }

    bool has(const std::string& key) const { return map_.count(key) != 0; }

    const Entry* take(const std::string& key) {
        const auto it = map_.find(key);
        if (it == map_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    const Entry& require(const std::string& key) {
        const Entry* e = take(key);
        if (!e) throw ConfigError("missing required key " + key);
        return *e;
    }

    int line_of(const std::string& key) const {
        const auto it = map_.find(key);
        return it == map_.end() ? 0 : it->second.line;
    }

    std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
        std::vector<std::string> out;
        for (const auto& [k, e] : map_) {
            if (k.rfind(prefix, 0) == 0) out.push_back(k);
        }
        return out;
    }

    void reject_unused() const {
        const Entry* first = nullptr;
        std::string first_key;
        for (const auto& [k, e] : map_) {
            if (!e.used && (!first || e.line < first->line)) {
                first = &e;
                first_key = k;
            }
        }
        if (first) throw ConfigError("unknown key " + first_key, first->line);
    }

private:
    void add_line(std::string_view raw, int line_no) {
        const auto hash = raw.find('#');
        const std::string line = trim(raw.substr(0, hash));
        if (line.empty()) return;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'section.key = value'", line_no);
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto dot = key.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() ||
            key.find_first_of(" \t") != std::string::npos) {
            throw ConfigError("malformed key '" + key + "'", line_no);
        }
        if (value.empty()) throw ConfigError("missing value for " + key, line_no);
        if (map_.count(key)) {
            throw ConfigError("duplicate key " + key + " (first set on line " + std::to_string(map_[key].line) + ")",
                              line_no);
        }
        map_[key] = Entry{value, line_no, false};
    }

    std::map<std::string, Entry> map_;
};

double to_double(const std::string& key, const Entry& e) {
    double x = 0.0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, x);
    if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
        throw ConfigError("malformed number '" + e.value + "' for " + key, e.line);
    }
    return x;
}

std::uint64_t to_u64(const std::string& key, const Entry& e) {
    std::uint64_t x = 0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, x);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("malformed non-negative integer '" + e.value + "' for " + key, e.line);
    }
    return x;
}

bool to_bool(const std::string& key, const Entry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ConfigError("malformed boolean '" + e.value + "' for " + key + " (expected true or false)", e.line);
}

std::vector<double> to_doubles(const std::string& key, const Entry& e) {
    std::vector<double> out;
    for (const auto& item : split_list(e.value)) out.push_back(to_double(key, Entry{item, e.line}));
    return out;
}

std::vector<std::size_t> to_sizes(const std::string& key, const Entry& e) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(e.value)) out.push_back(to_u64(key, Entry{item, e.line}));
    return out;
}

void read(Entries& en, const std::string& key, double& target) {
    if (const Entry* e = en.take(key)) target = to_double(key, *e);
}

void read(Entries& en, const std::string& key, std::size_t& target) {
    if (const Entry* e = en.take(key)) target = to_u64(key, *e);
}

void read(Entries& en, const std::string& key, std::optional<double>& target) {
    if (const Entry* e = en.take(key)) target = to_double(key, *e);
}

/// Runs `fn`, attaching `line` to any ConfigError that lacks one.
template <typename Fn>
void at_line(int line, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        if (e.line() != 0 || line == 0) throw;
        throw ConfigError(e.what(), line);
    }
}

const std::map<LandscapeKind, std::set<std::string>>& landscape_keys() {
    static const std::map<LandscapeKind, std::set<std::string>> keys{
        {LandscapeKind::quadratic, {"eigenvalues", "offsets", "init"}},
        {LandscapeKind::river_valley,
         {"sharp_dim", "flat_dim", "sharp_curvature", "valley_amplitude", "flat_curvature", "init_scale"}},
        {LandscapeKind::kronecker,
         {"rows", "cols", "sharp", "sharp_scale", "flat_scale", "noise", "init_offset", "stochastic"}},
        {LandscapeKind::mlp, {"widths", "batch", "noise", "stochastic"}},
    };
    return keys;
}

void parse_landscape(Entries& en, LandscapeConfig& lc) {
    const Entry& kind = en.require("landscape.kind");
    at_line(kind.line, [&] { lc.kind = parse_landscape_kind(kind.value); });

    const auto& allowed = landscape_keys().at(lc.kind);
    for (const auto& key : en.keys_with_prefix("landscape.")) {
        const std::string name = key.substr(std::string("landscape.").size());
        if (name == "kind") continue;
        bool known = false;
        for (const auto& [k, set] : landscape_keys()) known = known || set.count(name) != 0;
        if (known && !allowed.count(name)) {
            throw ConfigError(key + " is not valid for landscape kind " + to_string(lc.kind), en.line_of(key));
        }
    }

    switch (lc.kind) {
        case LandscapeKind::quadratic: {
            const Entry& eig = en.require("landscape.eigenvalues");
            lc.quadratic.eigenvalues = to_doubles("landscape.eigenvalues", eig);
            if (const Entry* off = en.take("landscape.offsets")) {
                lc.quadratic.offsets = to_doubles("landscape.offsets", *off);
            } else {
                lc.quadratic.offsets.assign(lc.quadratic.eigenvalues.size(), 0.0);
            }
            if (const Entry* init = en.take("landscape.init")) {
                lc.quadratic_init = to_doubles("landscape.init", *init);
                if (lc.quadratic_init.size() != lc.quadratic.eigenvalues.size()) {
                    throw ConfigError("landscape.init length differs from landscape.eigenvalues", init->line);
                }
            }
            at_line(eig.line, [&] {
                try {
                    lc.quadratic.validate();
                } catch (const std::logic_error& e) {
                    throw ConfigError(e.what());
                }
            });
            break;
        }
        case LandscapeKind::river_valley:
            read(en, "landscape.sharp_dim", lc.river.sharp_dim);
            read(en, "landscape.flat_dim", lc.river.flat_dim);
            read(en, "landscape.sharp_curvature", lc.river.sharp_curvature);
            read(en, "landscape.valley_amplitude", lc.river.valley_amplitude);
            read(en, "landscape.flat_curvature", lc.river.flat_curvature);
            read(en, "landscape.init_scale", lc.river.init_scale);
            break;
        case LandscapeKind::kronecker:
            read(en, "landscape.rows", lc.kronecker.rows);
            read(en, "landscape.cols", lc.kronecker.cols);
            read(en, "landscape.sharp", lc.kronecker.sharp);
            read(en, "landscape.sharp_scale", lc.kronecker.sharp_scale);
            read(en, "landscape.flat_scale", lc.kronecker.flat_scale);
            read(en, "landscape.noise", lc.kronecker.noise);
            read(en, "landscape.init_offset", lc.kronecker.init_offset);
            break;
        case LandscapeKind::mlp:
            if (const Entry* w = en.take("landscape.widths")) lc.mlp.widths = to_sizes("landscape.widths", *w);
            read(en, "landscape.batch", lc.mlp.batch);
            read(en, "landscape.noise", lc.mlp.noise);
            break;
    }
    if (const Entry* s = en.take("landscape.stochastic")) lc.stochastic = to_bool("landscape.stochastic", *s);
}

void parse_optimizer(Entries& en, optim::OptimizerConfig& oc) {
    const Entry& fam = en.require("optimizer.family");
    at_line(fam.line, [&] { oc.family = optim::parse_family(fam.value); });

    read(en, "optimizer.theta", oc.theta);
    read(en, "optimizer.beta_v", oc.beta_v);
    read(en, "optimizer.theta_shampoo", oc.theta_shampoo);
    read(en, "optimizer.epsilon", oc.epsilon);
    read(en, "optimizer.weight_decay", oc.weight_decay);
    read(en, "optimizer.clip_norm", oc.clip_norm);
    read(en, "optimizer.nesterov_beta", oc.nesterov_beta);
    read(en, "optimizer.mars_gamma", oc.mars_gamma);
    read(en, "optimizer.ademamix_kappa", oc.ademamix_kappa);
    read(en, "optimizer.alpha_fast", oc.alpha_fast);
    read(en, "optimizer.alpha_slow", oc.alpha_slow);
    read(en, "optimizer.qr_refresh_every", oc.qr_refresh_every);

    std::string ns_kind = "polar_express";
    int ns_line = 0;
    if (const Entry* e = en.take("optimizer.ns_schedule")) {
        ns_kind = e->value;
        ns_line = e->line;
    }
    std::size_t ns_iters = 6;
    if (const Entry* e = en.take("optimizer.ns_iterations")) {
        ns_iters = to_u64("optimizer.ns_iterations", *e);
        if (ns_iters == 0 || ns_iters > 100) {
            throw ConfigError("optimizer.ns_iterations must lie in [1, 100]", e->line);
        }
    }
    if (ns_kind == "polar_express") {
        oc.ns = polar::NsSchedule::polar_express(static_cast<int>(ns_iters));
    } else if (ns_kind == "jordan") {
        oc.ns = polar::NsSchedule::jordan(static_cast<int>(ns_iters));
    } else {
        throw ConfigError("unknown optimizer.ns_schedule '" + ns_kind + "' (expected polar_express or jordan)",
                          ns_line);
    }

    const auto lite_keys = en.keys_with_prefix("lite.");
    if (!optim::is_lite(oc.family)) {
        if (en.has("optimizer.chi")) throw ConfigError("chi requires a lite family", en.line_of("optimizer.chi"));
        for (const auto& key : lite_keys) {
            const std::string name = key.substr(5);
            throw ConfigError(name == "chi" ? "chi requires a lite family" : key + " requires a lite family",
                              en.line_of(key));
        }
        return;
    }

    optim::LitePolicy lp;
    if (en.has("optimizer.chi") && en.has("lite.chi")) {
        throw ConfigError("optimizer.chi and lite.chi are both set", en.line_of("optimizer.chi"));
    }
    read(en, "optimizer.chi", lp.chi);
    read(en, "lite.chi", lp.chi);
    read(en, "lite.beta1", lp.beta1);
    read(en, "lite.beta2", lp.beta2);
    read(en, "lite.r_s", lp.r_s);
    read(en, "lite.d_smooth_ratio", lp.d_smooth_ratio);
    read(en, "lite.chi_embedding", lp.chi_embedding);
    read(en, "lite.chi_norm", lp.chi_norm);
    read(en, "lite.adam_beta1", lp.adam_beta1);
    read(en, "lite.adam_beta2", lp.adam_beta2);
    // Attach the line of the last lite key so the error points into the section.
    int line = 0;
    for (const auto& key : lite_keys) line = std::max(line, en.line_of(key));
    if (en.has("lite.beta2")) line = en.line_of("lite.beta2");
    at_line(line, [&] { lp.validate(); });
    oc.lite = lp;
}

void parse_schedule(Entries& en, optim::ScheduleSpec& sc, std::size_t steps) {
    const Entry& kind = en.require("schedule.kind");
    at_line(kind.line, [&] { sc.kind = optim::parse_schedule_kind(kind.value); });
    const Entry& lr = en.require("schedule.lr_max");
    sc.lr_max = to_double("schedule.lr_max", lr);
    read(en, "schedule.warmup_steps", sc.warmup_steps);
    sc.total_steps = steps;
    read(en, "schedule.total_steps", sc.total_steps);
    at_line(lr.line, [&] { sc.validate(); });
    if (sc.total_steps < steps) {
        throw ConfigError("schedule.total_steps is smaller than run.steps", en.line_of("schedule.total_steps"));
    }
}

void parse_align(Entries& en, landscapes::AlignSpec& as) {
    read(en, "align.train_steps", as.train_steps);
    read(en, "align.lr", as.lr);
    read(en, "align.d_s", as.d_s);
    read(en, "align.batches", as.batches);
    if (const Entry* e = en.take("align.k_grid")) as.k_grid = to_sizes("align.k_grid", *e);
    if (const Entry* e = en.take("align.blocks")) as.blocks = split_list(e->value);
    if (as.d_s == 0) throw ConfigError("align.d_s must be positive", en.line_of("align.d_s"));
    if (as.batches < 32) throw ConfigError("align.batches must be at least 32", en.line_of("align.batches"));
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

}  // namespace

LandscapeKind parse_landscape_kind(const std::string& name) {
    if (name == "quadratic") return LandscapeKind::quadratic;
    if (name == "river_valley") return LandscapeKind::river_valley;
    if (name == "kronecker") return LandscapeKind::kronecker;
    if (name == "mlp") return LandscapeKind::mlp;
    throw ConfigError("unknown landscape kind '" + name + "' (expected quadratic, river_valley, kronecker or mlp)");
}

std::string to_string(LandscapeKind kind) {
    switch (kind) {
        case LandscapeKind::quadratic: return "quadratic";
        case LandscapeKind::river_valley: return "river_valley";
        case LandscapeKind::kronecker: return "kronecker";
        case LandscapeKind::mlp: return "mlp";
    }
    return "quadratic";
}

ExperimentConfig parse_config(std::string_view text, ConfigPurpose purpose) {
    Entries en(text);
    ExperimentConfig cfg;

    cfg.seed = to_u64("run.seed", en.require("run.seed"));
    if (purpose == ConfigPurpose::run) {
        const Entry& steps = en.require("run.steps");
        cfg.steps = to_u64("run.steps", steps);
        if (cfg.steps == 0) throw ConfigError("run.steps must be positive", steps.line);
    } else {
        read(en, "run.steps", cfg.steps);
    }
    read(en, "run.log_every", cfg.log_every);
    if (cfg.log_every == 0) throw ConfigError("run.log_every must be positive", en.line_of("run.log_every"));
    if (const Entry* e = en.take("run.output")) cfg.output_path = e->value;
    read(en, "run.divergence_factor", cfg.divergence_factor);
    if (!(cfg.divergence_factor > 0.0)) {
        throw ConfigError("run.divergence_factor must be positive", en.line_of("run.divergence_factor"));
    }

    parse_landscape(en, cfg.landscape);

    const bool want_optimizer = purpose == ConfigPurpose::run || en.has("optimizer.family");
    if (want_optimizer) {
        parse_optimizer(en, cfg.optimizer);
        at_line(en.line_of("optimizer.family"), [&] { cfg.optimizer.validate(); });
    }
    if (purpose == ConfigPurpose::run || en.has("schedule.kind")) {
        parse_schedule(en, cfg.schedule, std::max<std::size_t>(cfg.steps, 1));
    }
    parse_align(en, cfg.align);

    en.reject_unused();
    return cfg;
}

ExperimentConfig load_config(const std::string& path, ConfigPurpose purpose) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), purpose);
}

std::unique_ptr<landscapes::Landscape> make_landscape(const ExperimentConfig& config) {
    const auto& lc = config.landscape;
    const std::uint64_t seed = derive_seed(config.seed, "landscape");
    switch (lc.kind) {
        case LandscapeKind::quadratic:
            return std::make_unique<landscapes::QuadraticLandscape>(lc.quadratic, lc.quadratic_init);
        case LandscapeKind::river_valley:
            return std::make_unique<landscapes::RiverValleyLandscape>(lc.river);
        case LandscapeKind::kronecker:
            return std::make_unique<landscapes::KroneckerQuadratic>(lc.kronecker, seed);
        case LandscapeKind::mlp:
            return std::make_unique<landscapes::MlpLandscape>(lc.mlp, seed);
    }
    throw ConfigError("unknown landscape kind");
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string RunSummary::describe() const {
    if (diverged) return "divergence at step " + std::to_string(diverged_at.value_or(steps_completed));
    return "completed " + std::to_string(steps_completed) + " steps, final loss " + format_double(final_loss);
}

RunSummary run_experiment(const ExperimentConfig& config, std::ostream& csv) {
    const auto land = make_landscape(config);
    const auto layout = land->blocks();
    Rng init_rng = Rng(config.seed).child("init");
    Rng grad_rng = Rng(config.seed).child("grad");
    std::vector<double> w = land->initial_point(init_rng);

    std::vector<optim::MatrixBlock> blocks;
    for (const auto& b : layout) blocks.push_back({b.name, landscapes::extract_block(w, b), b.role});
    std::vector<std::string> names;
    for (const auto& b : layout) names.push_back(b.name);
    std::sort(names.begin(), names.end());
    std::map<std::string, optim::BlockOptState> states;

    std::vector<std::string> header{"step", "lr", "loss", "global_grad_norm"};
    for (const auto& n : names) {
        for (const char* col : {"update_rms", "sharp_mass", "ctrl_l", "ctrl_ls", "ctrl_lsmooth"}) {
            header.push_back(n + "." + col);
        }
    }
    write_row(csv, header);

    RunSummary summary;
    const bool stochastic = config.landscape.stochastic && land->stochastic();
    double reference_loss = 0.0;
    for (std::size_t t = 1; t <= config.steps; ++t) {
        for (std::size_t i = 0; i < layout.size(); ++i) landscapes::write_block(w, layout[i], blocks[i].matrix);
        const double loss = land->loss(w);
        if (t == 1) reference_loss = loss;
        const double limit = config.divergence_factor * std::max(1.0, std::abs(reference_loss));
        if (!std::isfinite(loss) || loss - reference_loss > limit) {
            summary.diverged = true;
            summary.diverged_at = t;
            summary.final_loss = loss;
            break;
        }
        const auto g = stochastic ? land->sample_grad(w, grad_rng) : land->grad(w);
        if (!std::all_of(g.begin(), g.end(), [](double x) { return std::isfinite(x); })) {
            summary.diverged = true;
            summary.diverged_at = t;
            summary.final_loss = loss;
            break;
        }
        std::vector<optim::DenseMatrix> grads;
        for (const auto& b : layout) grads.push_back(landscapes::extract_block(g, b));
        const auto report = optim::route_and_step(blocks, states, std::move(grads), t, config.schedule, config.optimizer);
        summary.steps_completed = t;

        if ((t - 1) % config.log_every == 0 || t == config.steps) {
            std::vector<std::string> row{std::to_string(t), format_double(report.lr), format_double(loss),
                                         format_double(report.grad_norm)};
            for (const auto& n : names) {
                const auto& r = report.blocks.at(n);
                const auto& st = states.at(n);
                row.push_back(format_double(r.update_rms));
                row.push_back(format_double(r.sharp_mass));
                row.push_back(st.rank_ctrl ? format_double(st.rank_ctrl->scale_l) : "");
                row.push_back(st.mask_ctrl ? format_double(st.mask_ctrl->l_s) : "");
                row.push_back(st.mask_ctrl ? format_double(st.mask_ctrl->l_smooth) : "");
            }
            write_row(csv, row);
        }
    }
    csv.flush();

    for (std::size_t i = 0; i < layout.size(); ++i) landscapes::write_block(w, layout[i], blocks[i].matrix);
    if (!summary.diverged) {
        summary.final_loss = land->loss(w);
        if (!std::isfinite(summary.final_loss)) {
            summary.diverged = true;
            summary.diverged_at = config.steps;
        }
    }
    summary.final_w = std::move(w);
    return summary;
}

landscapes::AlignmentResult run_alignment(const ExperimentConfig& config, std::ostream& csv) {
    const auto land = make_landscape(config);
    Rng init_rng = Rng(config.seed).child("init");
    Rng align_rng = Rng(config.seed).child("align");
    auto result = landscapes::alignment_experiment(*land, land->initial_point(init_rng), config.align, align_rng);
    write_row(csv, {"block", "side", "d_s", "k", "coverage"});
    for (const auto& curve : result.curves) {
        for (std::size_t i = 0; i < curve.k.size(); ++i) {
            write_row(csv, {curve.block, curve.side, std::to_string(curve.d_s), std::to_string(curve.k[i]),
                            format_double(curve.coverage[i])});
        }
    }
    csv.flush();
    return result;
}

void quadratic_report(double alpha, double beta, double eta, double lambda_min, double lambda_max,
                      std::size_t points, std::ostream& csv) {
    if (points == 0) throw ContractError("quadratic_report: points must be positive");
    if (!(lambda_max >= lambda_min)) throw ContractError("quadratic_report: lambda_max must be >= lambda_min");
    write_row(csv, {"lambda", "T", "D", "discriminant", "regime", "dominant_modulus"});
    for (std::size_t i = 0; i < points; ++i) {
        const double frac = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        const double lambda = i + 1 == points && points > 1 ? lambda_max : lambda_min + frac * (lambda_max - lambda_min);
        const auto r = quadratic::classify(lambda, alpha, beta, eta);
        write_row(csv, {format_double(r.lambda), format_double(r.T), format_double(r.D), format_double(r.discriminant),
                        quadratic::to_string(r.regime), format_double(r.dominant_modulus)});
    }
    csv.flush();
}

std::vector<CheckResult> dynamics_checks() {
    std::vector<CheckResult> out;

    {
        const quadratic::QuadraticSpec spec{{4.0, 1.0}, {0.0, 0.0}};
        const auto trace = dynamics::nesterov_forms_trace(spec, 0.1, 0.01, 100, {1.0, -2.0});
        out.push_back({"nesterov_max_gap", trace.max_gap, 1e-10, trace.max_gap <= 1e-10});
    }
    {
        const quadratic::QuadraticSpec spec{{1.0}, {0.0}};
        dynamics::AdemamixFlow flow{0.1, 1e-3, 2.0, 0.1, dynamics::AdemamixCoefficient::derived};
        const double r = dynamics::ademamix_ode_residual(spec, flow, {1.0}, 10.0);
        out.push_back({"ademamix_third_order_residual", r, 1e-8, r <= 1e-8});
        const double reduced = dynamics::ademamix_reduced_residual(spec, flow, {1.0}, 10.0);
        out.push_back({"ademamix_reduced_residual", reduced, 1e-8, reduced <= 1e-8});
        flow.gradient_coefficient = dynamics::AdemamixCoefficient::printed;
        const double printed = dynamics::ademamix_ode_residual(spec, flow, {1.0}, 10.0);
        // The printed coefficient must violate the identity.
        out.push_back({"ademamix_printed_coefficient_violation", printed, 1e-8, printed > 1e-8});
    }
    {
        const quadratic::QuadraticSpec spec{{4.0, 1.0, 0.25}, {0.5, 0.0, -1.0}};
        const landscapes::QuadraticLandscape land(spec);
        const double alpha = 0.1;
        const double beta = 0.5;
        const double eta = 0.05;
        dynamics::FlowParams params;
        params.alpha = alpha;
        params.beta = beta;
        params.eta_of_t = [eta](double) { return eta; };
        const dynamics::DynamicsState s0{{1.0, -0.5, 2.0}, {0.3, 0.1, -0.2}, 0.0};
        const auto s1 = dynamics::semi_implicit_step(s0, land, params, 1.0);

        optim::MatrixBlock block{"w", optim::DenseMatrix::column(s0.w), optim::Role::adam};
        optim::BlockOptState state;
        state.m = optim::DenseMatrix::column(s0.m);
        optim::OptimizerConfig cfg;
        cfg.family = optim::Family::momentum;
        cfg.theta = 1.0 - alpha;
        cfg.nesterov_beta = beta;
        cfg.weight_decay = 0.0;
        optim::step_momentum(block, state, optim::DenseMatrix::column(land.grad(s0.w)), eta, cfg);
        double gap = 0.0;
        for (std::size_t i = 0; i < s1.w.size(); ++i) {
            gap = std::max(gap, std::abs(s1.w[i] - block.matrix(i, 0)));
            gap = std::max(gap, std::abs(s1.m[i] - state.m(i, 0)));
        }
        out.push_back({"semi_implicit_h1_gap", gap, 0.0, gap == 0.0});

        params.eta_of_t = [](double) { return 0.5; };
        params.alpha = 0.5;
        const auto rep = dynamics::discretization_consistency(s0, land, params, 1.0, 3, 8);
        out.push_back({"consistency_slope", rep.slope, 0.2, std::abs(rep.slope - 1.0) <= 0.2});
    }
    return out;
}

}  // namespace lite::harness
