#include "ionnode/cli.hpp"

#include "ionnode/budget.hpp"
#include "ionnode/crosstalk.hpp"
#include "ionnode/heralding.hpp"
#include "ionnode/histogram.hpp"
#include "ionnode/protocol_sim.hpp"
#include "ionnode/quantum_state.hpp"
#include "ionnode/scenario.hpp"
#include "ionnode/tomography.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace ionnode::cli {

using nlohmann::json;

#ifndef IONNODE_VERSION
#define IONNODE_VERSION "0.0.0"
#endif

const char* version() { return IONNODE_VERSION; }

namespace {

struct Options {
    std::string command;
    std::string scenario;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 1;
    std::string sequences = "1e4";
    std::string rates = "0.001..10000";
    std::size_t points = 20;
    unsigned workers = 1;
    std::optional<double> t1, t2;
    std::string trials = "1e5";
    bool unconditioned = false;
    std::string shots = "1e5";
    std::string input;
    std::string samples = "1e5";
    double tau = 6.936, sigma = 1.0, latency = 0.0;
    std::string window;
};

std::string num(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::uint64_t count_flag(const std::string& flag, const std::string& text) {
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw scenario::ConfigError(flag + ": not a number: " + text);
    }
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e15)
        throw scenario::ConfigError(flag + ": expected a positive integer, got " + text);
    return static_cast<std::uint64_t>(v);
}

double number(const std::string& flag, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw scenario::ConfigError(flag + ": not a number: " + text);
}

/// "a..b" gives `points` log-spaced values, "a,b,c" an explicit list.
std::vector<double> parse_rates(const std::string& text, std::size_t points) {
    std::vector<double> rates;
    if (auto dots = text.find(".."); dots != std::string::npos) {
        const double lo = number("--rates", text.substr(0, dots));
        const double hi = number("--rates", text.substr(dots + 2));
        if (!(lo > 0.0 && hi > lo)) throw scenario::ConfigError("--rates: need 0 < a < b in a..b");
        if (points < 2) throw scenario::ConfigError("--points: need at least 2");
        return sim::log_space(lo, hi, points);
    }
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        rates.push_back(number("--rates", item));
        if (!(rates.back() > 0.0)) throw scenario::ConfigError("--rates: rates must be > 0");
    }
    if (rates.empty()) throw scenario::ConfigError("--rates: empty list");
    return rates;
}

std::pair<double, double> parse_window(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw scenario::ConfigError("--window: expected a..b");
    const double lo = number("--window", text.substr(0, dots));
    const double hi = number("--window", text.substr(dots + 2));
    if (!(hi > lo)) throw scenario::ConfigError("--window: need a < b");
    return {lo, hi};
}

void require_finite(double v, const std::string& what) {
    if (!std::isfinite(v)) throw NumericalError(what + " is not finite");
}

struct Output {
    std::string body;
    json meta = json::object();
};

// ------------------------------------------------------------ subcommands

std::string csv_rows(const std::vector<std::vector<std::string>>& rows) {
    std::string s;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            const bool quote = row[i].find_first_of(",\"") != std::string::npos;
            if (quote) {
                s += '"';
                for (char c : row[i]) s += (c == '"') ? std::string("\"\"") : std::string(1, c);
                s += '"';
            } else {
                s += row[i];
            }
        }
        s += '\n';
    }
    return s;
}

Output cmd_budget(const Options& o, const scenario::Scenario& sc) {
    const auto rate = budget::rate_budget(sc.node);
    const auto inf = budget::infidelity_budget(sc.infidelity);
    require_finite(rate.success_rate, "success rate");
    Output out;
    if (o.format == "json") {
        json stages = json::array();
        for (const auto& s : rate.stages) stages.push_back({{"row", s.name}, {"value", s.value}});
        json terms = json::array();
        for (const auto& t : inf.terms) terms.push_back({{"row", t.name}, {"value", t.value}});
        json doc{{"rate",
                  {{"stages", stages},
                   {"per_attempt_probability", rate.per_attempt_probability},
                   {budget::kAttemptRow, rate.attempt_rate},
                   {"attempt_rate_cap", rate.attempt_rate_cap},
                   {"cap_utilization", rate.cap_utilization},
                   {budget::kSuccessRow, rate.success_rate},
                   {"warnings", rate.warnings}}},
                 {"infidelity", {{"terms", terms}, {budget::kTotalInfidelityRow, inf.total}}}};
        if (sc.node.future) {
            const auto fut = budget::rate_budget_future(sc.node);
            doc["future"] = {{budget::kAttemptRow, fut.attempt_rate}, {budget::kSuccessRow, fut.success_rate}};
        }
        out.body = doc.dump(2) + "\n";
    } else {
        std::vector<std::vector<std::string>> rows{{"table", "row", "value"}};
        for (const auto& t : inf.terms) rows.push_back({"infidelity", t.name, num(t.value, 6)});
        rows.push_back({"infidelity", budget::kTotalInfidelityRow, num(inf.total, 6)});
        for (const auto& s : rate.stages) rows.push_back({"rate", s.name, num(s.value, 6)});
        rows.push_back({"rate", budget::kAttemptRow, num(rate.attempt_rate, 6)});
        rows.push_back({"rate", budget::kSuccessRow, num(rate.success_rate, 3)});
        out.body = csv_rows(rows);
    }
    out.meta["warnings"] = rate.warnings;
    return out;
}

Output cmd_simulate_node(const Options& o, const scenario::Scenario& sc) {
    const auto n = count_flag("--sequences", o.sequences);
    const auto records = sim::run_node_sequence(sc.node, sc.noise, o.seed, n, o.workers);
    const auto summary = sim::summarize(records, sc.node, sc.noise);
    require_finite(summary.herald_rate, "herald rate");
    json sj{{"sequences", summary.sequences},
            {"attempts", summary.attempts},
            {"attempt_time", summary.attempt_time},
            {"decayed", summary.decayed},
            {"per_attempt_probability", summary.per_attempt_probability},
            {"herald_rate", summary.herald_rate},
            {"analytic_herald_rate", summary.analytic_herald_rate},
            {"decay_fraction", summary.decay_fraction},
            {"analytic_decay_fraction", summary.analytic_decay_fraction}};
    Output out;
    auto opt = [](const std::optional<double>& v) { return v ? num(*v, 12) : std::string(); };
    if (o.format == "json") {
        json recs = json::array();
        for (const auto& r : records) {
            json j{{"sequence", r.sequence},          {"attempts", r.attempts},
                   {"herald_time", r.herald_time},    {"block_index", r.block_index},
                   {"memory_elapsed", r.memory_elapsed}, {"decayed", r.decayed},
                   {"pattern", r.pattern}};
            j["bell_fidelity"] = r.bell_fidelity ? json(*r.bell_fidelity) : json();
            j["memory_fidelity"] = r.memory_fidelity ? json(*r.memory_fidelity) : json();
            recs.push_back(std::move(j));
        }
        out.body = json{{"summary", sj}, {"records", recs}}.dump(2) + "\n";
    } else {
        std::string s = "sequence,attempts,herald_time,block_index,memory_elapsed,decayed,bell_fidelity,"
                        "memory_fidelity,pattern\n";
        for (const auto& r : records) {
            s += std::to_string(r.sequence) + ',' + std::to_string(r.attempts) + ',' + num(r.herald_time, 12) + ',' +
                 std::to_string(r.block_index) + ',' + num(r.memory_elapsed, 12) + ',' + (r.decayed ? "1" : "0") +
                 ',' + opt(r.bell_fidelity) + ',' + opt(r.memory_fidelity) + ',' + r.pattern + '\n';
        }
        out.body = std::move(s);
    }
    out.meta["summary"] = sj;
    return out;
}

Output cmd_swap_curve(const Options& o, const scenario::Scenario& sc) {
    const double t1 = o.t1.value_or(sc.noise.t1_prime);
    const double t2 = o.t2.value_or(sc.noise.t2);
    if (!(t1 > 0.0) || !(t2 > 0.0)) throw scenario::ConfigError("--t1/--t2: must be > 0");
    sim::SwapCurveOptions opts;
    opts.conditioned = !o.unconditioned;
    opts.mc_trials = o.trials == "0" ? 0 : count_flag("--trials", o.trials);
    opts.seed = o.seed;
    opts.workers = o.workers;
    const auto points = sim::swap_curve(parse_rates(o.rates, o.points), t1, t2, opts);
    for (const auto& p : points) require_finite(p.fidelity, "swap fidelity");
    Output out;
    if (o.format == "json") {
        json arr = json::array();
        for (const auto& p : points)
            arr.push_back({{"rate", p.rate},
                           {"success", p.success},
                           {"fidelity", p.fidelity},
                           {"mc_success", p.mc_success},
                           {"mc_fidelity", p.mc_fidelity}});
        out.body = json{{"t1_prime", t1}, {"t2", t2}, {"conditioned", opts.conditioned}, {"points", arr}}.dump(2) +
                   "\n";
    } else {
        std::vector<std::vector<std::string>> rows{{"rate", "success", "fidelity", "mc_success", "mc_fidelity"}};
        for (const auto& p : points)
            rows.push_back({num(p.rate), num(p.success), num(p.fidelity), num(p.mc_success), num(p.mc_fidelity)});
        out.body = csv_rows(rows);
    }
    out.meta["t1_prime"] = t1;
    out.meta["t2"] = t2;
    out.meta["conditioned"] = opts.conditioned;
    out.meta["mc_trials"] = opts.mc_trials;
    return out;
}

Output cmd_crosstalk(const Options& o, const scenario::Scenario& sc) {
    if (sc.crosstalk.empty()) throw scenario::ConfigError("crosstalk: scenario has no crosstalk operations");
    const auto ledger = crosstalk::crosstalk_ledger(sc.crosstalk_operations());
    Output out;
    json heating;
    if (sc.heating) {
        const auto& h = *sc.heating;
        const auto recoil = crosstalk::recoil_heating(h.params);
        const auto combined = crosstalk::combined_heating(h.params);
        json modes = json::array();
        for (std::size_t i = 0; i < combined.size(); ++i) {
            const auto eq = crosstalk::equilibrium_phonons(h.base_nbar, combined[i], h.attempts_between_cooling);
            modes.push_back({{"frequency_hz", h.params.mode_freqs[i]},
                             {"recoil_phonons", recoil.phonons_per_mode[i]},
                             {"combined_phonons", combined[i]},
                             {"nbar_min", eq.min},
                             {"nbar_max", eq.max},
                             {"nbar_mean", eq.mean}});
        }
        heating = {{"recoil_energy_j", recoil.energy},
                   {"pumping_photons",
                    crosstalk::pumping_photon_count(h.params.pump_survival, h.params.n_pump_rounds,
                                                    h.params.initial_unwanted)},
                   {"modes", modes}};
    }
    if (o.format == "json") {
        json doc = crosstalk::to_json(ledger);
        if (!heating.is_null()) doc["heating"] = heating;
        out.body = doc.dump(2) + "\n";
    } else {
        std::vector<std::vector<std::string>> rows{
            {"operation", "decay_per_op", "decay_rate_per_s", "phase_per_op_rad", "phase_rate_rad_per_s"}};
        for (const auto& r : ledger.rows)
            rows.push_back({r.name, num(r.decay_per_op, 4), num(r.decay_rate, 4), num(r.phase_per_op, 4),
                            num(r.phase_rate, 4)});
        rows.push_back({ledger.total.name, "", num(ledger.total.decay_rate, 4), "", num(ledger.total.phase_rate, 4)});
        out.body = csv_rows(rows);
    }
    out.meta["warnings"] = ledger.warnings;
    if (!heating.is_null()) out.meta["heating"] = heating;
    return out;
}

Output cmd_tomography(const Options& o, const scenario::Scenario* sc) {
    const auto shots = count_flag("--shots", o.shots);
    const auto truth = sc ? heralding::direct_herald(sc->node, sc->noise).state : quantum::bell_state();
    const auto counts = tomography::simulate_counts(truth, tomography::pauli_settings(), shots, o.seed);
    const auto mle = tomography::mle_reconstruct(counts);
    const auto vis = tomography::visibilities(counts);
    const double fid = quantum::bell_fidelity(mle.state);
    require_finite(fid, "reconstructed fidelity");
    json doc{{"shots_per_setting", shots},
             {"counts", tomography::to_json(counts)},
             {"true_fidelity", quantum::bell_fidelity(truth)},
             {"reconstructed", quantum::to_json(mle.state)},
             {"reconstructed_fidelity", fid},
             {"iterations", mle.iterations},
             {"converged", mle.converged},
             {"log_likelihood", mle.log_likelihood.empty() ? 0.0 : mle.log_likelihood.back()},
             {"visibilities", {{"x", vis.vx}, {"y", vis.vy}, {"z", vis.vz}, {"signs", vis.signs}}},
             {"visibility_fidelity", quantum::visibility_fidelity(vis.vx, vis.vy, vis.vz)}};
    Output out;
    out.body = doc.dump(2) + "\n";
    out.meta["converged"] = mle.converged;
    return out;
}

std::vector<double> read_timestamps(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw scenario::ConfigError("--input: cannot read " + path);
    std::vector<double> samples;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto c = line.find(','); c != std::string::npos) line.resize(c);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        try {
            std::size_t used = 0;
            samples.push_back(std::stod(line, &used));
            if (used != line.size()) throw std::invalid_argument(line);
        } catch (const std::exception&) {
            if (line_no == 1) continue;  // header
            throw scenario::ConfigError("--input: line " + std::to_string(line_no) + ": not a number");
        }
    }
    return samples;
}

Output cmd_fit_histogram(const Options& o) {
    std::vector<double> samples;
    json source;
    if (!o.input.empty()) {
        samples = read_timestamps(o.input);
        source = {{"input", o.input}};
    } else {
        const auto n = count_flag("--samples", o.samples);
        samples = histogram::sample_emg(o.latency, o.sigma, o.tau, n, o.seed);
        source = {{"generator", {{"latency", o.latency}, {"sigma", o.sigma}, {"tau", o.tau}, {"samples", n}}}};
    }
    std::optional<std::pair<double, double>> window;
    if (!o.window.empty()) window = parse_window(o.window);
    const auto fit = histogram::fit_histogram(samples, window);
    if (!fit.converged) throw NumericalError("fit-histogram: minimizer did not converge");
    json doc{{"source", source},
             {"unit", "ns"},
             {"n", samples.size()},
             {"latency", fit.model.latency},
             {"latency_error", fit.latency_error},
             {"jitter_sigma", fit.model.jitter_sigma},
             {"sigma_error", fit.sigma_error},
             {"decay_tau", fit.model.decay_tau},
             {"tau_error", fit.tau_error},
             {"log_likelihood", fit.log_likelihood},
             {"iterations", fit.iterations},
             {"degenerate", fit.degenerate}};
    if (window) doc["window"] = {window->first, window->second};
    Output out;
    out.body = doc.dump(2) + "\n";
    out.meta["degenerate"] = fit.degenerate;
    return out;
}

Output cmd_herald_table(const Options& o, const scenario::Scenario& sc) {
    std::vector<heralding::HeraldOutcome> outcomes;
    const auto& h = sc.herald;
    switch (h.scheme) {
        case heralding::Scheme::single_photon:
            outcomes = heralding::herald_single_photon(h.chi, h.eta, h.eta, h.phase);
            break;
        case heralding::Scheme::bsm: {
            const auto pair = heralding::direct_herald(sc.node, sc.noise).state;
            outcomes = heralding::herald_bsm(pair, pair, h.eta, h.eta);
            break;
        }
        case heralding::Scheme::direct: {
            const auto d = heralding::direct_herald(sc.node, sc.noise);
            outcomes.push_back({"click", d.probability, d.probability, d.state});
            outcomes.push_back({"none", 1.0 - d.probability, 0.0, std::nullopt});
            break;
        }
    }
    Output out;
    if (o.format == "json") {
        out.body = heralding::outcomes_to_json(outcomes).dump(2) + "\n";
    } else {
        std::vector<std::vector<std::string>> rows{{"pattern", "probability", "single_photon_probability", "bell_fidelity"}};
        for (const auto& r : outcomes)
            rows.push_back({r.pattern, num(r.probability, 12), num(r.single_photon_probability, 12),
                            r.post_state ? num(quantum::bell_fidelity(*r.post_state), 12) : std::string()});
        out.body = csv_rows(rows);
    }
    return out;
}

std::string joined(const std::vector<std::string>& args) {
    std::string s = "ionnode";
    for (const auto& a : args) s += ' ' + a;
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trapped-ion quantum network node models"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1, 1);
    Options o;

    auto common = [&](CLI::App* sub, bool scenario_required) {
        auto* s = sub->add_option("--scenario", o.scenario, "scenario name or JSON path");
        if (scenario_required) s->required();
        sub->add_option("--out", o.out, "output file (stdout if omitted)");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* budget_cmd = app.add_subcommand("budget", "rate and infidelity ledger");
    common(budget_cmd, true);

    auto* node_cmd = app.add_subcommand("simulate-node", "Monte Carlo of the node sequence");
    common(node_cmd, true);
    node_cmd->add_option("--sequences", o.sequences, "number of sequences (1e5 accepted)");
    node_cmd->add_option("--workers", o.workers, "threads")->check(CLI::PositiveNumber);

    auto* swap_cmd = app.add_subcommand("swap-curve", "swap success and fidelity against link rate");
    common(swap_cmd, false);
    swap_cmd->add_option("--rates", o.rates, "a..b (log-spaced) or a,b,c, in Hz");
    swap_cmd->add_option("--points", o.points, "points for a..b");
    swap_cmd->add_option("--t1", o.t1, "memory lifetime, s");
    swap_cmd->add_option("--t2", o.t2, "memory coherence time, s");
    swap_cmd->add_option("--trials", o.trials, "Monte Carlo trials per rate, 0 to skip");
    swap_cmd->add_option("--workers", o.workers, "threads")->check(CLI::PositiveNumber);
    swap_cmd->add_flag("--unconditioned", o.unconditioned, "do not condition on memory survival");

    auto* xt_cmd = app.add_subcommand("crosstalk-report", "memory disturbance ledger");
    common(xt_cmd, false);

    auto* tomo_cmd = app.add_subcommand("tomography-demo", "simulated tomography and MLE reconstruction");
    common(tomo_cmd, false);
    tomo_cmd->add_option("--shots", o.shots, "shots per setting");

    auto* hist_cmd = app.add_subcommand("fit-histogram", "arrival-time histogram fit");
    common(hist_cmd, false);
    hist_cmd->add_option("--input", o.input, "CSV of timestamps in ns");
    hist_cmd->add_option("--samples", o.samples, "generated samples when no input");
    hist_cmd->add_option("--tau", o.tau, "generator decay time, ns");
    hist_cmd->add_option("--sigma", o.sigma, "generator jitter, ns");
    hist_cmd->add_option("--latency", o.latency, "generator latency, ns");
    hist_cmd->add_option("--window", o.window, "a..b in ns");

    auto* herald_cmd = app.add_subcommand("herald-table", "click patterns and heralded states");
    common(herald_cmd, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    o.command = app.get_subcommands().front()->get_name();

    try {
        std::optional<scenario::Scenario> sc;
        if (!o.scenario.empty()) sc = scenario::load(o.scenario);
        else if (o.command == "crosstalk-report") sc = scenario::load("paper-S13");
        else if (o.command == "swap-curve") sc = scenario::Scenario{};

        Output result;
        if (o.command == "budget") result = cmd_budget(o, *sc);
        else if (o.command == "simulate-node") result = cmd_simulate_node(o, *sc);
        else if (o.command == "swap-curve") result = cmd_swap_curve(o, *sc);
        else if (o.command == "crosstalk-report") result = cmd_crosstalk(o, *sc);
        else if (o.command == "tomography-demo") result = cmd_tomography(o, sc ? &*sc : nullptr);
        else if (o.command == "fit-histogram") result = cmd_fit_histogram(o);
        else result = cmd_herald_table(o, *sc);

        if (o.out.empty()) {
            out << result.body;
        } else {
            std::ofstream f(o.out, std::ios::binary);
            if (!f) throw scenario::ConfigError("--out: cannot write " + o.out);
            f << result.body;
            json meta{{"command", joined(args)}, {"seed", o.seed}, {"version", version()}};
            if (sc && !sc->name.empty()) {
                meta["scenario"] = sc->name;
                meta["hash"] = scenario::scenario_hash(*sc);
            } else {
                meta["scenario"] = nullptr;
                meta["hash"] = nullptr;
            }
            meta.update(result.meta);
            std::ofstream m(o.out + ".meta.json", std::ios::binary);
            m << meta.dump(2) << "\n";
        }
        return kExitOk;
    } catch (const scenario::ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace ionnode::cli
