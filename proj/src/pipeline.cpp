#include "photobio/pipeline.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "photobio/basic_state.hpp"
#include "photobio/error.hpp"
#include "photobio/parallel.hpp"
#include "photobio/snapshot.hpp"

namespace photobio {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::string multiple_label(double m) {
    std::ostringstream s;
    s << "rmult_" << m;
    return s.str();
}

void write_metadata(const SimParams& p, const fs::path& path) {
    nlohmann::json meta;
    meta["format_version"] = snapshot_version;
    meta["params_hash"] = params_hash(p);
    meta["defaulted_keys"] = p.defaulted;
    meta["params"] = serialize(p);
    open_out(path) << meta.dump(2) << '\n';
}

}  // namespace

Mode parse_mode(std::string_view name) {
    if (name == "basic") return Mode::basic;
    if (name == "onset") return Mode::onset;
    if (name == "simulate") return Mode::simulate;
    if (name == "sweep") return Mode::sweep;
    throw ConfigError("unknown mode '" + std::string(name) + "' (basic, onset, simulate, sweep)");
}

std::vector<double> catalogue_multiples() { return {1.5, 5, 10, 20, 30, 40, 70, 100}; }

CriticalSummary onset_summary(const SimParams& params, const std::optional<fs::path>& out) {
    if (!params.onset_summary.empty()) {
        std::ifstream in(params.onset_summary);
        if (!in) throw IoError("cannot open onset summary '" + params.onset_summary + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_summary(buf.str());
    }
    const auto curve = critical_point(params);
    if (out) {
        fs::create_directories(*out);
        auto csv = open_out(*out / "neutral.csv");
        write_neutral_csv(curve, csv);
        open_out(*out / "critical.txt") << format_summary(curve.summary());
    }
    return curve.summary();
}

void write_diagnostics_csv(const std::vector<DiagnosticSample>& samples, std::ostream& out) {
    out << "t,max_psi,roll_count,secondary_cells,mass,residual,mixing\n" << std::setprecision(12);
    for (const auto& s : samples) {
        out << s.t << ',' << s.max_psi << ',' << s.roll_count << ',' << s.secondary_cells << ','
            << std::setprecision(17) << s.mass << std::setprecision(12) << ',' << s.residual << ','
            << s.mixing << '\n';
    }
}

SimulationOutcome simulate(const SimParams& resolved, const fs::path& out) {
    fs::create_directories(out);
    open_out(out / "params.cfg") << serialize(resolved);
    write_metadata(resolved, out / "metadata.json");

    const std::uint64_t hash = params_hash(resolved);
    const Grid grid(resolved.Nx, resolved.Nz, resolved.width());
    const double R = resolved.rayleigh();

    SimulationOutcome outcome;
    outcome.params = resolved;
    {
        SnapshotWriter writer;
        int index = 0;
        RunOptions options;
        options.on_snapshot = [&](const FieldSet& state) {
            std::ostringstream name;
            name << "snap_" << std::setw(4) << std::setfill('0') << index++ << ".bin";
            writer.submit(make_snapshot(state, grid, R, hash), out / name.str());
        };
        outcome.run = run_to_steady(resolved, options);
        writer.submit(make_snapshot(outcome.run.state, grid, R, hash), out / "final.bin");
        writer.flush();
    }
    outcome.rolls = count_rolls(outcome.run.state.psi, grid);

    auto diag = open_out(out / "diagnostics.csv");
    write_diagnostics_csv(outcome.run.diagnostics, diag);

    auto summary = open_out(out / "summary.txt");
    summary << std::setprecision(12) << "steady = " << (outcome.run.report.steady ? 1 : 0) << '\n'
            << "residual = " << outcome.run.report.residual << '\n'
            << "t = " << outcome.run.report.t_reached << '\n'
            << "steps = " << outcome.run.report.steps << '\n'
            << "R = " << R << '\n'
            << "lambda = " << resolved.width() << '\n'
            << "primary_rolls = " << outcome.rolls.primary_rolls << '\n'
            << "secondary_cells = " << outcome.rolls.secondary_cells << '\n'
            << "secondary_height = " << outcome.rolls.secondary_height << '\n';
    return outcome;
}

int run_pipeline(const PipelineOptions& options, std::ostream& log, std::ostream& err) {
    try {
        auto overrides = options.overrides;
        if (options.mode == Mode::simulate && !options.r_mult.empty()) {
            if (options.r_mult.size() != 1) throw ConfigError("simulate takes a single --r-mult");
            std::ostringstream s;
            s << std::setprecision(17) << "R_mult=" << options.r_mult.front();
            overrides.push_back(s.str());
        }
        const SimParams params = load_config_file(options.config.string(), overrides);
        fs::create_directories(options.out);

        switch (options.mode) {
            case Mode::basic: {
                const auto state = solve_basic_state(params);
                auto csv = open_out(options.out / "basic_state.csv");
                write_basic_state_csv(state, csv);
                log << "z_c=" << std::setprecision(10) << state.sublayer_height
                    << " iterations=" << state.iterations << '\n';
                break;
            }
            case Mode::onset: {
                const auto summary = onset_summary(params, options.out);
                if (!params.onset_summary.empty()) {
                    open_out(options.out / "critical.txt") << format_summary(summary);
                }
                log << format_summary(summary);
                break;
            }
            case Mode::simulate: {
                SimParams resolved = params;
                if (params.needs_onset()) resolved = resolve_onset(params, onset_summary(params, options.out));
                const auto outcome = simulate(resolved, options.out);
                log << "steady=" << outcome.run.report.steady << " residual=" << outcome.run.report.residual
                    << " t=" << outcome.run.report.t_reached
                    << " primary_rolls=" << outcome.rolls.primary_rolls
                    << " secondary_cells=" << outcome.rolls.secondary_cells << '\n';
                break;
            }
            case Mode::sweep: {
                const auto summary = onset_summary(params, options.out);
                const auto multiples = options.r_mult.empty() ? catalogue_multiples() : options.r_mult;
                std::vector<SimulationOutcome> outcomes(multiples.size());
                parallel_chunks(static_cast<int>(multiples.size()), [&](int begin, int end) {
                    for (int s = begin; s < end; ++s) {
                        SimParams p = params;
                        p.R.reset();
                        p.R_mult = multiples[s];
                        p = resolve_onset(p, summary);
                        outcomes[s] = simulate(p, options.out / multiple_label(multiples[s]));
                    }
                });
                auto table = open_out(options.out / "sweep.csv");
                table << "R_mult,R,steady,residual,primary_rolls,secondary_cells,secondary_height\n"
                      << std::setprecision(12);
                for (std::size_t s = 0; s < multiples.size(); ++s) {
                    const auto& o = outcomes[s];
                    table << multiples[s] << ',' << o.params.rayleigh() << ',' << o.run.report.steady << ','
                          << o.run.report.residual << ',' << o.rolls.primary_rolls << ','
                          << o.rolls.secondary_cells << ',' << o.rolls.secondary_height << '\n';
                    log << "R_mult=" << multiples[s] << " steady=" << o.run.report.steady
                        << " primary_rolls=" << o.rolls.primary_rolls
                        << " secondary_cells=" << o.rolls.secondary_cells << '\n';
                }
                break;
            }
        }
        return 0;
    } catch (const Error& e) {
        nlohmann::json record{{"error", e.kind()}, {"message", e.what()}};
        err << record.dump() << '\n';
        std::error_code ec;
        fs::create_directories(options.out, ec);
        std::ofstream(options.out / "error.json") << record.dump(2) << '\n';
        return dynamic_cast<const ConfigError*>(&e) ? 2 : 1;
    } catch (const std::exception& e) {
        nlohmann::json record{{"error", "InternalError"}, {"message", e.what()}};
        err << record.dump() << '\n';
        return 1;
    }
}

}  // namespace photobio
