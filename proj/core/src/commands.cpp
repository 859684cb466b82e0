#include "totsim/commands.hpp"

#include <ostream>
#include <sstream>

#include "totsim/config.hpp"
#include "totsim/errors.hpp"
#include "totsim/exper.hpp"
#include "totsim/records_io.hpp"

#ifndef TOTSIM_VERSION
#define TOTSIM_VERSION "0.0.0"
#endif

namespace totsim {

namespace {

int report_config_error(std::ostream& err, const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
}

}  // namespace

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.format != "csv" && opts.format != "json") {
        err << "usage error: --format must be csv or json\n";
        return kExitConfigError;
    }
    if (opts.workers < 1) {
        err << "usage error: --workers must be >= 1\n";
        return kExitConfigError;
    }

    ScenarioConfig cfg;
    std::vector<std::string> defaults;
    try {
        cfg = load_config(opts.config_path, &defaults);
        if (opts.seed) cfg.seed = *opts.seed;
        build_scenario_lexicon(cfg);
    } catch (const ConfigError& e) {
        return report_config_error(err, e);
    } catch (const GenerationError& e) {
        return report_config_error(err, e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }

    try {
        const auto records = run_trials(cfg, opts.workers);
        const auto summary = summarize(records);

        std::string records_text, summary_text;
        if (opts.format == "csv") {
            std::ostringstream rs, ss;
            write_records_csv(rs, records);
            write_summary_csv(ss, summary);
            records_text = rs.str();
            summary_text = ss.str();
        } else {
            records_text = records_to_json(records).dump(2) + "\n";
            summary_text = summary_to_json(summary).dump(2) + "\n";
        }

        const nlohmann::json metadata{
            {"artifact", "totsim"},
            {"version", TOTSIM_VERSION},
            {"seed", cfg.seed},
            {"config", to_json(cfg)},
            {"defaults_applied", defaults},
            {"format", opts.format},
            {"records_schema_version", kRecordsSchemaVersion},
            {"records_header", std::string(kRecordsCsvHeader)},
            {"interval_method", kIntervalMethod},
            {"tie_rule", "sgn(0) = +1"},
            {"record_count", records.size()},
        };

        std::filesystem::create_directories(opts.out_dir);
        const std::string ext = opts.format == "csv" ? ".csv" : ".json";
        write_file_atomically(opts.out_dir / ("records" + ext), records_text);
        write_file_atomically(opts.out_dir / ("summary" + ext), summary_text);
        write_file_atomically(opts.out_dir / "metadata.json", metadata.dump(2) + "\n");
        out << "wrote " << records.size() << " records to " << opts.out_dir.string() << '\n';
    } catch (const ConfigError& e) {
        return report_config_error(err, e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
    return kExitOk;
}

int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const ScenarioConfig cfg = load_config(opts.config_path);
        const Lexicon lex = build_scenario_lexicon(cfg);
        const WordNode* node = lex.find(opts.word);
        if (!node) throw ConfigError("--word", "unknown word id '" + opts.word + "'");
        const auto component = parse_component(opts.component);
        if (!component) throw ConfigError("--component", "unknown component '" + opts.component + "'");

        const ComponentNetwork& net = node->networks[*component];
        if (opts.cue_size > net.size()) {
            throw ConfigError("--cue-size", "exceeds the component length " + std::to_string(net.size()));
        }
        std::vector<std::size_t> cues(opts.cue_size);
        for (std::size_t i = 0; i < cues.size(); ++i) cues[i] = i;

        const Rational p = exact_success_prob(net, node->metamemory_ref[*component], cues);
        out << p.num << '/' << p.den << " = " << format_real(p.value()) << '\n';
    } catch (const ConfigError& e) {
        return report_config_error(err, e);
    } catch (const GenerationError& e) {
        return report_config_error(err, e);
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
    return kExitOk;
}

int cmd_validate(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
    try {
        const ScenarioConfig cfg = load_config(config_path);
        build_scenario_lexicon(cfg);
        out << to_json(cfg).dump(2) << '\n';
    } catch (const ConfigError& e) {
        return report_config_error(err, e);
    } catch (const GenerationError& e) {
        return report_config_error(err, e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
    return kExitOk;
}

}  // namespace totsim
