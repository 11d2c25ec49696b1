#include "segedit/service/cli.hpp"
#include "segedit/backends/backend_server.hpp"
#include "segedit/backends/reference.hpp"
#include "segedit/core/png.hpp"
#include "segedit/service/http_server.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace segedit {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_text(fs::path const& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json step_report(EditStep const& step, std::size_t index, std::optional<fs::path> const& image_path) {
    json j{{"index", index},
           {"source_prompt", step.instruction.source_prompt},
           {"target_prompt", step.instruction.target_prompt},
           {"status", to_string(step.status)},
           {"seed", step.seed},
           {"selected_segment_id",
            step.selection.is_selected() ? json(step.selection.selected->segment.segment_id) : json(nullptr)},
           {"image", image_path ? json(image_path->string()) : json(nullptr)}};
    if (step.selection.is_selected()) {
        j["norm_score"] = step.selection.selected->norm_score;
    }
    if (step.status == StepStatus::failed) {
        j["error"] = step.error;
    }
    return j;
}

} // namespace

int run_edit_command(EditCommand const& cmd, std::ostream& err) {
    std::string stage = "setup";
    try {
        stage = "load";
        ImageBuffer image = read_png_file(cmd.image);

        PipelineConfig config = default_config_for(image.width(), image.height());
        if (cmd.config) {
            json j;
            try {
                j = json::parse(read_text(*cmd.config));
            } catch (json::exception const& e) {
                throw InvalidArgument(cmd.config->string() + " is not valid JSON: " + e.what());
            }
            config = config_from_json(j, config);
        }
        if (cmd.stack) config.stack_id = *cmd.stack;
        if (cmd.seed) config.seed = *cmd.seed;
        config.validate();

        stage = "script";
        std::string script = cmd.script ? *cmd.script : read_text(*cmd.script_file);
        auto instructions = parse_instructions(script);

        stage = "backends";
        auto registry = BackendRegistry::from_environment();
        auto const& stack = registry.get(config.stack_id);

        stage = "edit";
        auto session = run_session(std::move(image), instructions, stack, config);

        stage = "write";
        write_png_file(cmd.out, session.current_image());
        json steps = json::array();
        if (cmd.steps_dir) {
            fs::create_directories(*cmd.steps_dir);
        }
        for (std::size_t i = 0; i < session.steps.size(); ++i) {
            std::optional<fs::path> path;
            if (cmd.steps_dir) {
                char name[32];
                std::snprintf(name, sizeof name, "step-%03zu.png", i + 1);
                path = *cmd.steps_dir / name;
                write_png_file(*path, session.steps[i].output_image);
            }
            steps.push_back(step_report(session.steps[i], i + 1, path));
        }
        fs::path report_path = cmd.report       ? *cmd.report
                               : cmd.steps_dir ? *cmd.steps_dir / "session.json"
                                               : fs::path(cmd.out).replace_extension(".json");
        json report{{"schema", 1},
                    {"session_id", session.session_id},
                    {"image", cmd.image.string()},
                    {"output", cmd.out.string()},
                    {"script", render_instructions(instructions)},
                    {"config", session.config},
                    {"steps", std::move(steps)}};
        std::ofstream(report_path) << report.dump(2) << "\n";

        int code = kExitOk;
        for (std::size_t i = 0; i < session.steps.size(); ++i) {
            auto const& step = session.steps[i];
            if (step.status == StepStatus::failed) {
                err << "error: step " << i + 1 << ": " << step.error << "\n";
                return kExitFailure;
            }
            if (step.status == StepStatus::skipped_no_match) {
                err << "warning: step " << i + 1 << ": no segment matched '" << step.instruction.source_prompt
                    << "', step skipped\n";
                code = kExitSkipped;
            }
        }
        return code;
    } catch (ParseError const& e) {
        err << "error: script syntax: " << e.what() << "\n";
    } catch (std::exception const& e) {
        err << "error: " << stage << ": " << e.what() << "\n";
    }
    return kExitFailure;
}

int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Text-guided region editing: segment, rank against a prompt, inpaint."};
    app.require_subcommand(1);

    EditCommand edit;
    std::string image, out_path;
    std::string script, script_file, stack, config, steps_dir, report;
    int64_t seed = 0;
    auto* edit_cmd = app.add_subcommand("edit", "Run an edit script on an image");
    edit_cmd->add_option("--image", image, "Input PNG")->required();
    auto* script_opt = edit_cmd->add_option("--script", script, "Edit script text");
    auto* script_file_opt = edit_cmd->add_option("--script-file", script_file, "File containing the edit script");
    script_opt->excludes(script_file_opt);
    auto* stack_opt = edit_cmd->add_option("--stack", stack, "Backend stack id");
    auto* config_opt = edit_cmd->add_option("--config", config, "PipelineConfig JSON file");
    edit_cmd->add_option("--out", out_path, "Final PNG")->required();
    auto* steps_opt = edit_cmd->add_option("--steps-dir", steps_dir, "Directory for per-step PNGs");
    auto* report_opt = edit_cmd->add_option("--report", report, "Session report JSON path");
    auto* seed_opt = edit_cmd->add_option("--seed", seed, "Base seed");

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP editing service");
    serve_cmd->add_option("--host", host, "Listen address");
    serve_cmd->add_option("--port", port, "Listen port");

    std::string role;
    int backend_port = 8101;
    auto* backend_cmd = app.add_subcommand("serve-backend", "Serve one reference backend over the model protocol");
    backend_cmd->add_option("--role", role, "segmenter | scorer | inpainter")
        ->required()
        ->check(CLI::IsMember({"segmenter", "scorer", "inpainter"}));
    backend_cmd->add_option("--host", host, "Listen address");
    backend_cmd->add_option("--port", backend_port, "Listen port");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitFailure;
    }

    if (edit_cmd->parsed()) {
        if (!*script_opt && !*script_file_opt) {
            err << "error: one of --script or --script-file is required\n";
            return kExitFailure;
        }
        edit.image = image;
        edit.out = out_path;
        if (*script_opt) edit.script = script;
        if (*script_file_opt) edit.script_file = script_file;
        if (*stack_opt) edit.stack = stack;
        if (*config_opt) edit.config = config;
        if (*steps_opt) edit.steps_dir = steps_dir;
        if (*report_opt) edit.report = report;
        if (*seed_opt) edit.seed = seed;
        return run_edit_command(edit, err);
    }

    try {
        if (serve_cmd->parsed()) {
            EditService service(BackendRegistry::from_environment(), SessionStore::from_environment());
            HttpServer server(service);
            server.bind(host, port);
            out << "serving on " << server.url() << "\n" << std::flush;
            server.listen();
            return kExitOk;
        }
        std::unique_ptr<BackendServer> server;
        switch (role_from_string(role)) {
        case Role::segmenter:
            server = std::make_unique<BackendServer>(std::shared_ptr<Segmenter const>(std::make_shared<ReferenceSegmenter>()));
            break;
        case Role::scorer:
            server = std::make_unique<BackendServer>(std::shared_ptr<Scorer const>(std::make_shared<ReferenceScorer>()));
            break;
        case Role::inpainter:
            server = std::make_unique<BackendServer>(std::shared_ptr<Inpainter const>(std::make_shared<ReferenceInpainter>()));
            break;
        }
        server->bind(host, backend_port);
        out << "serving reference " << role << " on " << server->url() << "\n" << std::flush;
        server->listen();
        return kExitOk;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace segedit
