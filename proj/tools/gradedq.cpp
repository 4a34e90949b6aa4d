// gradedq: load model files, run checks and constructions, print reports.
// Exit status: 0 all checks pass, 1 some check fails, 2 bad input or usage.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "gradedq/examples.hpp"
#include "gradedq/runner.hpp"

using namespace gradedq;
using nlohmann::json;

namespace {

std::optional<int> env_arity() {
    const char* env = std::getenv("GRADEDQ_MAX_ARITY");
    if (!env) return std::nullopt;
    try {
        std::size_t used = 0;
        int v = std::stoi(env, &used);
        if (used != std::string(env).size() || v < 0) throw std::invalid_argument(env);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError(std::string("GRADEDQ_MAX_ARITY must be a non-negative integer, got '") + env + "'");
    }
}

int emit(const CheckReport& rep, bool as_json) {
    if (as_json) std::cout << to_json(rep).dump(2) << "\n";
    else std::cout << to_text(rep);
    return rep.passed ? 0 : 1;
}

int list_examples(bool as_json) {
    auto cat = examples::catalog();
    if (as_json) {
        json a = json::array();
        for (const auto& e : cat) a.push_back({{"name", e.name}, {"construction", e.construction}, {"description", e.description}});
        std::cout << a.dump(2) << "\n";
    } else {
        for (const auto& e : cat) std::cout << e.name << "  [" << e.construction << "]  " << e.description << "\n";
    }
    return 0;
}

void print_issues(const ModelError& e, bool as_json) {
    if (as_json) {
        json a = json::array();
        for (const auto& i : e.issues()) a.push_back({{"pointer", i.pointer}, {"message", i.message}});
        std::cout << json{{"error", "invalid model"}, {"issues", a}}.dump(2) << "\n";
    }
    std::cerr << "gradedq: " << e.what() << "\n";
}

std::string joined(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Checks and constructions for graded Q-manifolds and their actions"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false, emit_model = false;
    std::optional<int> arity;
    RunOptions opts;
    std::string model_path, name, construction;
    app.add_flag("--json", as_json, "print the report as JSON");
    app.add_option("--arity", arity, "cap on the arity of morphism and action checks (default: GRADEDQ_MAX_ARITY)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", opts.seed, "seed for randomly generated instances");
    app.add_option("-o,--output", opts.output, "write the produced model to this file");

    std::vector<std::pair<std::string, CLI::App*>> model_commands;
    auto model_cmd = [&](const char* cmd, const char* help) {
        auto* s = app.add_subcommand(cmd, help);
        s->add_option("model", model_path, "model file")->required();
        model_commands.emplace_back(cmd, s);
    };
    model_cmd("check-q", "is the (built) field homological");
    model_cmd("decompose", "split a qfield into action components");
    model_cmd("assemble", "rebuild the total field of an action model");
    model_cmd("check-action", "check the action equations");
    model_cmd("roundtrip", "decompose and assemble back");
    model_cmd("check-morphism", "check the classical or curved morphism of a model");
    model_cmd("bidegree", "split the field by (xi, eta) bidegree");
    auto* build = app.add_subcommand("build", "run a construction on a model");
    build->add_option("construction", construction, "one of: " + joined(constructions()))->required();
    build->add_option("model", model_path, "model file")->required();
    auto* ex = app.add_subcommand("example", "run a bundled example");
    ex->add_option("name", name, "example name, see 'list'")->required();
    ex->add_flag("--emit-model", emit_model, "print the example's model file instead of checking it");
    auto* list = app.add_subcommand("list", "list the bundled examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    try {
        opts.arity = arity ? arity : env_arity();
        if (list->parsed()) return list_examples(as_json);
        if (ex->parsed()) {
            if (emit_model) {
                auto m = example_model(name, opts.seed);
                if (!m) throw UsageError("unknown example '" + name + "'; run 'gradedq list'");
                std::cout << model_to_json(*m).dump(2) << "\n";
                return 0;
            }
            CheckReport rep = run_example(name, opts);
            return emit(finalize_report(rep, elapsed()), as_json);
        }
        ModelFile m = load_model(model_path);
        std::string command = build->parsed() ? "build" : "";
        for (const auto& [cmd, sub] : model_commands)
            if (sub->parsed()) command = cmd;
        CheckReport rep = run_command(command, m, opts, construction);
        return emit(finalize_report(rep, elapsed()), as_json);
    } catch (const ModelError& e) {
        print_issues(e, as_json);
        return 2;
    } catch (const Error& e) {
        std::cerr << "gradedq: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "gradedq: internal error: " << e.what() << "\n";
        return 2;
    }
}
