// Named commands over model files, shared by the command-line tool and the Python module.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gradedq/model_io.hpp"

namespace gradedq {

// bad command, construction or example name, or a model of the wrong kind
struct UsageError : Error {
    using Error::Error;
};

struct RunOptions {
    std::optional<int> arity;  // cap on morphism and action checks; never raises the natural arity
    std::uint64_t seed = 1;    // for random-action
    std::string output;        // decompose, assemble, build linearize: write the produced model here
};

const std::vector<std::string>& commands();       // check-q, decompose, ...
const std::vector<std::string>& constructions();  // arguments of build

// sigma(k), derivative side, decalage; appended to every finished report
std::vector<std::string> sign_ledger();

std::optional<ModelFile> example_model(const std::string& name, std::uint64_t seed = 1);

// `construction` is only read by "build". A field that is not an action yields a failed report with its witness.
CheckReport run_command(const std::string& command, const ModelFile& m, const RunOptions& o = {},
                        const std::string& construction = "");
CheckReport run_example(const std::string& name, const RunOptions& o = {});

// adds the sign ledger, a residual naming the failed verdicts when none is present, and the wall time
CheckReport finalize_report(CheckReport rep, std::optional<double> seconds = std::nullopt);

}  // namespace gradedq
