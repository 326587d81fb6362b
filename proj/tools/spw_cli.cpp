// Experiment driver over the spw C API. Flags are generic `--key value`
// config overrides plus a few short aliases; precedence is command line over
// --config file over built-in defaults.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "spw.h"

namespace {

struct Flag {
    std::string key;
    std::string value;
};

const char* kUsage =
    "usage: spw <subcommand> [--config PATH] [--key value ...]\n"
    "\n"
    "subcommands:\n"
    "  generate    write expert/behavior trajectories and preference files per seed\n"
    "  train       fit the configured method's reward function per seed\n"
    "  evaluate    score checkpoints: success rate, KL, correlations, accuracy\n"
    "  ablate-tau  sweep the softmax temperature grid and tabulate success rates\n"
    "  compare     run a list of methods end to end and emit a comparison table\n"
    "\n"
    "common flags (aliases for config keys):\n"
    "  --config PATH   load a key = value config file\n"
    "  --task NAME     grid-nav | point-goal\n"
    "  --method NAME   spw | mr | seabo | drex | rd\n"
    "  --tau VALUE     softmax temperature (a number, or 'inf' for uniform)\n"
    "  --prefs N       number of preference pairs (n_preferences)\n"
    "  --seeds LIST    comma-separated seeds, e.g. 0,1,2,3,4\n"
    "  --out DIR       output directory (outdir)\n"
    "\n"
    "any other --key value pair overrides the config key of the same name,\n"
    "e.g. --train.epochs 120 --noise 0.4 --eval.episodes 500\n"
    "\n"
    "examples:\n"
    "  spw generate --task grid-nav --seeds 0,1,2,3,4\n"
    "  spw train --task grid-nav --method spw --tau 0.7\n"
    "  spw evaluate --task grid-nav --method spw\n"
    "  spw compare --task point-goal --compare.methods spw,mr,seabo\n";

std::string alias_to_key(const std::string& flag) {
    if (flag == "task") return "task";
    if (flag == "method") return "method";
    if (flag == "tau") return "tau";
    if (flag == "prefs") return "n_preferences";
    if (flag == "seeds") return "seeds";
    if (flag == "out") return "outdir";
    return flag;  // generic dotted config key
}

int fail_with_error(spw_status status) {
    std::fprintf(stderr, "error: %s\n", spw_last_error());
    return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fputs(kUsage, stderr);
        return 2;
    }
    const std::string command = argv[1];
    if (command == "-h" || command == "--help" || command == "help") {
        std::fputs(kUsage, stdout);
        return 0;
    }
    if (command == "--version") {
        std::printf("%s\n", spw_version());
        return 0;
    }

    std::vector<Flag> overrides;
    std::vector<std::string> config_files;
    for (int i = 2; i < argc; i += 2) {
        const char* arg = argv[i];
        if (std::strncmp(arg, "--", 2) != 0) {
            std::fprintf(stderr, "error: expected a --flag, got '%s'\n%s", arg, kUsage);
            return 2;
        }
        if (i + 1 >= argc) {
            std::fprintf(stderr, "error: flag '%s' is missing a value\n", arg);
            return 2;
        }
        const std::string name = arg + 2;
        if (name == "config")
            config_files.push_back(argv[i + 1]);
        else
            overrides.push_back(Flag{alias_to_key(name), argv[i + 1]});
    }

    spw_config* config = spw_config_new();
    if (!config) {
        std::fputs("error: out of memory\n", stderr);
        return 1;
    }

    spw_status status = SPW_OK;
    for (const auto& path : config_files) {
        status = spw_config_load_file(config, path.c_str());
        if (status != SPW_OK) break;
    }
    if (status == SPW_OK) {
        // command-line overrides outrank file entries
        for (const auto& flag : overrides) {
            status = spw_config_set(config, flag.key.c_str(), flag.value.c_str());
            if (status != SPW_OK) break;
        }
    }

    if (status == SPW_OK) {
        if (command == "generate")
            status = spw_run_generate(config);
        else if (command == "train")
            status = spw_run_train(config);
        else if (command == "evaluate")
            status = spw_run_evaluate(config);
        else if (command == "ablate-tau")
            status = spw_run_ablate_tau(config);
        else if (command == "compare")
            status = spw_run_compare(config);
        else {
            std::fprintf(stderr, "error: unknown subcommand '%s'\n%s", command.c_str(), kUsage);
            spw_config_free(config);
            return 2;
        }
    }

    spw_config_free(config);
    if (status != SPW_OK) return fail_with_error(status);
    return 0;
}
