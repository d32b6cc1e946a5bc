// Regenerates the synthetic 85-region fixture. The seed comes from --seed,
// else SHADOW_SEED, else the built-in default.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "shadow/fixture.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write the synthetic regional fixture as CSV", "make_fixture"};
    std::string out = "fixtures/synthetic_85.csv";
    std::optional<std::uint64_t> seed;
    app.add_option("--out", out, "Output CSV path");
    app.add_option("--seed", seed, "RNG seed");
    CLI11_PARSE(app, argc, argv);

    shadow::FixtureOptions options;
    if (seed) {
        options.seed = *seed;
    } else if (const char* env = std::getenv("SHADOW_SEED")) {
        try {
            options.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: SHADOW_SEED must be an integer\n";
            return 64;
        }
    }
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) {
        std::cerr << "error: cannot write '" << out << "'\n";
        return 74;
    }
    file << shadow::to_csv(shadow::make_synthetic_dataset(options));
    return file ? 0 : 74;
}
