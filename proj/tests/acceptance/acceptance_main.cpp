// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: acceptance [--quick] [--json FILE] [--tolerance name=value]...
// Exit status 0 iff all criteria pass.

#include <cstring>
#include <fstream>
#include <iostream>

#include "app/acceptance.hpp"
#include "app/run_spec.hpp"

int main(int argc, char** argv) {
    tzone::app::AcceptanceOptions opts;
    const char* json_path = nullptr;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            opts.quick = true;
        } else if (std::strcmp(argv[i], "--json") == 0 && i + 1 < argc) {
            json_path = argv[++i];
        } else if (std::strcmp(argv[i], "--tolerance") == 0 && i + 1 < argc) {
            opts.tolerance_overrides.insert(tzone::app::parse_override(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--quick] [--json FILE] [--tolerance name=value]...\n";
            return 2;
        }
    }

    const auto results = tzone::app::run_acceptance(opts, [](const tzone::app::CriterionResult& r) {
        std::cout << tzone::app::format_result_line(r) << std::endl;
    });
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (failed == 0 ? "ALL PASS" : "FAILED") << ": " << results.size() - failed << "/" << results.size()
              << " criteria" << (opts.quick ? " (quick)" : "") << "\n";
    if (json_path) std::ofstream(json_path) << tzone::app::results_json(results);
    return failed == 0 ? 0 : 1;
}
