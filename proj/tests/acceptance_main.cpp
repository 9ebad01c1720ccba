#include "amop/acceptance.hpp"

#include <cstdio>
#include <cstring>
#include <string>

int main(int argc, char** argv) {
    amop::io::RunConfig cfg;
    int criterion = 0; // 0: all
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) {
            criterion = std::atoi(argv[++i]);
        } else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) {
            cfg.seed = std::strtoull(argv[++i], nullptr, 10);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion K] [--seed S]\n", argv[0]);
            return 2;
        }
    }
    cfg.validate();

    std::vector<amop::acceptance::CriterionResult> results;
    try {
        if (criterion > 0)
            results.push_back(amop::acceptance::run_criterion(criterion, cfg));
        else
            results = amop::acceptance::run_suite(cfg, false);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance run failed: %s\n", e.what());
        return 3;
    }
    std::fputs(amop::acceptance::format_report(results).c_str(), stdout);
    for (const auto& r : results)
        if (!r.pass) return 1;
    return 0;
}
