#pragma once

#include "amop/io.hpp"

#include <string>
#include <vector>

namespace amop::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool quick = false;
    double seconds = 0.0;
    std::vector<std::string> detail;
};

CriterionResult run_criterion(int id, const io::RunConfig& cfg);

// ids: all 11 criteria, or the quick subset (moments, intertwining,
// Wronskian, symmetries)
std::vector<CriterionResult> run_suite(const io::RunConfig& cfg, bool quick_only);

std::string format_report(const std::vector<CriterionResult>& results);

} // namespace amop::acceptance
