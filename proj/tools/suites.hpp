#pragma once

#include <string>
#include <vector>

namespace ajchains::suites {

struct RunConfig {
    double tol = 1e-6;
    int budget = 12;  // refinement rounds for the divergence probe
    bool flip_eps = false;
    int threads = 0;  // 0: AJCHAINS_THREADS
    int polylog_convention = 0;  // filled in by validate()

    void validate();
};

struct Check {
    int criterion = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id = 0;
    std::string title;
    double time_limit = 0;  // seconds, 0 for none
};

const std::vector<Criterion>& criteria();
std::vector<Check> run_criterion(int id, const RunConfig& cfg);

struct CriterionResult {
    Criterion criterion;
    std::vector<Check> checks;
    double seconds = 0;
    bool pass() const;
};

// criteria run concurrently, up to the thread count at a time
std::vector<CriterionResult> run_all(const RunConfig& cfg);

}  // namespace ajchains::suites
