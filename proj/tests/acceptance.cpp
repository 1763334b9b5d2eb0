#include <cstdio>

#include "suites.hpp"

using namespace ajchains::suites;

int main() {
    RunConfig cfg;
    cfg.validate();
    bool all = true;
    for (const auto& r : run_all(cfg)) {
        bool pass = r.pass();
        all = all && pass;
        std::printf("criterion %d: %s  %s (%.1f s)\n", r.criterion.id, pass ? "PASS" : "FAIL", r.criterion.title.c_str(),
                    r.seconds);
        for (const auto& c : r.checks)
            if (!c.pass) std::printf("    failed: %s, %s\n", c.name.c_str(), c.detail.c_str());
        if (r.criterion.time_limit > 0 && r.seconds >= r.criterion.time_limit)
            std::printf("    over the %.0f s limit\n", r.criterion.time_limit);
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
