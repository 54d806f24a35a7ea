#ifndef SELFSIM_CLI_HPP
#define SELFSIM_CLI_HPP

#include <string>
#include <vector>

namespace selfsim::cli {

struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Exit codes: 0 success, 1 validation/computation failure, 2 usage error.
RunResult run(const std::vector<std::string>& args);

int main_entry(int argc, char** argv);

} // namespace selfsim::cli

#endif
