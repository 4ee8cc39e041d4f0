#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace quayside::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kNumeric = 2,
    kStationarity = 3,
};

// Runs the quayside command line. argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace quayside::cli
