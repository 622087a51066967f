#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "amplicap/channel.hpp"

namespace amplicap::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailed = 1,
    kUsage = 2,
    kDegenerateChannel = 3,
    kSolverFailure = 4,
    kIoFailure = 5,
};

/// Entry point shared by the `amplicap` binary and the tests. `args[0]` is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Channel file: one "i,j,re,im" row per entry (0-based indices), optional
/// header line, '#' comments allowed. All N^2 entries must be present.
ComplexChannel read_channel_file(const std::string& path, int n_antennas);

}  // namespace amplicap::cli
