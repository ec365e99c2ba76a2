// cli.hpp - subcommand dispatch for the ionnode tool
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ionnode::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Raised when a computation produced something unusable (NaN, failed fit).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// args excludes the program name. Data goes to --out or to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

const char* version();

}  // namespace ionnode::cli
