#pragma once

namespace petsim::cli {

/// Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 timeout.
int main(int argc, char** argv);

}  // namespace petsim::cli
