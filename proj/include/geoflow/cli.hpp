#pragma once

namespace geoflow::cli {

/// Exit codes: 0 success, 1 usage or config error, 2 runtime flow error, 3 corrupt input.
int main(int argc, char** argv);

}  // namespace geoflow::cli
