#pragma once

#include <string>
#include <vector>

#include "gfft/verify.hpp"

namespace gfft::cli {

/// Entry point behind the gfft binary. Exit codes: 0 all checks passed,
/// 1 usage or configuration error, 2 at least one verification failed.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

/// Locale-independent shortest-roundtrip float formatting used by every CSV
/// writer; identical runs produce byte-identical files.
std::string format_double(double v);

void write_verify_csv(const std::string& path, const std::vector<VerifyReport>& reports);

/// Static SVG line chart of residual-vs-n rows (log10 scale on y).
void write_residual_svg(const std::string& path, const std::vector<VerifyReport>& reports,
                        const std::string& title);

}  // namespace gfft::cli
