#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace drex {

// Write-temp-then-rename; the target either keeps its old content or gets the
// full new content, never a partial file.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

// %.12g — round-trips well under 1e-9 for PDSI-scale magnitudes.
std::string fmt_g(double v);

// %.*f fixed formatting
std::string fmt_f(double v, int decimals);

}  // namespace drex
