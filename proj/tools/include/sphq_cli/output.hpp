#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace sphq::cli {

/// Shortest decimal that round-trips the double.
std::string fmt(double v);

/// Opens path for writing (creating parent directories); throws ConfigError on failure.
std::ofstream open_output(const std::filesystem::path& path, bool binary = false);

/// Two-column plot data "x y" with a '#' header naming the columns.
void write_dat(const std::filesystem::path& path, const std::string& xname, const std::string& yname,
               const std::vector<double>& x, const std::vector<double>& y);

/// Filesystem-safe label derived from an observable string.
std::string slug(const std::string& text);

}  // namespace sphq::cli
