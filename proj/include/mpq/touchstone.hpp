#pragma once

#include "mpq/netparam.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace mpq {

enum class DataFormat { ri, ma, db };

/// Touchstone v1 reader. `ports` is the N of the .sNp extension. The option
/// line defaults to "# GHz S MA R 50" when absent. Z and Y data are stored
/// normalised to R in the file and returned in ohm / siemens.
MultiportNetwork parse_touchstone(std::string_view text, int ports);

/// Reads `path`, taking the port count from its .sNp extension.
MultiportNetwork read_touchstone(const std::filesystem::path& path);

/// Port count encoded in a .sNp / .yNp / .zNp style extension, or 0.
int ports_from_extension(const std::filesystem::path& path);

/// Writes in the network's own kind and frequency unit. Values are printed
/// with 17 significant digits so that parse(write(net)) reproduces `net`
/// (to the last bit for S data; Z and Y pass through the R normalisation).
std::string write_touchstone(const MultiportNetwork& net, DataFormat format = DataFormat::ri);

/// "omega,<X>11_re,<X>11_im,..." one row per frequency, row-major entries.
std::string write_csv(const MultiportNetwork& net);

/// Shortest-round-trip style formatting used by every text writer here.
std::string format_double(double v);

} // namespace mpq
