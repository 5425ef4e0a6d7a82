#pragma once

#include <string>

namespace semidiscrete {

/// Shortest decimal string that parses back to the same double.
std::string shortest(double value);

/// 17 significant digits (%.17g); used for every CSV value so that equal
/// inputs give byte-identical files.
std::string digits17(double value);

}  // namespace semidiscrete
