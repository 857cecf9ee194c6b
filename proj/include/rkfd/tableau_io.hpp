#pragma once

#include "rkfd/tableau.hpp"

#include <filesystem>
#include <string_view>
#include <variant>

namespace rkfd {

using AnyTableau = std::variant<RkfdTableau, RkTableau>;

/// Parses a rational string "p/q" (or a bare integer "p") with optional sign.
/// |p| and |q| must not exceed 2^53 so a single IEEE division gives the
/// correctly rounded value.  Throws std::invalid_argument otherwise.
double parse_rational(std::string_view text);

/// Reads a tableau file of either kind ("rkfd" or "rk").
AnyTableau load_any_tableau(const std::filesystem::path& path);
AnyTableau parse_any_tableau(std::string_view json_text, const std::string& source = "<string>");

/// Reads an RKFD tableau file; an "rk" file is rejected.
RkfdTableau load_tableau(const std::filesystem::path& path);
RkTableau load_rk_tableau(const std::filesystem::path& path);

/// Writes JSON with shortest round-trip numbers, so save/load is bit-exact.
void save_tableau(const RkfdTableau& tableau, const std::filesystem::path& path);
void save_tableau(const RkTableau& tableau, const std::filesystem::path& path);

std::string to_json(const RkfdTableau& tableau);
std::string to_json(const RkTableau& tableau);

}  // namespace rkfd
