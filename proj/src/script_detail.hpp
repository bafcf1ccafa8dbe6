#pragma once

#include "kirby/numbers.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kirby::detail {

[[nodiscard]] std::vector<std::string> split_list(const std::string& token);
[[nodiscard]] Integer parse_integer(const std::string& s);
[[nodiscard]] int parse_small_int(const std::string& s);
[[nodiscard]] std::vector<std::vector<Rational>> parse_matrix(const std::string& s);
[[nodiscard]] std::pair<std::string, std::string> split_once(const std::string& s, char sep);

}  // namespace kirby::detail
