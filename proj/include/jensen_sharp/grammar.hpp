#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jensen_sharp/distributions.hpp"
#include "jensen_sharp/functions.hpp"

namespace jsharp::grammar {

/// `name:key=val,key=val` split into its parts.
struct Spec {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
};

Spec split_spec(std::string_view text);

/// Decimal number; "inf" and "-inf" only when `allow_infinite`.
double parse_real(std::string_view token, bool allow_infinite = false);

/// "exp:t=0.5", "power:p=-1", "neglog", "quad:a=1,b=0,c=0"
CatalogKind parse_function(std::string_view text);
std::string format_function(const CatalogKind& kind);

/// "normal:mu=0,sigma=1", "exp:rate=1", "uniform:lo=10,hi=100", "file:path"
Distribution parse_distribution(std::string_view text);

/// Comma-separated decimal list, e.g. "-0.431,0.431".
std::vector<double> parse_real_list(std::string_view text);

}  // namespace jsharp::grammar
