#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "crossing/dist.hpp"

namespace crossing::cli {

/// Bad flags, bad model files, bad values. Maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decimal or rational literal ("0.6", "3/5", "1e-3").
double parse_number(std::string_view text);

/// Model files are "key = value" lines; '#' starts a comment.
///
///   T.family = erlang       # exponential | erlang | pareto
///   T.rate   = 8/5
///   T.shape  = 2
///   Y.family = exponential
///   Y.rate   = 3/5
///
/// T1.* describes a delayed first interval and may be omitted. Pareto laws
/// take a and b. Any other key is rejected.
RenewalModel parse_model(std::string_view text);
RenewalModel load_model(const std::filesystem::path& path);

/// 16 hex digits, FNV-1a of the model description.
std::string model_hash(const RenewalModel& model);
std::string hash_text(std::string_view text);

}  // namespace crossing::cli
