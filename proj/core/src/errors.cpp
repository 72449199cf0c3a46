#include "rtdiff/errors.hpp"

#include <utility>

namespace rtdiff {

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

}  // namespace rtdiff
