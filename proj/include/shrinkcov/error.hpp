#pragma once

#include <stdexcept>
#include <string>

namespace shrinkcov {

/// Broad failure category. The CLI maps these onto exit codes 2, 3 and 4.
enum class ErrorKind { config, data, numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error config_error(const std::string& what) { return {ErrorKind::config, what}; }
inline Error data_error(const std::string& what) { return {ErrorKind::data, what}; }
inline Error numeric_error(const std::string& what) { return {ErrorKind::numeric, what}; }

inline int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::data: return 3;
    case ErrorKind::numeric: return 4;
    }
    return 1;
}

} // namespace shrinkcov
