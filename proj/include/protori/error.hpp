#pragma once

#include <stdexcept>
#include <string>

namespace protori {

// Stable error codes; the CLI maps these onto structured error verdicts.
enum class errc {
    zero_input,
    mixed_radix_mismatch,
    insufficient_precision,
    not_in_dual,
    dimension_mismatch,
    not_a_member,
    zero_vector,
    ill_formed_hom,
    composition_mismatch,
    not_idempotent,
    enumeration_limit,
    parse_error,
    semantic_error,
    internal,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::zero_input:             return "zero_input";
    case errc::mixed_radix_mismatch:   return "mixed_radix_mismatch";
    case errc::insufficient_precision: return "insufficient_precision";
    case errc::not_in_dual:            return "not_in_dual";
    case errc::dimension_mismatch:     return "dimension_mismatch";
    case errc::not_a_member:           return "not_a_member";
    case errc::zero_vector:            return "zero_vector";
    case errc::ill_formed_hom:         return "ill_formed_hom";
    case errc::composition_mismatch:   return "composition_mismatch";
    case errc::not_idempotent:         return "not_idempotent";
    case errc::enumeration_limit:      return "enumeration_limit";
    case errc::parse_error:            return "parse_error";
    case errc::semantic_error:         return "semantic_error";
    case errc::internal:               return "internal";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    // Parse errors carry a source location (1-based; 0 = not applicable).
    Error(errc code, std::string message, int line, int column)
        : std::runtime_error(std::move(message)), code_(code), line_(line), column_(column) {}

    errc code() const noexcept { return code_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    errc code_;
    int line_ = 0;
    int column_ = 0;
};

} // namespace protori
