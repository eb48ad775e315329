#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexis {

enum class error_kind {
    empty_corpus,
    empty_target,
    invalid_argument,
    parse_error,
    validation_error,
    overlapping_occurrences,
    occurrence_mismatch,
    too_few_occurrences,
    invalid_candidate,
    core_infeasible,
    invalid_spec,
    io_error,
    overflow,
};

inline const char* to_string(error_kind k) {
    switch (k) {
    case error_kind::empty_corpus: return "EmptyCorpus";
    case error_kind::empty_target: return "EmptyTarget";
    case error_kind::invalid_argument: return "InvalidArgument";
    case error_kind::parse_error: return "ParseError";
    case error_kind::validation_error: return "ValidationError";
    case error_kind::overlapping_occurrences: return "OverlappingOccurrences";
    case error_kind::occurrence_mismatch: return "OccurrenceMismatch";
    case error_kind::too_few_occurrences: return "TooFewOccurrences";
    case error_kind::invalid_candidate: return "InvalidCandidate";
    case error_kind::core_infeasible: return "CoreInfeasible";
    case error_kind::invalid_spec: return "InvalidSpec";
    case error_kind::io_error: return "IOError";
    case error_kind::overflow: return "Overflow";
    }
    return "Unknown";
}

// All library failures are reported through this type; kind() lets callers
// (the CLI in particular) map failures onto exit codes without string matching.
class error : public std::runtime_error {
public:
    error(error_kind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    error_kind kind() const noexcept { return kind_; }

private:
    error_kind kind_;
};

class empty_target_error : public error {
public:
    explicit empty_target_error(std::size_t index)
        : error(error_kind::empty_target, "target " + std::to_string(index) + " has no symbols"),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

} // namespace lexis
