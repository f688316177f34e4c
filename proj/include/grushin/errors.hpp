#pragma once

#include <stdexcept>
#include <string>

namespace grushin {

enum class ErrorCode {
    BasePointOutsideSpace,
    CutLocusPoint,
    NotInImage,
    DomainError,
    SingularLocus,
    BadDimension,
    NoMeeting,
    Unreachable,
    InvalidArgument,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::BasePointOutsideSpace: return "BasePointOutsideSpace";
        case ErrorCode::CutLocusPoint: return "CutLocusPoint";
        case ErrorCode::NotInImage: return "NotInImage";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::SingularLocus: return "SingularLocus";
        case ErrorCode::BadDimension: return "BadDimension";
        case ErrorCode::NoMeeting: return "NoMeeting";
        case ErrorCode::Unreachable: return "Unreachable";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace grushin
