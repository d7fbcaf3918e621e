#pragma once

#include <stdexcept>
#include <string>

namespace dtw {

enum class ErrorKind {
    DegenerateD,
    NotSquarefree,
    FieldMismatch,
    DivisionByZero,
    ZeroElement,
    InfiniteUnitGroup,
    UnsupportedField,
    NotPrime,
    Singular,
    SingularParameter,
    ZeroT,
    ZeroU,
    ZeroD,
    NotShortForm,
    BadPair,
    BadFamily,
    UnsupportedP,
    ClassNumberNotOne,
    InvalidResidue,
    IncompatiblePrimes,
    Internal,
    Parse,
};

inline const char* kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::DegenerateD: return "DegenerateD";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::InfiniteUnitGroup: return "InfiniteUnitGroup";
    case ErrorKind::UnsupportedField: return "UnsupportedField";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::SingularParameter: return "SingularParameter";
    case ErrorKind::ZeroT: return "ZeroT";
    case ErrorKind::ZeroU: return "ZeroU";
    case ErrorKind::ZeroD: return "ZeroD";
    case ErrorKind::NotShortForm: return "NotShortForm";
    case ErrorKind::BadPair: return "BadPair";
    case ErrorKind::BadFamily: return "BadFamily";
    case ErrorKind::UnsupportedP: return "UnsupportedP";
    case ErrorKind::ClassNumberNotOne: return "ClassNumberNotOne";
    case ErrorKind::InvalidResidue: return "InvalidResidue";
    case ErrorKind::IncompatiblePrimes: return "IncompatiblePrimes";
    case ErrorKind::Internal: return "Internal";
    case ErrorKind::Parse: return "Parse";
    }
    return "?";
}

class Error : public std::runtime_error {
    ErrorKind kind_;

  public:
    Error(ErrorKind k, const std::string& what)
        : std::runtime_error(std::string(kind_name(k)) + ": " + what), kind_(k) {}
    ErrorKind kind() const { return kind_; }
};

} // namespace dtw
