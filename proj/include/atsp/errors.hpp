#ifndef ATSP_ERRORS_HPP
#define ATSP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace atsp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidAlpha : Error {
    using Error::Error;
};
struct InvalidFamily : Error {
    using Error::Error;
};
struct SelfLoopQuery : Error {
    using Error::Error;
};
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line)
        : Error("parse error at line " + std::to_string(line) + ": " + msg), line(line) {}
    std::size_t line;
};
struct UnboundedTransform : Error {
    using Error::Error;
};
struct NoPerfectMatching : Error {
    using Error::Error;
};
struct TooLarge : Error {
    using Error::Error;
};
struct NoPatchingPair : Error {
    using Error::Error;
};
struct StaleMove : Error {
    using Error::Error;
};
struct CycleTooSmall : Error {
    using Error::Error;
};
struct RepairFailed : Error {
    using Error::Error;
};
struct Unpatchable : Error {
    using Error::Error;
};

} // namespace atsp

#endif
