#ifndef LERW_ERRORS_HPP
#define LERW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lerw {

// Violated preconditions (bad inputs, unusable configurations). The CLI maps
// these to exit code 3.
class PreconditionError : public std::runtime_error {
  public:
    explicit PreconditionError(const std::string& msg)
        : std::runtime_error(msg) {}
};

// Internal defects: states the implementation promises never to reach.
// The CLI maps these to exit code 4.
class DefectError : public std::runtime_error {
  public:
    explicit DefectError(const std::string& msg) : std::runtime_error(msg) {}
};

class DomainTooFine : public PreconditionError {
  public:
    explicit DomainTooFine(const std::string& msg) : PreconditionError(msg) {}
};

class SupportMismatch : public PreconditionError {
  public:
    explicit SupportMismatch(const std::string& msg) : PreconditionError(msg) {}
};

class SingularAtOrigin : public PreconditionError {
  public:
    explicit SingularAtOrigin(const std::string& msg)
        : PreconditionError(msg) {}
};

class InsufficientHits : public PreconditionError {
  public:
    explicit InsufficientHits(const std::string& msg)
        : PreconditionError(msg) {}
};

class PrefixTooRare : public PreconditionError {
  public:
    explicit PrefixTooRare(const std::string& msg) : PreconditionError(msg) {}
};

class DegenerateFit : public PreconditionError {
  public:
    explicit DegenerateFit(const std::string& msg) : PreconditionError(msg) {}
};

class StepCapExceeded : public DefectError {
  public:
    explicit StepCapExceeded(const std::string& msg) : DefectError(msg) {}
};

class StepTooLarge : public DefectError {
  public:
    explicit StepTooLarge(const std::string& msg) : DefectError(msg) {}
};

} // namespace lerw

#endif
