#pragma once

#include <stdexcept>
#include <string>

namespace reeb {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConstraintViolation : public Error { public: using Error::Error; };
class PreconditionError   : public Error { public: using Error::Error; };
class IntegrationError    : public Error { public: using Error::Error; };
class DegeneratePathError : public Error { public: using Error::Error; };
class ResolutionError     : public Error { public: using Error::Error; };
class LiftDiscontinuity   : public Error { public: using Error::Error; };
class NotASectionError    : public Error { public: using Error::Error; };
class ConvergenceError    : public Error { public: using Error::Error; };
class ConfigError         : public Error { public: using Error::Error; };

} // namespace reeb
