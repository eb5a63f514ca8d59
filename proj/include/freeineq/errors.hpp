#ifndef FREEINEQ_ERRORS_HPP
#define FREEINEQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace freeineq {

// Every failure raised by the library carries a short machine-readable code
// next to the human message, so the CLI can serialize it verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace freeineq

#endif
