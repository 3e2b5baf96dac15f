#ifndef POACERT_ERRORS_HPP
#define POACERT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace poacert {

/// Every diagnosable failure carries a stable machine-readable kind
/// (e.g. "UnknownResource", "SearchSpaceTooLarge") next to the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace poacert

#endif
