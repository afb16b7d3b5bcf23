#ifndef GRANTMINE_ERROR_H_
#define GRANTMINE_ERROR_H_

#include <stdexcept>

namespace grantmine {

// Base class for every error raised by the library. Messages are single-line
// so the CLI can print them verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace grantmine

#endif  // GRANTMINE_ERROR_H_
