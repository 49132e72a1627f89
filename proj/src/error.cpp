#include "lsw/error.hpp"

namespace lsw {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "configuration error";
    case ErrorKind::data: return "data error";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::range: return "range error";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::numerical: return "numerical error";
  }
  return "error";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::data: return 3;
    case ErrorKind::io: return 4;
    case ErrorKind::numerical: return 5;
    case ErrorKind::domain: return 6;
    case ErrorKind::range: return 7;
  }
  return 1;
}

}  // namespace lsw
