#include "evospec/errors.hpp"

namespace evospec {

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::Config:
            return 2;
        case ErrorKind::ResourceLimit:
            return 3;
        case ErrorKind::Numeric:
            return 4;
    }
    return 1;
}

}  // namespace evospec
