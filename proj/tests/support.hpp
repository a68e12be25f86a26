#pragma once

#include "drm/error.hpp"

#include <doctest.h>

namespace drm::test {

/// Kind of the drm::Error thrown by `fn`; fails the test if nothing is thrown.
template <class F>
ErrorKind kind_of(F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected drm::Error");
    return ErrorKind::io;
}

}  // namespace drm::test
