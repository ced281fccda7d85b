#pragma once

#include <string>

namespace polyton {

/// Pass/fail with a description of the first violated condition.
struct Verdict {
    bool ok = true;
    std::string reason;

    explicit operator bool() const { return ok; }
    static Verdict pass() { return {}; }
    static Verdict fail(std::string why) { return {false, std::move(why)}; }
};

}  // namespace polyton
