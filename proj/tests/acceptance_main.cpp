// Acceptance suite: one pass/fail line per criterion. Placeholder while the
// closed-loop tuning lands; each criterion is filled in below.
#include <cstdio>

int main() {
    std::printf("acceptance: pending\n");
    return 1;
}
