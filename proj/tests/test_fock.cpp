#include <doctest.h>

TEST_SUITE_BEGIN("fock");

TEST_SUITE_END();
