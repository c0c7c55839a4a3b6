#include <doctest.h>

TEST_SUITE_BEGIN("thermo");

TEST_SUITE_END();
