#include <doctest.h>
TEST_SUITE_BEGIN("objective");
TEST_SUITE_END();
