#include <cstdio>

int main() {
  std::puts("bouss cli placeholder");
  return 0;
}
