// kappa CLI: expression front end and verification-suite runner.
#include <cstdio>

int main() {
  std::puts("kappa: placeholder, CLI lands with the verify module");
  return 2;
}
