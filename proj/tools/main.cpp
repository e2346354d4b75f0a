#include <iostream>

int main() {
  std::cout << "eiscong: CLI under construction\n";
  return 0;
}
