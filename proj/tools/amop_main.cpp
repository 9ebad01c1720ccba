#include <cstdio>
int main() { std::puts("amop placeholder"); return 0; }
