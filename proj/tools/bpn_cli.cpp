#include <cstdio>
int main() { std::puts("bpn: not wired up yet"); return 0; }
