#include <cstdio>
int main(){ std::printf("pending\n"); return 1; }
