#include <cstdio>

int main() {
    std::puts("oseenlab: cli not wired yet");
    return 0;
}
