#include <cstdio>

int main() {
    std::puts("skein: subcommands not wired up yet");
    return 2;
}
