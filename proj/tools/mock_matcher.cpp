// Reference external-matcher plugin: reads one image path and prints its
// embedding as whitespace-separated reals, which is the process-level
// contract `morph evaluate` expects from any external FRS wrapper.
//
// Usage: mock_matcher [--seed N] <image.png>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "morphkit/eval/matcher.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 7;
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--seed" && i + 1 < argc) {
            seed = std::strtoull(argv[++i], nullptr, 10);
        } else {
            path = arg;
        }
    }
    if (path.empty()) {
        std::fprintf(stderr, "usage: mock_matcher [--seed N] <image>\n");
        return 2;
    }
    try {
        const auto matcher = morphkit::eval::toy_matcher(seed);
        const auto emb = matcher->embed_path(path);
        for (std::size_t i = 0; i < emb.size(); ++i)
            std::printf("%.17g%c", emb[i], i + 1 == emb.size() ? '\n' : ' ');
    } catch (const std::exception& e) {
        std::fprintf(stderr, "mock_matcher: %s\n", e.what());
        return 1;
    }
    return 0;
}
