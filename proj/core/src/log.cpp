#include "hfstrat/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace hfstrat::logging {

namespace {

Level parse_env() {
    const char* v = std::getenv("HFSTRAT_LOG");
    if (v == nullptr) return Level::Warn;
    if (std::strcmp(v, "error") == 0) return Level::Error;
    if (std::strcmp(v, "warn") == 0) return Level::Warn;
    if (std::strcmp(v, "info") == 0) return Level::Info;
    if (std::strcmp(v, "debug") == 0) return Level::Debug;
    return Level::Warn;
}

Level g_level = parse_env();

const char* tag(Level l) {
    switch (l) {
        case Level::Error: return "error";
        case Level::Warn: return "warn";
        case Level::Info: return "info";
        case Level::Debug: return "debug";
    }
    return "?";
}

}  // namespace

Level level() { return g_level; }
void set_level(Level l) { g_level = l; }

void log(Level l, const char* fmt, ...) {
    if (static_cast<int>(l) > static_cast<int>(g_level)) return;
    std::fprintf(stderr, "[hfstrat %s] ", tag(l));
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

}  // namespace hfstrat::logging
