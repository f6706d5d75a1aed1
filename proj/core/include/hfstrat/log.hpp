#pragma once

#include <cstdarg>

namespace hfstrat::logging {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Current verbosity, read once from HFSTRAT_LOG (error|warn|info|debug).
Level level();
void set_level(Level l);

void log(Level l, const char* fmt, ...) __attribute__((format(printf, 2, 3)));

}  // namespace hfstrat::logging

#define HFSTRAT_ERROR(...) ::hfstrat::logging::log(::hfstrat::logging::Level::Error, __VA_ARGS__)
#define HFSTRAT_WARN(...) ::hfstrat::logging::log(::hfstrat::logging::Level::Warn, __VA_ARGS__)
#define HFSTRAT_INFO(...) ::hfstrat::logging::log(::hfstrat::logging::Level::Info, __VA_ARGS__)
#define HFSTRAT_DEBUG(...) ::hfstrat::logging::log(::hfstrat::logging::Level::Debug, __VA_ARGS__)
