#include "log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace fincorpus::log {

namespace {

Level g_level = [] {
    const char* env = std::getenv("FCF_LOG");
    if (env == nullptr) return Level::info;
    const std::string_view v(env);
    if (v == "off" || v == "0" || v == "none") return Level::off;
    if (v == "error") return Level::error;
    if (v == "debug") return Level::debug;
    return Level::info;
}();

std::mutex g_mutex;

const char* level_name(Level lv) {
    switch (lv) {
        case Level::error: return "error";
        case Level::info: return "info";
        case Level::debug: return "debug";
        default: return "off";
    }
}

}  // namespace

Level level() { return g_level; }
void set_level(Level lv) { g_level = lv; }

void write(Level lv, std::string_view stage, std::string_view message) {
    if (static_cast<int>(lv) > static_cast<int>(g_level)) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::cerr << "level=" << level_name(lv) << " stage=" << stage << " msg=\"" << message
              << "\"\n";
}

Line::Line(Level lv, std::string_view stage)
    : enabled_(static_cast<int>(lv) <= static_cast<int>(g_level)) {
    if (enabled_) {
        buf_ << "level=" << level_name(lv) << " stage=" << stage;
    }
}

Line::~Line() {
    if (enabled_) {
        std::lock_guard<std::mutex> lock(g_mutex);
        std::cerr << buf_.str() << '\n';
    }
}

}  // namespace fincorpus::log
