#pragma once

#include <sstream>
#include <string>
#include <string_view>

namespace fincorpus::log {

enum class Level : int { off = 0, error = 1, info = 2, debug = 3 };

// Current verbosity; initialized from the FCF_LOG environment variable
// (off|error|info|debug, default info).
Level level();
void set_level(Level lv);

void write(Level lv, std::string_view stage, std::string_view message);

// Structured progress line to stderr: "level=info stage=clean key=value ...".
class Line {
public:
    Line(Level lv, std::string_view stage);
    ~Line();
    template <typename T>
    Line& field(std::string_view key, const T& value) {
        if (enabled_) {
            buf_ << ' ' << key << '=' << value;
        }
        return *this;
    }

private:
    bool enabled_;
    std::ostringstream buf_;
};

inline Line info(std::string_view stage) { return Line(Level::info, stage); }
inline Line debug(std::string_view stage) { return Line(Level::debug, stage); }
inline Line error(std::string_view stage) { return Line(Level::error, stage); }

}  // namespace fincorpus::log
