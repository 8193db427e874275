#pragma once

#include "fdw/corpus.hpp"
#include "fdw/log.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fdw::test {

// "John hates you !" with every layer; John is a PERSON, hates is the root.
inline AnnotatedDoc john_hates_you() {
    AnnotatedDoc d;
    d.id = "j";
    d.label = 1;
    d.tokens = {
        {"John", "John", "PROPN", "PERSON", 1, "nsubj", false, true},
        {"hates", "hate", "VERB", "", 1, "ROOT", false, true},
        {"you", "you", "PRON", "", 1, "dobj", true, true},
        {"!", "!", "PUNCT", "", 1, "punct", false, false},
    };
    d.entities = {{0, 1, "PERSON"}};
    d.chunks = {{0, 1}, {2, 3}};
    d.layers = LayerSet::all();
    return d;
}

// Collects warnings for the lifetime of the object.
class CaptureWarnings {
public:
    CaptureWarnings() {
        previous_ = set_warning_sink([this](std::string_view m) { messages.emplace_back(m); });
    }
    ~CaptureWarnings() { set_warning_sink(previous_); }
    std::vector<std::string> messages;

private:
    WarningSink previous_;
};

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("fdw_test_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace fdw::test
