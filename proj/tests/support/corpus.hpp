#pragma once

#include <string>
#include <vector>

#include "bpstruct/model.hpp"

namespace bpstruct::corpus {

struct Entry {
    std::string file;
    std::string path;
    std::string category;  // structured, structurable, maximal
    bool reference_rigid = false;
    ProcessModel model;
};

struct InvalidEntry {
    std::string file;
    std::string path;
    std::string message;
};

std::string read_text(const std::string& path);
std::string path_of(const std::string& file);

// Compact model documents: nodes as "id" (task), "id:xor", "id:and" or
// "id=name" (task with a name); arcs as "src>dst".
std::string make_doc(const std::vector<std::string>& nodes, const std::vector<std::string>& arcs);
ProcessModel make_model(const std::vector<std::string>& nodes, const std::vector<std::string>& arcs);

std::vector<Entry> models();
std::vector<InvalidEntry> invalid_models();

}  // namespace bpstruct::corpus
