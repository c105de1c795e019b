#include "morphkit/pipeline/protocol.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "morphkit/common/error.hpp"

namespace morphkit::pipeline {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

std::vector<ProtocolPair> load_protocol(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("load_protocol: cannot open " + csv_path);
    std::string line;
    if (!std::getline(in, line) || line != "pair_id,img_a,img_b,lmk_a,lmk_b")
        throw ParseError(csv_path + ":1: expected header \"pair_id,img_a,img_b,lmk_a,lmk_b\"");

    std::vector<ProtocolPair> pairs;
    std::set<std::string> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_row(line);
        if (f.size() != 5)
            throw ParseError(csv_path + ":" + std::to_string(line_no) + ": expected 5 fields");
        if (!seen.insert(f[0]).second)
            throw ParseError(csv_path + ":" + std::to_string(line_no) + ": duplicate pair id " + f[0]);
        pairs.push_back({f[0], f[1], f[2], f[3], f[4]});
    }
    if (pairs.empty()) throw ParseError(csv_path + ": no pairs");
    return pairs;
}

void save_protocol(const std::vector<ProtocolPair>& pairs, const std::string& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw IoError("save_protocol: cannot write " + csv_path);
    out << "pair_id,img_a,img_b,lmk_a,lmk_b\n";
    for (const auto& p : pairs)
        out << p.pair_id << "," << p.img_a << "," << p.img_b << "," << p.lmk_a << "," << p.lmk_b
            << "\n";
}

std::string subject_id_of(const std::string& image_path) {
    return std::filesystem::path(image_path).stem().string();
}

}  // namespace morphkit::pipeline
