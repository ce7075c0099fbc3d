#include "qsem/store.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qsem {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Tokens become file names; anything risky is escaped as _XX.
std::string sanitize_token(const std::string& token) {
    std::string out;
    for (unsigned char c : token) {
        if (std::isalnum(c) || c == '-' || c == '.')
            out += static_cast<char>(c);
        else {
            char buf[8];
            std::snprintf(buf, sizeof buf, "_%02X", c);
            out += buf;
        }
    }
    return out.empty() ? "_" : out;
}

}  // namespace

void save_tensor(const std::string& path, const MeaningTensor& t) {
    std::ofstream out(path);
    if (!out) throw StoreError("cannot write tensor file '" + path + "'");
    out << "dims";
    for (std::size_t d : t.wire_dims()) out << ' ' << d;
    out << '\n';
    for (const auto& [flat, v] : t.entries()) {
        const std::vector<std::size_t> coords = t.unflatten(flat);
        for (std::size_t c : coords) out << c << ' ';
        out << format_double(v) << '\n';
    }
    if (!out) throw StoreError("short write on tensor file '" + path + "'");
}

MeaningTensor load_tensor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StoreError("cannot open tensor file '" + path + "'");

    std::string line;
    std::size_t line_no = 0;
    auto next_content_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            return true;
        }
        return false;
    };

    if (!next_content_line()) throw StoreError("missing dims header in '" + path + "'", line_no);
    std::istringstream header(line);
    std::string tag;
    header >> tag;
    if (tag != "dims") throw StoreError("expected 'dims' header in '" + path + "'", line_no);
    std::vector<std::size_t> dims;
    for (std::size_t d; header >> d;) dims.push_back(d);
    if (!header.eof()) throw StoreError("malformed dims header in '" + path + "'", line_no);

    MeaningTensor t{dims};
    std::vector<std::size_t> coords(dims.size());
    while (next_content_line()) {
        std::istringstream row(line);
        std::vector<std::string> fields;
        for (std::string f; row >> f;) fields.push_back(std::move(f));
        if (fields.size() < dims.size() + 1)
            throw StoreError("truncated entry line in '" + path + "'", line_no);
        if (fields.size() > dims.size() + 1)
            throw StoreError("trailing tokens in '" + path + "'", line_no);
        for (std::size_t k = 0; k < dims.size(); ++k) {
            char* end = nullptr;
            if (!std::isdigit(static_cast<unsigned char>(fields[k][0])))
                throw StoreError("bad coordinate in '" + path + "'", line_no);
            const unsigned long long c = std::strtoull(fields[k].c_str(), &end, 10);
            if (end != fields[k].c_str() + fields[k].size())
                throw StoreError("bad coordinate in '" + path + "'", line_no);
            if (c >= dims[k])
                throw StoreError("coordinate out of range in '" + path + "'", line_no);
            coords[k] = static_cast<std::size_t>(c);
        }
        char* end = nullptr;
        const double v = std::strtod(fields.back().c_str(), &end);
        if (end != fields.back().c_str() + fields.back().size())
            throw StoreError("bad value in '" + path + "'", line_no);
        t.set(coords, v);
    }
    return t;
}

void VectorStore::put(const std::string& token, MeaningTensor t) {
    tensors_[token] = std::move(t);
}

bool VectorStore::contains(const std::string& token) const { return tensors_.count(token) != 0; }

const MeaningTensor& VectorStore::at(const std::string& token) const {
    auto it = tensors_.find(token);
    if (it == tensors_.end()) throw StoreError("token '" + token + "' not in store");
    return it->second;
}

void VectorStore::save(const std::string& dir) const {
    fs::create_directories(dir);
    std::ofstream manifest(fs::path(dir) / "manifest.tsv");
    if (!manifest) throw StoreError("cannot write manifest in '" + dir + "'");

    std::map<std::string, std::size_t> used;  // sanitized name -> count
    for (const auto& [token, tensor] : tensors_) {
        std::string name = sanitize_token(token);
        const std::size_t n = used[name]++;
        if (n > 0) name += "-" + std::to_string(n);
        name += ".vec";
        save_tensor((fs::path(dir) / name).string(), tensor);
        manifest << token << '\t' << tensor.wire_count() << '\t' << name << '\n';
    }
    if (!manifest) throw StoreError("short write on manifest in '" + dir + "'");
}

VectorStore VectorStore::load(const std::string& dir) {
    const fs::path manifest_path = fs::path(dir) / "manifest.tsv";
    std::ifstream manifest(manifest_path);
    if (!manifest) throw StoreError("cannot open '" + manifest_path.string() + "'");

    VectorStore store;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(manifest, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string token, wires_text, name;
        if (!std::getline(row, token, '\t') || !std::getline(row, wires_text, '\t') ||
            !std::getline(row, name))
            throw StoreError("malformed manifest line in '" + dir + "'", line_no);
        MeaningTensor t = load_tensor((fs::path(dir) / name).string());
        const std::size_t wires = std::stoul(wires_text);
        if (wires != t.wire_count())
            throw StoreError("manifest wire count disagrees with '" + name + "'", line_no);
        store.put(token, std::move(t));
    }
    return store;
}

}  // namespace qsem
