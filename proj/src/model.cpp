#include "pdnet/model.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utypes.h>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pdnet {

namespace {

// NFC-normalize a UTF-8 string, optionally lowercasing it (root locale).
// Invalid UTF-8 is passed through unchanged.
std::string nfc(const std::string& utf8, bool lower) {
    UErrorCode ec = U_ZERO_ERROR;
    const UNormalizer2* norm = unorm2_getNFCInstance(&ec);
    if (U_FAILURE(ec)) return utf8;

    std::vector<UChar> in(utf8.size() + 1);
    int32_t in_len = 0;
    ec = U_ZERO_ERROR;
    u_strFromUTF8(in.data(), static_cast<int32_t>(in.size()), &in_len, utf8.data(),
                  static_cast<int32_t>(utf8.size()), &ec);
    if (U_FAILURE(ec)) return utf8;

    std::vector<UChar> out(static_cast<size_t>(in_len) * 2 + 16);
    ec = U_ZERO_ERROR;
    int32_t out_len = unorm2_normalize(norm, in.data(), in_len, out.data(),
                                       static_cast<int32_t>(out.size()), &ec);
    if (U_FAILURE(ec)) return utf8;

    if (lower) {
        std::vector<UChar> lowered(static_cast<size_t>(out_len) * 2 + 16);
        ec = U_ZERO_ERROR;
        int32_t low_len = u_strToLower(lowered.data(), static_cast<int32_t>(lowered.size()),
                                       out.data(), out_len, "", &ec);
        if (U_FAILURE(ec)) return utf8;
        out = std::move(lowered);
        out_len = low_len;
    }

    std::string result(static_cast<size_t>(out_len) * 4 + 4, '\0');
    int32_t res_len = 0;
    ec = U_ZERO_ERROR;
    u_strToUTF8(result.data(), static_cast<int32_t>(result.size()), &res_len, out.data(),
                out_len, &ec);
    if (U_FAILURE(ec)) return utf8;
    result.resize(static_cast<size_t>(res_len));
    return result;
}

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string ascii_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

std::string normalize_name(const std::string& raw) {
    std::string s = nfc(raw, /*lower=*/true);
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_ascii_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (c == '-' || c == '_') continue;
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    // Removing separators can juxtapose a base character with a combining
    // mark, so compose once more to keep the function idempotent.
    out = nfc(out, /*lower=*/false);
    if (out.empty()) throw NormalizationEmpty(raw);
    return out;
}

std::string normalize_url(const std::string& raw) {
    std::string s = raw;
    // trim
    size_t b = 0, e = s.size();
    while (b < e && is_ascii_space(s[b])) ++b;
    while (e > b && is_ascii_space(s[e - 1])) --e;
    s = s.substr(b, e - b);
    if (s.empty()) throw UrlParseError(raw);
    if (s.find_first_of(" \t\n\r") != std::string::npos) throw UrlParseError(raw);

    // scheme
    size_t scheme_end = s.find("://");
    if (scheme_end != std::string::npos) {
        s = s.substr(scheme_end + 3);
    }
    // fragment
    size_t frag = s.find('#');
    if (frag != std::string::npos) s = s.substr(0, frag);

    // split host / path / query
    size_t path_start = s.find('/');
    size_t query_start = s.find('?');
    size_t host_end = std::min(path_start == std::string::npos ? s.size() : path_start,
                               query_start == std::string::npos ? s.size() : query_start);
    std::string host = ascii_lower(s.substr(0, host_end));
    std::string rest = s.substr(host_end);

    if (host.rfind("www.", 0) == 0) host = host.substr(4);
    if (host.empty() || host == ".") throw UrlParseError(raw);

    std::string path, query;
    size_t q = rest.find('?');
    if (q != std::string::npos) {
        path = rest.substr(0, q);
        query = rest.substr(q);  // includes '?'
    } else {
        path = rest;
    }
    while (!path.empty() && path.back() == '/') path.pop_back();

    return host + path + query;
}

namespace {

// Path depth of a normalized URL: number of nonempty path segments.
size_t path_depth(const std::string& key) {
    size_t q = key.find('?');
    std::string without_query = key.substr(0, q);
    size_t slash = without_query.find('/');
    if (slash == std::string::npos) return 0;
    size_t depth = 0;
    std::stringstream ss(without_query.substr(slash + 1));
    std::string seg;
    while (std::getline(ss, seg, '/')) {
        if (!seg.empty()) ++depth;
    }
    return depth;
}

std::string host_of(const std::string& key) {
    size_t end = key.find_first_of("/?");
    return key.substr(0, end);
}

}  // namespace

bool is_generic_url(const std::string& key, const std::set<std::string>& warehouse_hosts) {
    return warehouse_hosts.count(host_of(key)) > 0 && path_depth(key) == 0;
}

std::optional<std::string> name_key_of(const DatasetDescription& d) {
    if (!d.dataset_name) return std::nullopt;
    try {
        return normalize_name(*d.dataset_name);
    } catch (const NormalizationEmpty&) {
        return std::nullopt;
    }
}

std::optional<std::string> url_key_of(const DatasetDescription& d) {
    if (!d.dataset_url) return std::nullopt;
    try {
        return normalize_url(*d.dataset_url);
    } catch (const UrlParseError&) {
        return std::nullopt;
    }
}

bool is_unresolvable(const DatasetDescription& d) {
    return !name_key_of(d) && !url_key_of(d);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string entity_id_from_keys(const std::set<std::string>& name_keys,
                                const std::set<std::string>& url_keys) {
    std::string material;
    for (const auto& k : name_keys) material += "name:" + k + "|";
    for (const auto& k : url_keys) material += "url:" + k + "|";
    char buf[20];
    std::snprintf(buf, sizeof(buf), "e%016llx",
                  static_cast<unsigned long long>(fnv1a64(material)));
    return buf;
}

void PaperDatasetNetwork::add_paper(PaperMeta meta) {
    papers_[meta.paper_id] = std::move(meta);
}

void PaperDatasetNetwork::add_entity(DatasetEntity entity) {
    entities_[entity.entity_id] = std::move(entity);
}

void PaperDatasetNetwork::add_description(DatasetDescription description) {
    descriptions_[description.description_id] = std::move(description);
}

void PaperDatasetNetwork::add_edge(NetworkEdge edge) {
    if (!papers_.count(edge.paper_id))
        throw BuildError("edge references unknown paper: " + edge.paper_id);
    if (!entities_.count(edge.entity_id))
        throw BuildError("edge references unknown entity: " + edge.entity_id);
    auto it = descriptions_.find(edge.description_id);
    if (it == descriptions_.end())
        throw BuildError("edge references unknown description: " + edge.description_id);
    if (it->second.paper_id != edge.paper_id)
        throw BuildError("description " + edge.description_id + " does not belong to paper " +
                         edge.paper_id);
    edges_.insert(std::move(edge));
}

const char* to_string(EntityOrigin o) {
    return o == EntityOrigin::imported ? "imported" : "discovered";
}

const char* to_string(AttributeKind k) {
    return k == AttributeKind::name ? "name" : "url";
}

const char* to_string(MatchMethod m) {
    switch (m) {
        case MatchMethod::name_matching: return "name_matching";
        case MatchMethod::graph_inference: return "graph_inference";
        case MatchMethod::graph_completion_inference: return "graph_completion_inference";
        case MatchMethod::regex_baseline: return "regex_baseline";
    }
    return "unknown";
}

EntityOrigin entity_origin_from_string(const std::string& s) {
    if (s == "imported") return EntityOrigin::imported;
    if (s == "discovered") return EntityOrigin::discovered;
    throw ParseFailed("unknown entity origin: " + s);
}

AttributeKind attribute_kind_from_string(const std::string& s) {
    if (s == "name") return AttributeKind::name;
    if (s == "url") return AttributeKind::url;
    throw ParseFailed("unknown attribute kind: " + s);
}

MatchMethod match_method_from_string(const std::string& s) {
    if (s == "name_matching") return MatchMethod::name_matching;
    if (s == "graph_inference") return MatchMethod::graph_inference;
    if (s == "graph_completion_inference") return MatchMethod::graph_completion_inference;
    if (s == "regex_baseline") return MatchMethod::regex_baseline;
    throw ParseFailed("unknown match method: " + s);
}

}  // namespace pdnet
