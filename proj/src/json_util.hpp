#pragma once

#include <json.hpp>
#include <string>

#include "adi/errors.hpp"

namespace adi::detail {

using json = nlohmann::json;

/// 1-based line of a byte offset, for parse diagnostics.
inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

inline json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source, line_of_offset(text, e.byte), "malformed JSON");
    }
}

inline const json& require(const json& obj, const char* key, const std::string& source) {
    if (!obj.is_object()) throw ParseError(source, 0, "expected an object containing '" + std::string(key) + "'");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(source, 0, "missing field '" + std::string(key) + "'");
    return *it;
}

template <typename T>
T get_as(const json& value, const char* key, const std::string& source) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw ParseError(source, 0, "field '" + std::string(key) + "' has the wrong type");
    }
}

template <typename T>
T require_as(const json& obj, const char* key, const std::string& source) {
    return get_as<T>(require(obj, key, source), key, source);
}

}  // namespace adi::detail
