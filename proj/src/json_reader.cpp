#include "json_reader.hpp"

#include <algorithm>

#include "sepidx/error.hpp"

namespace sepidx {

using nlohmann::json;

namespace {

std::string escape_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

json parse_json_document(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) throw Error(Errc::SchemaViolation, "malformed JSON document", "");
  return doc;
}

void JsonReader::fail(const std::string& message) const {
  const std::string where = pointer_.empty() ? std::string("/") : pointer_;
  throw Error(Errc::SchemaViolation, "at " + where + ": " + message, where);
}

JsonReader JsonReader::operator[](std::string_view key) const {
  if (!value_->is_object()) fail("expected an object");
  const auto it = value_->find(std::string(key));
  const std::string child = pointer_ + "/" + escape_token(key);
  if (it == value_->end()) JsonReader(*value_, child).fail("missing required member");
  return JsonReader(*it, child);
}

JsonReader JsonReader::operator[](std::size_t index) const {
  if (!value_->is_array()) fail("expected an array");
  if (index >= value_->size()) fail("index " + std::to_string(index) + " out of range");
  return JsonReader((*value_)[index], pointer_ + "/" + std::to_string(index));
}

bool JsonReader::has(std::string_view key) const {
  return value_->is_object() && value_->contains(std::string(key));
}

std::size_t JsonReader::size() const {
  if (!value_->is_array()) fail("expected an array");
  return value_->size();
}

std::vector<std::string> JsonReader::keys() const {
  if (!value_->is_object()) fail("expected an object");
  std::vector<std::string> out;
  for (const auto& item : value_->items()) out.push_back(item.key());
  return out;
}

void JsonReader::only_keys(std::initializer_list<std::string_view> allowed) const {
  for (const auto& key : keys()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      JsonReader(*value_, pointer_ + "/" + escape_token(key)).fail("unknown member");
    }
  }
}

double JsonReader::real() const {
  if (!value_->is_number()) fail("expected a number");
  return value_->get<double>();
}

std::optional<double> JsonReader::optional_real() const {
  if (value_->is_null()) return std::nullopt;
  return real();
}

std::uint64_t JsonReader::unsigned_integer() const {
  if (value_->is_number_unsigned()) return value_->get<std::uint64_t>();
  if (value_->is_number_integer() && value_->get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value_->get<std::int64_t>());
  }
  fail("expected a non-negative integer");
}

std::optional<std::uint64_t> JsonReader::optional_unsigned() const {
  if (value_->is_null()) return std::nullopt;
  return unsigned_integer();
}

bool JsonReader::boolean() const {
  if (!value_->is_boolean()) fail("expected true or false");
  return value_->get<bool>();
}

std::string JsonReader::string() const {
  if (!value_->is_string()) fail("expected a string");
  return value_->get<std::string>();
}

}  // namespace sepidx
