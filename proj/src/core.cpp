#include "ap/core.hpp"

#include <json.hpp>

#include <unordered_set>

namespace ap {

namespace {

uint32_t schema_content_tag(const std::vector<std::string>& names) {
    uint64_t h = 1469598103934665603ull;
    for (const auto& n : names) {
        for (char c : n) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
    }
    return static_cast<uint32_t>(h ^ (h >> 32));
}

}  // namespace

AttributeSchema::AttributeSchema(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw ContractViolation("schema: empty name list");
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw ContractViolation("schema: empty attribute name");
        if (!seen.insert(n).second) throw ContractViolation("schema: duplicate name " + n);
    }
    tag_ = schema_content_tag(names_);
}

std::string AttributeSchema::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["names"] = names_;
    return j.dump(2) + "\n";
}

AttributeSchema AttributeSchema::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    if (!j.contains("version") || j["version"].get<int>() != 1) {
        throw std::runtime_error("schema: unsupported version");
    }
    return AttributeSchema(j.at("names").get<std::vector<std::string>>());
}

AttributeVector::AttributeVector(const AttributeSchema& schema, std::vector<uint8_t> bits)
    : bits_(std::move(bits)), tag_(schema.tag()) {
    if (bits_.size() != schema.length()) {
        throw ContractViolation("attribute vector length does not match schema");
    }
    for (auto& b : bits_) b = b ? 1 : 0;
}

std::string AttributeVector::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) s[i] = '1';
    }
    return s;
}

AttributeVector AttributeVector::from_string(const AttributeSchema& schema, const std::string& s) {
    std::vector<uint8_t> bits(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw ContractViolation("attribute string: bad char");
        bits[i] = s[i] == '1';
    }
    return AttributeVector(schema, std::move(bits));
}

std::size_t AttributeVector::hash() const {
    uint64_t h = 1469598103934665603ull ^ tag_;
    for (uint8_t b : bits_) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

GoalSpec::GoalSpec(const AttributeSchema& schema, std::vector<uint8_t> mask,
                   std::vector<uint8_t> values)
    : mask_(std::move(mask)), values_(std::move(values)), tag_(schema.tag()) {
    if (mask_.size() != schema.length() || values_.size() != schema.length()) {
        throw ContractViolation("goal spec length does not match schema");
    }
    for (std::size_t i = 0; i < mask_.size(); ++i) {
        mask_[i] = mask_[i] ? 1 : 0;
        values_[i] = (mask_[i] && values_[i]) ? 1 : 0;
    }
}

GoalSpec GoalSpec::exact(const AttributeVector& target) {
    GoalSpec g;
    g.mask_.assign(target.size(), 1);
    g.values_ = target.bits();
    g.tag_ = target.schema_tag();
    return g;
}

bool GoalSpec::fully_specified() const {
    for (uint8_t m : mask_) {
        if (!m) return false;
    }
    return true;
}

std::string GoalSpec::to_string() const {
    std::string s;
    s.reserve(2 * mask_.size() + 1);
    for (uint8_t m : mask_) s.push_back(m ? '1' : '0');
    s.push_back('|');
    for (uint8_t v : values_) s.push_back(v ? '1' : '0');
    return s;
}

GoalSpec GoalSpec::from_string(const AttributeSchema& schema, const std::string& s) {
    const auto bar = s.find('|');
    if (bar == std::string::npos) throw ContractViolation("goal string: missing separator");
    std::vector<uint8_t> mask(bar), values(s.size() - bar - 1);
    for (std::size_t i = 0; i < bar; ++i) mask[i] = s[i] == '1';
    for (std::size_t i = bar + 1; i < s.size(); ++i) values[i - bar - 1] = s[i] == '1';
    return GoalSpec(schema, std::move(mask), std::move(values));
}

bool satisfies(const AttributeVector& rho, const GoalSpec& goal) {
    if (rho.schema_tag() != goal.schema_tag() || rho.size() != goal.size()) {
        throw ContractViolation("satisfies: schema mismatch");
    }
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (goal.mask()[i] && rho[i] != goal.values()[i]) return false;
    }
    return true;
}

int hamming_specified(const AttributeVector& rho, const GoalSpec& goal) {
    if (rho.schema_tag() != goal.schema_tag() || rho.size() != goal.size()) {
        throw ContractViolation("hamming_specified: schema mismatch");
    }
    int d = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (goal.mask()[i] && rho[i] != goal.values()[i]) ++d;
    }
    return d;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t derive_seed(uint64_t master, const std::string& label) {
    return splitmix64(master ^ fnv1a64(label));
}

}  // namespace ap
