#pragma once
// Shared domain types: attribute schemas and vectors, goal specifications,
// transitions, episode traces, and seed derivation. All types are immutable
// values after construction.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ap {

struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// Ordered list of attribute names; fixed for the lifetime of an experiment.
// The tag is a content hash used to check that vectors share a schema without
// carrying a reference around.
class AttributeSchema {
public:
    AttributeSchema() = default;
    explicit AttributeSchema(std::vector<std::string> names);

    std::size_t length() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    uint32_t tag() const { return tag_; }

    std::string to_json() const;
    static AttributeSchema from_json(const std::string& text);

    bool operator==(const AttributeSchema& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
    uint32_t tag_ = 0;
};

// Fixed-length binary vector; value-based equality and hashing make two
// vectors with identical bits the same graph node.
class AttributeVector {
public:
    AttributeVector() = default;
    AttributeVector(const AttributeSchema& schema, std::vector<uint8_t> bits);

    std::size_t size() const { return bits_.size(); }
    uint8_t operator[](std::size_t i) const { return bits_[i]; }
    const std::vector<uint8_t>& bits() const { return bits_; }
    uint32_t schema_tag() const { return tag_; }

    void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }

    std::string to_string() const;  // e.g. "0101"
    static AttributeVector from_string(const AttributeSchema& schema, const std::string& s);

    bool operator==(const AttributeVector& o) const {
        return tag_ == o.tag_ && bits_ == o.bits_;
    }
    bool operator!=(const AttributeVector& o) const { return !(*this == o); }

    std::size_t hash() const;

private:
    std::vector<uint8_t> bits_;
    uint32_t tag_ = 0;
};

struct AttributeVectorHash {
    std::size_t operator()(const AttributeVector& v) const { return v.hash(); }
};

// Full or partial target attribute assignment. values is zero wherever mask
// is zero (normalized at construction).
class GoalSpec {
public:
    GoalSpec() = default;
    GoalSpec(const AttributeSchema& schema, std::vector<uint8_t> mask, std::vector<uint8_t> values);

    // Fully-specified goal from a plain attribute vector.
    static GoalSpec exact(const AttributeVector& target);

    std::size_t size() const { return mask_.size(); }
    const std::vector<uint8_t>& mask() const { return mask_; }
    const std::vector<uint8_t>& values() const { return values_; }
    uint32_t schema_tag() const { return tag_; }
    bool fully_specified() const;

    std::string to_string() const;  // "mask|values"
    static GoalSpec from_string(const AttributeSchema& schema, const std::string& s);

    bool operator==(const GoalSpec& o) const {
        return tag_ == o.tag_ && mask_ == o.mask_ && values_ == o.values_;
    }

private:
    std::vector<uint8_t> mask_;
    std::vector<uint8_t> values_;
    uint32_t tag_ = 0;
};

// true iff rho agrees with goal.values on every masked position
bool satisfies(const AttributeVector& rho, const GoalSpec& goal);
// count of masked positions where rho and goal.values differ
int hamming_specified(const AttributeVector& rho, const GoalSpec& goal);

struct Transition {
    AttributeVector from;
    AttributeVector to;
    int steps = 0;
    bool success = false;
};

struct TraceRecord {
    std::string state;  // canonical env snapshot
    AttributeVector attrs;
    int action = -1;    // -1 for the terminal record
    double reward = 0.0;
    GoalSpec goal;
};

struct EpisodeTrace {
    std::vector<TraceRecord> records;
    uint64_t seed = 0;
};

// --- seed plumbing -------------------------------------------------------

uint64_t splitmix64(uint64_t x);
uint64_t fnv1a64(const std::string& s);
// Stage seeds derive from a master seed by labeled hashing so stages can be
// rerun independently and reproducibly.
uint64_t derive_seed(uint64_t master, const std::string& label);

// Splitmix64 counter stream. Self-contained so sequences are identical across
// standard libraries and platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, n); Lemire multiply-shift
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    int below_int(int n) { return static_cast<int>(below(static_cast<uint64_t>(n))); }

    // uniform in [0, 1) with 53 bits
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [-a, a]
    double sym(double a) { return (2.0 * next_double() - 1.0) * a; }

private:
    uint64_t state_;
};

}  // namespace ap
