#include "ap/core.hpp"

#include <doctest.h>

using namespace ap;

namespace {

AttributeSchema tiny_schema() { return AttributeSchema({"a", "b", "c", "d"}); }

AttributeVector vec(const AttributeSchema& s, const std::string& bits) {
    return AttributeVector::from_string(s, bits);
}

GoalSpec goal(const AttributeSchema& s, const std::string& mask, const std::string& values) {
    return GoalSpec::from_string(s, mask + "|" + values);
}

}  // namespace

TEST_CASE("schema: rejects duplicates and empty names") {
    CHECK_THROWS_AS(AttributeSchema({"a", "a"}), ContractViolation);
    CHECK_THROWS_AS(AttributeSchema({"a", ""}), ContractViolation);
    CHECK_THROWS_AS(AttributeSchema(std::vector<std::string>{}), ContractViolation);
    const auto s = tiny_schema();
    CHECK(s.length() == 4);
}

TEST_CASE("schema: serialization round trip") {
    const auto s = tiny_schema();
    const auto back = AttributeSchema::from_json(s.to_json());
    CHECK(back == s);
    CHECK(back.to_json() == s.to_json());
}

TEST_CASE("satisfies: masked agreement") {
    const auto s = tiny_schema();
    CHECK(satisfies(vec(s, "1010"), goal(s, "1111", "1010")));
    CHECK(satisfies(vec(s, "1010"), goal(s, "1000", "1000")));
    CHECK_FALSE(satisfies(vec(s, "0010"), goal(s, "1100", "1000")));
}

TEST_CASE("hamming_specified: masked disagreement count") {
    const auto s = tiny_schema();
    CHECK(hamming_specified(vec(s, "0000"), goal(s, "1111", "1111")) == 4);
    CHECK(hamming_specified(vec(s, "1111"), goal(s, "1111", "1111")) == 0);
    CHECK(hamming_specified(vec(s, "1100"), goal(s, "0011", "0011")) == 2);
}

TEST_CASE("core properties over random vectors") {
    const auto s = tiny_schema();
    Rng rng(99);
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<uint8_t> bits(4), mask(4), values(4);
        for (auto& b : bits) b = static_cast<uint8_t>(rng.below(2));
        for (auto& b : mask) b = static_cast<uint8_t>(rng.below(2));
        for (auto& b : values) b = static_cast<uint8_t>(rng.below(2));
        const AttributeVector rho(s, bits);
        const GoalSpec g(s, mask, values);

        // identity goal always satisfied
        CHECK(satisfies(rho, GoalSpec::exact(rho)));
        // hamming zero iff satisfied
        CHECK((hamming_specified(rho, g) == 0) == satisfies(rho, g));
        // monotone under mask removal
        if (satisfies(rho, g)) {
            auto mask2 = g.mask();
            mask2[rng.below(4)] = 0;
            const GoalSpec weaker(s, mask2, g.values());
            CHECK(satisfies(rho, weaker));
        }
    }
}

TEST_CASE("goal spec: values normalized to zero off-mask") {
    const auto s = tiny_schema();
    const GoalSpec g(s, {1, 0, 1, 0}, {1, 1, 0, 1});
    CHECK(g.values() == std::vector<uint8_t>{1, 0, 0, 0});
    CHECK_FALSE(g.fully_specified());
    CHECK(GoalSpec::exact(vec(s, "0110")).fully_specified());
}

TEST_CASE("schema mismatch raises contract errors") {
    const auto s = tiny_schema();
    const AttributeSchema other({"x", "y", "z", "w"});
    CHECK_THROWS_AS(satisfies(vec(s, "1010"), GoalSpec::exact(vec(other, "1010"))),
                    ContractViolation);
    CHECK_THROWS_AS(hamming_specified(vec(other, "0000"), goal(s, "1111", "1111")),
                    ContractViolation);
}

TEST_CASE("attribute vectors: value equality and hashing") {
    const auto s = tiny_schema();
    CHECK(vec(s, "1010") == vec(s, "1010"));
    CHECK(vec(s, "1010").hash() == vec(s, "1010").hash());
    CHECK(vec(s, "1010") != vec(s, "1011"));
    CHECK(vec(s, "1010").to_string() == "1010");
}

TEST_CASE("seed derivation: stable and label-sensitive") {
    const uint64_t a = derive_seed(42, "explore");
    CHECK(a == derive_seed(42, "explore"));
    CHECK(a != derive_seed(42, "phase3"));
    CHECK(a != derive_seed(43, "explore"));
}

TEST_CASE("rng: below stays in range and doubles in [0,1)") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        CHECK(rng.below(7) < 7);
        const double d = rng.next_double();
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
    }
}
