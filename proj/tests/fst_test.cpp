#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bfst/fst.hpp"
#include "bfst/fst_io.hpp"

#include <sstream>

#include "test_util.hpp"

using namespace bfst;
using namespace bfst::testing;

namespace {

SymbolId sym(const SymbolTablePtr& t, const std::string& name) {
    SymbolId id;
    REQUIRE(t->find(name, &id));
    return id;
}

Word word(const SymbolTablePtr& t, const std::string& letters) {
    Word w;
    for (char c : letters) w.push_back(sym(t, std::string(1, c)));
    return w;
}

} // namespace

TEST_CASE("symbol table reserves epsilon, any and boundary") {
    SymbolTable t;
    CHECK(t.name(kEpsilon) == "<eps>");
    CHECK(t.name(kAny) == "?");
    CHECK(t.name(kBoundary) == "<#>");
    CHECK(t.kind(kBoundary) == SymbolKind::Boundary);

    SymbolId a = t.intern("a", SymbolKind::Tag);
    SymbolId a2 = t.intern("a", SymbolKind::Tag);
    CHECK(a == a2);
    CHECK_THROWS_AS(t.intern("a", SymbolKind::Class), Error);
    CHECK_THROWS_AS(t.intern("white space", SymbolKind::Tag), Error);

    t.freeze();
    CHECK_THROWS_AS(t.intern("late", SymbolKind::Tag), Error);
}

TEST_CASE("marker names parse back to base, side and distance") {
    SymbolTable t;
    SymbolId noun = t.intern("NOUN", SymbolKind::Tag);
    SymbolId m = t.intern_marker(noun, true, 2);
    CHECK(t.name(m) == "NOUN-B2");

    std::string base;
    bool back;
    unsigned k;
    CHECK(SymbolTable::parse_marker_name("NOUN-B2", &base, &back, &k));
    CHECK(base == "NOUN");
    CHECK(back);
    CHECK(k == 2);
    CHECK(SymbolTable::parse_marker_name("[DET,PRON]-A1", &base, &back, &k));
    CHECK(base == "[DET,PRON]");
    CHECK_FALSE(back);
    CHECK(k == 1);
    CHECK_FALSE(SymbolTable::parse_marker_name("NOUN", &base, &back, &k));
    CHECK_FALSE(SymbolTable::parse_marker_name("NOUN-B0", &base, &back, &k));
    CHECK_FALSE(SymbolTable::parse_marker_name("NOUN-C2", &base, &back, &k));
}

TEST_CASE("linear builds single-path transducers") {
    auto t = letters_table(3);
    SUBCASE("empty pair string accepts only the empty string") {
        Fst f = linear(t, {});
        CHECK(f.num_states() == 1);
        CHECK(enumerate_language(f, 3) == WordSet{{}});
    }
    SUBCASE("single pair") {
        Fst f = linear(t, {{sym(t, "a"), sym(t, "b")}});
        CHECK(f.num_states() == 2);
        CHECK(f.num_arcs() == 1);
        CHECK(enumerate_relation(f, 3) ==
              PairSet{{word(t, "a"), word(t, "b")}});
    }
    SUBCASE("unknown symbol is an error") {
        CHECK_THROWS_AS(linear(t, {{99, 99}}), Error);
    }
    SUBCASE("ANY may not be stored") {
        CHECK_THROWS_AS(linear(t, {{kAny, kAny}}), Error);
    }
}

TEST_CASE("union: identity element, two-path output, enumeration oracle") {
    auto t = letters_table(3);
    Fst a = linear(t, {{sym(t, "a"), sym(t, "a")}});

    CHECK(language_equal(union_fst(a, empty_language_fst(t)), a));

    Fst xy = linear(t, {{sym(t, "a"), sym(t, "b")}});
    Fst xz = linear(t, {{sym(t, "a"), sym(t, "c")}});
    ApplyResult r = apply(union_fst(xy, xz), word(t, "a"), ApplyMode::All);
    CHECK(r.outputs == std::vector<Word>{word(t, "b"), word(t, "c")});

    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        // three random linear acceptors: the union accepts exactly those strings
        std::vector<Word> strings;
        std::vector<Fst> parts;
        for (int j = 0; j < 3; ++j) {
            Word w;
            std::size_t len = 1 + rng(3);
            for (std::size_t k = 0; k < len; ++k)
                w.push_back(t->sigma()[rng(t->sigma().size())]);
            strings.push_back(w);
            std::vector<std::pair<SymbolId, SymbolId>> pairs;
            for (SymbolId s : w) pairs.emplace_back(s, s);
            parts.push_back(linear(t, pairs));
        }
        Fst u = union_fst(union_fst(parts[0], parts[1]), parts[2]);
        WordSet expect(strings.begin(), strings.end());
        CHECK(enumerate_language(u, 3) == expect);
    }
}

TEST_CASE("union and concat require compatible tables") {
    auto t1 = letters_table(2);
    auto t2 = letters_table(3);
    Fst a = linear(t1, {{sym(t1, "a"), sym(t1, "a")}});
    Fst b = linear(t2, {{sym(t2, "c"), sym(t2, "c")}});
    CHECK_THROWS_AS(union_fst(a, b), Error);
    CHECK_THROWS_AS(concat(a, b), Error);
    CHECK_THROWS_AS(compose(a, b), Error);
}

TEST_CASE("concat: identity element and enumeration oracle") {
    auto t = letters_table(2);
    Fst a = linear(t, {{sym(t, "a"), sym(t, "a")}});
    Fst b = linear(t, {{sym(t, "b"), sym(t, "b")}});

    CHECK(language_equal(concat(a, empty_string_fst(t)), a));
    CHECK(enumerate_language(concat(a, b), 4) == WordSet{word(t, "ab")});

    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        Fst x = random_acceptor(t, rng);
        Fst y = random_acceptor(t, rng);
        WordSet lx = enumerate_language(x, 4), ly = enumerate_language(y, 4);
        WordSet expect;
        for (const Word& u : lx)
            for (const Word& v : ly) {
                if (u.size() + v.size() > 4) continue;
                Word w = u;
                w.insert(w.end(), v.begin(), v.end());
                expect.insert(w);
            }
        CHECK(enumerate_language(concat(x, y), 4) == expect);
    }

    // two acceptors of three strings each: at most nine concatenations
    Rng rng2(22);
    auto three_strings = [&](Rng& r) {
        std::vector<Fst> parts;
        for (int j = 0; j < 3; ++j) {
            std::vector<std::pair<SymbolId, SymbolId>> pairs;
            std::size_t len = 1 + r(2);
            for (std::size_t k = 0; k < len; ++k) {
                SymbolId s = t->sigma()[r(t->sigma().size())];
                pairs.emplace_back(s, s);
            }
            parts.push_back(linear(t, pairs));
        }
        return union_fst(union_fst(parts[0], parts[1]), parts[2]);
    };
    for (int i = 0; i < 10; ++i) {
        Fst x = three_strings(rng2);
        Fst y = three_strings(rng2);
        CHECK(enumerate_language(concat(x, y), 4).size() <= 9);
    }
}

TEST_CASE("star and power") {
    auto t = letters_table(2);
    Fst a = linear(t, {{sym(t, "a"), sym(t, "a")}});

    CHECK(enumerate_language(power(a, 0), 3) == WordSet{{}});
    CHECK(language_equal(power(a, 2), concat(a, a)));

    WordSet got = enumerate_language(star(a), 5);
    WordSet expect;
    for (std::size_t n = 0; n <= 5; ++n)
        expect.insert(Word(n, sym(t, "a")));
    CHECK(got == expect);
}

TEST_CASE("complement over the closed alphabet") {
    auto t = letters_table(2);
    SymbolId a = sym(t, "a"), b = sym(t, "b");

    SUBCASE("complement of sigma* is empty") {
        CHECK(enumerate_language(complement(sigma_star(t)), 3).empty());
    }
    SUBCASE("involution") {
        Fst ab = linear(t, {{a, a}, {b, b}});
        CHECK(language_equal(complement(complement(ab)), ab));
    }
    SUBCASE("complement of {ab} at lengths <= 2") {
        Fst ab = linear(t, {{a, a}, {b, b}});
        WordSet got = enumerate_language(complement(ab), 2);
        WordSet expect{{}, {a}, {b}, {a, a}, {b, a}, {b, b}};
        CHECK(got == expect);
    }
    SUBCASE("non-acceptor input is an error") {
        Fst x = linear(t, {{a, b}});
        CHECK_THROWS_AS(complement(x), Error);
    }
    SUBCASE("unfrozen table is an error") {
        auto open = letters_table(2, false);
        Fst x = linear(open, {{sym(open, "a"), sym(open, "a")}});
        CHECK_THROWS_AS(complement(x), Error);
    }
    SUBCASE("partition property on random acceptors") {
        Rng rng(3);
        for (int i = 0; i < 40; ++i) {
            Fst x = random_acceptor(t, rng);
            Fst not_x = complement(x);
            WordSet lx = enumerate_language(x, 5);
            WordSet lnx = enumerate_language(not_x, 5);
            for (const Word& w : lx) CHECK(lnx.count(w) == 0);
            WordSet all;
            for (const Word& w : all_strings(t->sigma(), 5)) all.insert(w);
            WordSet both = lx;
            both.insert(lnx.begin(), lnx.end());
            CHECK(both == all);
        }
    }
}

TEST_CASE("term complement") {
    auto t = letters_table(3);
    SymbolId a = sym(t, "a");

    WordSet got = enumerate_language(term_complement(t, a), 2);
    CHECK(got == WordSet{word(t, "b"), word(t, "c")});

    CHECK(language_equal(union_fst(term_complement(t, a), symbol_acceptor(t, a)),
                         any_acceptor(t)));
    CHECK_THROWS_AS(term_complement(t, kEpsilon), Error);
    CHECK_THROWS_AS(term_complement(t, kAny), Error);
}

TEST_CASE("compose: identity, chaining, relational-join oracle") {
    auto t = letters_table(3);
    SymbolId a = sym(t, "a"), b = sym(t, "b"), c = sym(t, "c");

    Fst ab = linear(t, {{a, b}});
    CHECK(enumerate_relation(compose(ab, sigma_star(t)), 2) ==
          PairSet{{{a}, {b}}});

    Fst bc = linear(t, {{b, c}});
    CHECK(enumerate_relation(compose(ab, bc), 2) == PairSet{{{a}, {c}}});

    SUBCASE("epsilon-free: equals the relational join of enumerated paths") {
        Rng rng(4);
        for (int i = 0; i < 40; ++i) {
            Fst r = random_transducer(t, rng, false);
            Fst q = random_transducer(t, rng, false);
            // without epsilons all three tapes of a path have one length,
            // so a bound on the outer sides bounds the middle too
            PairSet joined =
                join_relations(enumerate_relation(r, 4), enumerate_relation(q, 4));
            CHECK(enumerate_relation(compose(r, q), 4) == joined);
        }
    }
    SUBCASE("with epsilons: membership matches the search oracle") {
        Rng rng(44);
        std::vector<Word> probes = all_strings(t->sigma(), 2);
        for (int i = 0; i < 25; ++i) {
            Fst r = random_transducer(t, rng, true);
            Fst q = random_transducer(t, rng, true);
            PairSet got = enumerate_relation(compose(r, q), 2);
            for (const Word& x : probes)
                for (const Word& z : probes)
                    CHECK(got.count({x, z}) == (compose_contains(r, q, x, z) ? 1u : 0u));
        }
    }
}

TEST_CASE("compose is associative on random triples") {
    auto t = letters_table(2);
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        Fst x = random_transducer(t, rng, false, 3, 5);
        Fst y = random_transducer(t, rng, false, 3, 5);
        Fst z = random_transducer(t, rng, false, 3, 5);
        Fst left = compose(compose(x, y), z);
        Fst right = compose(x, compose(y, z));
        CHECK(enumerate_relation(left, 3) == enumerate_relation(right, 3));
    }
}

TEST_CASE("invert") {
    auto t = letters_table(2);
    SymbolId a = sym(t, "a"), b = sym(t, "b");

    Fst ab = linear(t, {{a, b}});
    Fst twice = invert(invert(ab));
    CHECK(twice.arcs() == ab.arcs());

    CHECK(enumerate_relation(invert(ab), 2) == PairSet{{{b}, {a}}});

    Rng rng(6);
    for (int i = 0; i < 30; ++i) {
        Fst x = random_transducer(t, rng, true);
        Fst y = random_transducer(t, rng, true);
        PairSet lhs = enumerate_relation(invert(union_fst(x, y)), 3);
        PairSet rhs = enumerate_relation(union_fst(invert(x), invert(y)), 3);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("intersect") {
    auto t = letters_table(2);
    Rng rng(7);
    for (int i = 0; i < 30; ++i) {
        Fst x = random_acceptor(t, rng);
        CHECK(language_equal(intersect(x, sigma_star(t)), x));
        CHECK(enumerate_language(intersect(x, complement(x)), 4).empty());
        Fst y = random_acceptor(t, rng);
        WordSet expect;
        WordSet ly = enumerate_language(y, 4);
        for (const Word& w : enumerate_language(x, 4))
            if (ly.count(w)) expect.insert(w);
        CHECK(enumerate_language(intersect(x, y), 4) == expect);
    }
    Fst non_acceptor = linear(t, {{sym(t, "a"), sym(t, "b")}});
    CHECK_THROWS_AS(intersect(non_acceptor, sigma_star(t)), Error);
}

TEST_CASE("rewrite_to_epsilon rewrites marker sides only") {
    auto t = std::make_shared<SymbolTable>();
    SymbolId conj = t->intern("CONJ", SymbolKind::Tag);
    SymbolId verb = t->intern("VERB", SymbolKind::Tag);
    SymbolId adj = t->intern("ADJ", SymbolKind::Tag);
    t->intern("NOUN", SymbolKind::Tag);
    SymbolId det_pron = t->intern("[DET,PRON]", SymbolKind::Class);
    SymbolId anv = t->intern("[ADJ,NOUN,VERB]", SymbolKind::Class);
    SymbolId nv = t->intern("[NOUN,VERB]", SymbolKind::Class);
    SymbolId m1 = t->intern_marker(conj, true, 2);
    SymbolId m2 = t->intern_marker(det_pron, true, 1);
    SymbolId m3 = t->intern_marker(nv, false, 1);
    SymbolId m4 = t->intern_marker(verb, false, 2);
    t->freeze();

    // the five-symbol tagged window around [ADJ,NOUN,VERB]:ADJ
    Fst block = linear(
        t, {{m1, m1}, {m2, m2}, {anv, adj}, {m3, m3}, {m4, m4}});

    SUBCASE("no doomed symbols: unchanged") {
        CHECK(rewrite_to_epsilon(block, {}).arcs() == block.arcs());
    }
    SUBCASE("rewriting the markers leaves the center pair") {
        Fst stripped = normalize(rewrite_to_epsilon(block, {m1, m2, m3, m4}));
        CHECK(enumerate_relation(stripped, 2) ==
              PairSet{{{anv}, {adj}}});
    }
    SUBCASE("only markers may be doomed") {
        CHECK_THROWS_AS(rewrite_to_epsilon(block, {conj}), Error);
    }
    SUBCASE("matches the composition formulation on random inputs") {
        // D_r built as the replace transducer: markers to epsilon, the rest identity
        std::vector<Arc> arcs;
        std::set<SymbolId> markers{m1, m2, m3, m4};
        for (SymbolId s : t->sigma())
            arcs.push_back({0, 0, s, markers.count(s) ? kEpsilon : s});
        Fst deleter(1, 0, {0}, arcs, t);

        Rng rng(8);
        for (int i = 0; i < 20; ++i) {
            Fst r = random_transducer(t, rng, false, 3, 6);
            Fst via_compose = compose(invert(deleter), compose(r, deleter));
            Fst via_rewrite = rewrite_to_epsilon(r, markers);
            CHECK(enumerate_relation(normalize(via_compose), 3) ==
                  enumerate_relation(normalize(via_rewrite), 3));
        }
    }
}

TEST_CASE("normalize: canonical minimal form, language preserved") {
    auto t = letters_table(2);
    SymbolId a = sym(t, "a");

    SUBCASE("fixpoint on an already minimal machine") {
        Fst loop(1, 0, {0}, {{0, 0, a, a}}, t);
        Fst n = normalize(loop);
        CHECK(n.num_states() == 1);
        CHECK(normalize(n) == n);
    }
    SUBCASE("union with itself does not grow the normal form") {
        Rng rng(9);
        for (int i = 0; i < 20; ++i) {
            Fst x = random_acceptor(t, rng);
            CHECK(normalize(union_fst(x, x)).num_states() == normalize(x).num_states());
        }
    }
    SUBCASE("language preserved on random acceptors") {
        Rng rng(10);
        for (int i = 0; i < 100; ++i) {
            Fst x = random_acceptor(t, rng);
            CHECK(enumerate_language(normalize(x), 6) == enumerate_language(x, 6));
        }
    }
    SUBCASE("relation preserved on random transducers with epsilons") {
        Rng rng(11);
        for (int i = 0; i < 60; ++i) {
            Fst x = random_transducer(t, rng, true);
            CHECK(enumerate_relation(normalize(x), 4) == enumerate_relation(x, 4));
        }
    }
    SUBCASE("normalize never changes apply results") {
        Rng rng(12);
        for (int i = 0; i < 30; ++i) {
            Fst x = random_transducer(t, rng, false, 4, 8);
            Fst n = normalize(x);
            for (const Word& w : all_strings(t->sigma(), 3)) {
                ApplyResult before = apply(x, w, ApplyMode::All);
                ApplyResult after = apply(n, w, ApplyMode::All);
                CHECK(before.outputs == after.outputs);
            }
        }
    }
}

TEST_CASE("apply modes") {
    auto t = letters_table(3);
    SymbolId a = sym(t, "a"), b = sym(t, "b"), c = sym(t, "c");

    SUBCASE("identity transducer returns its input") {
        Fst id = sigma_star(t);
        ApplyResult r = apply(id, word(t, "ab"), ApplyMode::All);
        CHECK(r.outputs == std::vector<Word>{word(t, "ab")});
        CHECK(r.count == 1);
    }
    SUBCASE("two-way ambiguity counts two") {
        Fst u = union_fst(linear(t, {{a, b}}), linear(t, {{a, c}}));
        CHECK(apply(u, {a}, ApplyMode::Count).count == 2);
    }
    SUBCASE("first is deterministic and lexicographically smallest here") {
        Fst u = union_fst(linear(t, {{a, c}}), linear(t, {{a, b}}));
        ApplyResult r = apply(normalize(u), {a}, ApplyMode::First);
        REQUIRE(r.outputs.size() == 1);
        CHECK(r.outputs[0] == word(t, "b"));
    }
    SUBCASE("count equals the size of the full set on random transducers") {
        Rng rng(13);
        for (int i = 0; i < 30; ++i) {
            Fst x = random_transducer(t, rng, false);
            for (const Word& w : all_strings(t->sigma(), 2)) {
                CHECK(apply(x, w, ApplyMode::Count).count ==
                      apply(x, w, ApplyMode::All).outputs.size());
            }
        }
    }
    SUBCASE("epsilon or ANY in the input is an error") {
        Fst id = sigma_star(t);
        CHECK_THROWS_AS(apply(id, {kEpsilon}, ApplyMode::All), Error);
        CHECK_THROWS_AS(apply(id, {kAny}, ApplyMode::All), Error);
        CHECK_THROWS_AS(apply(id, {12345}, ApplyMode::All), Error);
    }
    SUBCASE("limit exceeded raises an error naming the limit") {
        Fst u = union_fst(linear(t, {{a, b}}), linear(t, {{a, c}}));
        try {
            apply(u, {a}, ApplyMode::All, 1);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("1") != std::string::npos);
        }
    }
}

TEST_CASE("budget errors name the stage") {
    auto t = letters_table(4);
    Rng rng(14);
    Fst x = random_acceptor(t, rng, 8, 24);
    try {
        normalize(x, 1, "preliminary-model");
        // a 1-state budget can only survive for trivial machines
        CHECK(normalize(x).num_states() <= 1);
    } catch (const BudgetError& e) {
        CHECK(e.stage() == "preliminary-model");
        CHECK(std::string(e.what()).find("preliminary-model") != std::string::npos);
    }
}

TEST_CASE("FSTv1 round-trips bit-exactly and preserves the relation") {
    auto t = letters_table(3);
    Rng rng(15);
    for (int i = 0; i < 25; ++i) {
        Fst x = random_transducer(t, rng, true);
        std::string once = fst_to_string(x);
        std::istringstream is(once);
        Fst back = read_fst(is);
        std::string twice = fst_to_string(back);
        CHECK(once == twice);
        CHECK(enumerate_relation(trim(x), 3) == enumerate_relation(back, 3));
    }
}

TEST_CASE("FSTv1 rejects malformed input") {
    std::istringstream no_header("nonsense\n");
    CHECK_THROWS_AS(read_fst(no_header), ParseError);

    std::istringstream bad_arc("FSTv1\nsymbol 3 tag a\narc 0 1 a\n");
    CHECK_THROWS_AS(read_fst(bad_arc), ParseError);

    std::istringstream unknown_symbol("FSTv1\narc 0 1 a a\n");
    CHECK_THROWS_AS(read_fst(unknown_symbol), ParseError);
}
