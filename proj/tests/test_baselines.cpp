#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "sentnet/baselines.hpp"

using namespace sentnet;

namespace {

Corpus corpus_from(const std::string& train_text, const std::vector<std::string>& candidates) {
    std::istringstream in(train_text);
    const auto dialogues = parse_dialogs(in);
    return assemble_corpus(dialogues, {}, {}, candidates);
}

} // namespace

TEST_CASE("an exact-copy candidate ranks first with similarity one") {
    const Corpus corpus = corpus_from("1 b c\tb c\n", {"b c", "d e", "f"});
    const TfIdfIndex index(corpus.train, corpus.candidate_tokens, corpus.vocab.size());
    const auto context = context_tokens_of(corpus.train[0]);
    const auto ranking = index.rank(context);
    CHECK(ranking.front() == 0);
    CHECK(index.similarity(context, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(index.similarity(context, 1) == 0.0);
}

TEST_CASE("disjoint vocabulary scores zero everywhere and keeps index order") {
    const Corpus corpus = corpus_from("1 q r\tx\n", {"x", "y z", "w"});
    const TfIdfIndex index(corpus.train, corpus.candidate_tokens, corpus.vocab.size());
    const auto context = context_tokens_of(corpus.train[0]); // "q r"
    const auto ranking = index.rank(context);
    CHECK(ranking == std::vector<int>{0, 1, 2});
    for (int c = 0; c < 3; ++c) CHECK(index.similarity(context, c) == 0.0);
}

TEST_CASE("three-candidate ranking matches the hand-computed tf-idf table") {
    // docs: context {a,b,c} plus candidates {b}, {b,c}, {d} -> N=4
    // idf: a=1.6931471805599454, b=1, c=1.2876820724517808, d=1.6931471805599454
    const Corpus corpus = corpus_from("1 a b c\tb b\n", {"b b", "b c", "d"});
    const TfIdfIndex index(corpus.train, corpus.candidate_tokens, corpus.vocab.size());

    CHECK(index.idf(corpus.vocab.encode("a")) == doctest::Approx(1.6931471805599454).epsilon(1e-15));
    CHECK(index.idf(corpus.vocab.encode("b")) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(index.idf(corpus.vocab.encode("c")) == doctest::Approx(1.2876820724517808).epsilon(1e-15));

    const auto context = context_tokens_of(corpus.train[0]); // "a b c"
    CHECK(index.similarity(context, 0) == doctest::Approx(0.4254405389711991).epsilon(1e-12));
    CHECK(index.similarity(context, 1) == doctest::Approx(0.69362794217977042).epsilon(1e-12));
    CHECK(index.similarity(context, 2) == 0.0);
    CHECK(index.rank(context) == std::vector<int>{1, 0, 2});
}

TEST_CASE("ranking is invariant under scaling the context counts") {
    const Corpus corpus = corpus_from("1 a b c\tb b\n", {"b b", "b c", "d"});
    const TfIdfIndex index(corpus.train, corpus.candidate_tokens, corpus.vocab.size());
    const auto context = context_tokens_of(corpus.train[0]);
    std::vector<int> tripled;
    for (int rep = 0; rep < 3; ++rep)
        tripled.insert(tripled.end(), context.begin(), context.end());
    CHECK(index.rank(context) == index.rank(tripled));
}

TEST_CASE("q2a picks the most frequent response for a seen query") {
    const Corpus corpus = corpus_from(
        "1 hi\tr1\n\n1 hi\tr1\n\n1 hi\tr2\n", {"r1", "r2", "r5"});
    const Q2AMap map(corpus.train);
    CHECK(map.predict(corpus.train[0]) == 0);
}

TEST_CASE("q2a falls back to the global mode for unseen queries") {
    const Corpus corpus = corpus_from(
        "1 hi\tr5\n\n1 hello\tr5\n\n1 hey\tr1\n", {"r1", "r2", "r5"});
    const Q2AMap map(corpus.train);
    DialogueExample unseen = corpus.train[0];
    unseen.query.tokens = {999}; // never seen
    CHECK(map.predict(unseen) == 2); // r5 occurs twice
}

TEST_CASE("q2a breaks frequency ties toward the lowest candidate index") {
    const Corpus corpus = corpus_from("1 hi\tr2\n\n1 hi\tr1\n", {"r1", "r2"});
    const Q2AMap map(corpus.train);
    CHECK(map.predict(corpus.train[0]) == 0);
    DialogueExample unseen = corpus.train[0];
    unseen.query.tokens = {999};
    CHECK(map.predict(unseen) == 0);
}

TEST_CASE("a single-example train set predicts its own response") {
    const Corpus corpus = corpus_from("1 book me a table\tr2\n", {"r1", "r2"});
    const Q2AMap map(corpus.train);
    CHECK(map.predict(corpus.train[0]) == 1);
}

TEST_CASE("q2a on an empty train set throws at predict time") {
    const Corpus corpus = corpus_from("1 hi\tr1\n", {"r1"});
    const Q2AMap map(std::vector<DialogueExample>{});
    CHECK_THROWS_AS(map.predict(corpus.train[0]), ContractError);
}

TEST_CASE("both baselines replay a unique-query train set perfectly") {
    // contexts are exact copies of their gold candidates and query keys unique
    const Corpus corpus =
        corpus_from("1 b c\tb c\n\n1 d e\td e\n\n1 f g h\tf g h\n", {"b c", "d e", "f g h"});
    const TfIdfIndex index(corpus.train, corpus.candidate_tokens, corpus.vocab.size());
    const Q2AMap map(corpus.train);
    for (const auto& ex : corpus.train) {
        CHECK(index.predict(ex) == ex.label);
        CHECK(map.predict(ex) == ex.label);
    }
}
