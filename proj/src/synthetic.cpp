#include "sentnet/synthetic.hpp"

#include <filesystem>
#include <fstream>

#include "sentnet/rng.hpp"

namespace sentnet {

namespace {

const std::vector<std::string> kCuisines = {"indian", "italian", "thai"};
const std::vector<std::string> kLocations = {"london", "paris", "tokyo"};
const std::vector<std::string> kPrices = {"cheap", "expensive"};
constexpr int kNumRestaurants = 20;

const std::vector<std::string> kGreetings = {"hello", "good morning", "hi there"};

std::string resto(int i) { return "resto_" + std::to_string(i + 1); }

const char* kSysGreet = "hello what can i help you with today";
const char* kSysPrice = "which price range are you looking for";
const char* kSysNoted = "ok let me keep that in mind";
const char* kSysUpdate = "sure is there anything else to update";

std::string api_call(const std::string& c, const std::string& l, const std::string& p) {
    return "api_call " + c + " " + l + " " + p;
}

std::string recommend(int r) { return "what do you think of this option : " + resto(r); }

std::vector<RawDialogue> gen_split(int n_dialogues, Rng& rng) {
    std::vector<RawDialogue> dialogues;
    dialogues.reserve(static_cast<std::size_t>(n_dialogues));
    for (int i = 0; i < n_dialogues; ++i) {
        RawDialogue d;
        auto exchange = [&](const std::string& u, const std::string& s) {
            RawDialogue::Line line;
            line.user = u;
            line.system = s;
            d.lines.push_back(std::move(line));
        };
        auto kb = [&](const std::string& text) {
            RawDialogue::Line line;
            line.is_kb = true;
            line.kb = text;
            d.lines.push_back(std::move(line));
        };

        std::string cuisine = kCuisines[rng.below(kCuisines.size())];
        const std::string location = kLocations[rng.below(kLocations.size())];
        const std::string price = kPrices[rng.below(kPrices.size())];
        const int gold = static_cast<int>(rng.below(kNumRestaurants));
        auto draw_decoy = [&] {
            int decoy = static_cast<int>(rng.below(kNumRestaurants));
            while (decoy == gold) decoy = static_cast<int>(rng.below(kNumRestaurants));
            return decoy;
        };

        exchange(kGreetings[rng.below(kGreetings.size())], kSysGreet);
        exchange("i would like " + cuisine + " food in " + location, kSysPrice);
        if (rng.bernoulli(0.5))
            exchange("my friend says " + resto(draw_decoy()) + " is awful", kSysNoted);
        if (rng.bernoulli(0.3)) {
            cuisine = kCuisines[rng.below(kCuisines.size())];
            exchange("actually make it " + cuisine + " food", kSysUpdate);
        }
        exchange("in a " + price + " price range please", api_call(cuisine, location, price));
        kb(resto(gold) + " r_cuisine " + cuisine);
        kb(resto(gold) + " r_location " + location);
        kb(resto(gold) + " r_rating " + std::to_string(1 + rng.below(8)));
        // Half of the closing turns name another restaurant to rule out, so
        // the query itself mentions a wrong-answer entity.
        if (rng.bernoulli(0.5))
            exchange("no , thanks ! anywhere but " + resto(draw_decoy()), recommend(gold));
        else
            exchange("no , thanks !", recommend(gold));
        dialogues.push_back(std::move(d));
    }
    return dialogues;
}

} // namespace

SyntheticCorpus gen_synthetic_raw(int n_dialogues, std::uint64_t seed) {
    if (n_dialogues < 1) throw RangeError("gen_synthetic: n_dialogues must be >= 1");
    SyntheticCorpus out;
    {
        Rng rng(seed * 2654435761ull + 1);
        out.train = gen_split(n_dialogues, rng);
    }
    const int held_out = std::max(1, n_dialogues / 5);
    {
        Rng rng(seed * 2654435761ull + 2);
        out.valid = gen_split(held_out, rng);
    }
    {
        Rng rng(seed * 2654435761ull + 3);
        out.test = gen_split(held_out, rng);
    }

    // Candidate space is enumerated up front, independent of the sampled
    // dialogues, so every split's responses are always covered.
    out.candidates.push_back(kSysGreet);
    out.candidates.push_back(kSysPrice);
    out.candidates.push_back(kSysNoted);
    out.candidates.push_back(kSysUpdate);
    for (const auto& c : kCuisines)
        for (const auto& l : kLocations)
            for (const auto& p : kPrices) out.candidates.push_back(api_call(c, l, p));
    for (int r = 0; r < kNumRestaurants; ++r) out.candidates.push_back(recommend(r));

    auto tag_all = [&](const std::string& text, const std::string& tag) {
        for (const auto& tok : tokenize(text)) out.pos_lexicon.emplace(tok, tag);
    };
    for (const auto& c : kCuisines) tag_all(c, "NOUN");
    for (const auto& l : kLocations) tag_all(l, "PROPN");
    for (const auto& p : kPrices) tag_all(p, "ADJ");
    for (int r = 0; r < kNumRestaurants; ++r) tag_all(resto(r), "PROPN");
    for (int k = 1; k <= 8; ++k) tag_all(std::to_string(k), "NUM");
    tag_all("hello hi there good morning thanks", "INTJ");
    tag_all("i you my friend table food option price range anything else", "NOUN");
    tag_all("would like says is make book looking keep let help can do think update", "VERB");
    tag_all("a an the this that", "DET");
    tag_all("in with of for r_cuisine r_location r_rating api_call", "ADP");
    tag_all("no not awful ok sure what which today please actually anywhere but though", "ADV");
    tag_all(", ! . ? : ;", "PUNCT");
    return out;
}

Corpus gen_synthetic(int n_dialogues, std::uint64_t seed, bool with_pos) {
    const SyntheticCorpus raw = gen_synthetic_raw(n_dialogues, seed);
    return assemble_corpus(raw.train, raw.valid, raw.test, raw.candidates,
                           with_pos ? &raw.pos_lexicon : nullptr);
}

void write_synthetic_dir(const SyntheticCorpus& corpus, const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto write_split = [&](const std::vector<RawDialogue>& dlgs, const std::string& name) {
        std::ofstream out(dir + "/" + name);
        if (!out) throw FormatError(dir + "/" + name + ": cannot open for writing");
        serialize_dialogs(dlgs, out);
    };
    write_split(corpus.train, "train.txt");
    write_split(corpus.valid, "valid.txt");
    write_split(corpus.test, "test.txt");
    {
        std::ofstream out(dir + "/candidates.txt");
        for (const auto& c : corpus.candidates) out << c << "\n";
    }
    {
        std::ofstream out(dir + "/pos_lexicon.txt");
        for (const auto& [tok, tag] : corpus.pos_lexicon) out << tok << "\t" << tag << "\n";
    }
}

} // namespace sentnet
