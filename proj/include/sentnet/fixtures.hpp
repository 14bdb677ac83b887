#pragma once

#include <memory>

#include "sentnet/model.hpp"

namespace sentnet {

struct ToyFixture {
    std::unique_ptr<ResponseModel> model;
    DialogueExample example;
};

// Small fixed-size model plus a three-source example for gradient checking and
// diagnostics; deterministic per seed.
ToyFixture make_toy_fixture(const std::string& model_kind, int d, int m, int vocab_size, int c,
                            std::uint64_t seed);

} // namespace sentnet
