#pragma once

#include <map>
#include <string>
#include <vector>

#include "sentnet/rng.hpp"
#include "sentnet/tensor.hpp"

namespace sentnet {

// Op kinds recorded on graph nodes. Each op defines its own shape contract;
// violations raise ShapeError naming the op and the offending shapes.
enum class OpKind {
    Input,         // leaf (constant or parameter)
    MatMul,        // (a x b)·(b x c) -> (a x c); (a x b)·(b) -> (a)
    Add,           // elementwise, equal shapes
    ElementwiseMul,// elementwise, equal shapes
    Dot,           // equal element counts -> scalar
    Sigmoid,       // elementwise
    Relu,          // elementwise
    Softmax,       // rank-1
    L2Normalize,   // rank-1, input norm >= 1e-12
    Concat,        // rank-1 inputs -> rank-1
    Scale,         // (x, scalar) -> x-shaped
    EmbedLookup,   // (table (V x d), row) -> (d)
    Dropout,       // elementwise seeded Bernoulli mask, inverted scaling
    Log,           // elementwise ln(max(x, 1e-12))
};

const char* op_name(OpKind k);

using GradMap = std::map<std::string, Tensor>;

// Tape of operation records. Forward values are computed eagerly as nodes are
// appended, so node order is a topological order by construction. backward()
// walks the tape in reverse and accumulates gradients into every node that
// requires them.
class Graph {
public:
    struct Node {
        OpKind op = OpKind::Input;
        std::vector<int> inputs;
        Tensor value;
        Tensor grad;            // allocated lazily in backward()
        bool requires_grad = false;
        int aux = -1;           // embed_lookup row
        double keep_prob = 1.0; // dropout
        std::vector<double> mask; // dropout mask, values in {0, 1}
        std::string param_name; // non-empty for trainable parameter leaves
    };

    // Leaf with no gradient.
    int constant(Tensor t);
    int scalar(double v) { return constant(Tensor::scalar(v)); }

    // Parameter leaf; gradient is collected under `name` if trainable.
    int param(const std::string& name, const Tensor& t, bool trainable = true);

    // Generic op application; computes the forward value immediately.
    int apply(OpKind kind, const std::vector<int>& inputs);

    int matmul(int a, int b) { return apply(OpKind::MatMul, {a, b}); }
    int add(int a, int b) { return apply(OpKind::Add, {a, b}); }
    int mul(int a, int b) { return apply(OpKind::ElementwiseMul, {a, b}); }
    int dot(int a, int b) { return apply(OpKind::Dot, {a, b}); }
    int sigmoid(int x) { return apply(OpKind::Sigmoid, {x}); }
    int relu(int x) { return apply(OpKind::Relu, {x}); }
    int softmax(int x) { return apply(OpKind::Softmax, {x}); }
    int l2normalize(int x) { return apply(OpKind::L2Normalize, {x}); }
    int concat(const std::vector<int>& xs) { return apply(OpKind::Concat, xs); }
    int scale(int x, int s) { return apply(OpKind::Scale, {x, s}); }
    int log(int x) { return apply(OpKind::Log, {x}); }
    int embed_lookup(int table, int row);
    int dropout(int x, double keep_prob, Rng& rng);

    // Reverse pass from a scalar loss node. Every reachable node that requires
    // a gradient ends up with one of matching shape.
    void backward(int loss_node);

    // Gradients of trainable parameter leaves, keyed by parameter name.
    // Valid after backward().
    GradMap param_grads() const;

    const Tensor& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    const Tensor& grad(int id) const { return nodes_[static_cast<std::size_t>(id)].grad; }
    const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    int size() const { return static_cast<int>(nodes_.size()); }
    void reserve(std::size_t n) { nodes_.reserve(n); }

private:
    std::vector<Node> nodes_;

    Tensor eval(const Node& n) const;
    void accumulate(const Node& n);
    Tensor& grad_buf(int id);
};

} // namespace sentnet
