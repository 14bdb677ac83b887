#include "sentnet/graph.hpp"

#include <algorithm>
#include <cmath>

namespace sentnet {

namespace {

constexpr double kNormFloor = 1e-12;
constexpr double kLogFloor = 1e-12;

void require(bool cond, const std::string& msg) {
    if (!cond) throw ShapeError(msg);
}

} // namespace

const char* op_name(OpKind k) {
    switch (k) {
        case OpKind::Input: return "input";
        case OpKind::MatMul: return "matmul";
        case OpKind::Add: return "add";
        case OpKind::ElementwiseMul: return "elementwise_mul";
        case OpKind::Dot: return "dot";
        case OpKind::Sigmoid: return "sigmoid";
        case OpKind::Relu: return "relu";
        case OpKind::Softmax: return "softmax";
        case OpKind::L2Normalize: return "l2normalize";
        case OpKind::Concat: return "concat";
        case OpKind::Scale: return "scale";
        case OpKind::EmbedLookup: return "embed_lookup";
        case OpKind::Dropout: return "dropout";
        case OpKind::Log: return "log";
    }
    return "?";
}

int Graph::constant(Tensor t) {
    Node n;
    n.op = OpKind::Input;
    n.value = std::move(t);
    nodes_.push_back(std::move(n));
    return size() - 1;
}

int Graph::param(const std::string& name, const Tensor& t, bool trainable) {
    Node n;
    n.op = OpKind::Input;
    n.value = t;
    n.requires_grad = trainable;
    if (trainable) n.param_name = name;
    nodes_.push_back(std::move(n));
    return size() - 1;
}

int Graph::apply(OpKind kind, const std::vector<int>& inputs) {
    Node n;
    n.op = kind;
    n.inputs = inputs;
    for (int id : inputs) {
        if (id < 0 || id >= size())
            throw ContractError("graph: input node id out of range");
        if (nodes_[static_cast<std::size_t>(id)].requires_grad) n.requires_grad = true;
    }
    n.value = eval(n);
    nodes_.push_back(std::move(n));
    return size() - 1;
}

int Graph::embed_lookup(int table, int row) {
    const Tensor& t = value(table);
    require(t.rank() == 2, std::string("embed_lookup: table must be rank 2, got ") + shape_str(t.shape));
    if (row < 0 || row >= t.rows())
        throw ContractError("embed_lookup: row " + std::to_string(row) + " out of range for table " +
                            shape_str(t.shape));
    Node n;
    n.op = OpKind::EmbedLookup;
    n.inputs = {table};
    n.aux = row;
    n.requires_grad = nodes_[static_cast<std::size_t>(table)].requires_grad;
    n.value = eval(n);
    nodes_.push_back(std::move(n));
    return size() - 1;
}

int Graph::dropout(int x, double keep_prob, Rng& rng) {
    if (!(keep_prob > 0.0 && keep_prob <= 1.0))
        throw RangeError("dropout: keep probability must be in (0, 1]");
    Node n;
    n.op = OpKind::Dropout;
    n.inputs = {x};
    n.keep_prob = keep_prob;
    n.requires_grad = nodes_[static_cast<std::size_t>(x)].requires_grad;
    const Tensor& in = value(x);
    n.mask.resize(in.size());
    for (double& m : n.mask) m = rng.bernoulli(keep_prob) ? 1.0 : 0.0;
    n.value = eval(n);
    nodes_.push_back(std::move(n));
    return size() - 1;
}

Tensor Graph::eval(const Node& n) const {
    auto in = [&](std::size_t i) -> const Tensor& { return value(n.inputs[i]); };
    switch (n.op) {
        case OpKind::Input:
            return n.value;
        case OpKind::MatMul: {
            const Tensor& a = in(0);
            const Tensor& b = in(1);
            require(a.rank() == 2, "matmul: left operand must be rank 2, got " + shape_str(a.shape));
            if (b.rank() == 1) {
                require(a.cols() == b.rows(),
                        "matmul: " + shape_str(a.shape) + " x " + shape_str(b.shape));
                Tensor out = Tensor::zeros({a.rows()});
                for (int r = 0; r < a.rows(); ++r) {
                    double s = 0.0;
                    const double* row = &a.data[static_cast<std::size_t>(r) * a.cols()];
                    for (int c = 0; c < a.cols(); ++c) s += row[c] * b.data[static_cast<std::size_t>(c)];
                    out.data[static_cast<std::size_t>(r)] = s;
                }
                return out;
            }
            require(b.rank() == 2 && a.cols() == b.rows(),
                    "matmul: " + shape_str(a.shape) + " x " + shape_str(b.shape));
            Tensor out = Tensor::zeros({a.rows(), b.cols()});
            for (int r = 0; r < a.rows(); ++r)
                for (int k = 0; k < a.cols(); ++k) {
                    const double av = a.at(r, k);
                    if (av == 0.0) continue;
                    for (int c = 0; c < b.cols(); ++c) out.at(r, c) += av * b.at(k, c);
                }
            return out;
        }
        case OpKind::Add: {
            const Tensor& a = in(0);
            const Tensor& b = in(1);
            require(a.same_shape(b), "add: " + shape_str(a.shape) + " vs " + shape_str(b.shape));
            Tensor out = a;
            for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += b.data[i];
            return out;
        }
        case OpKind::ElementwiseMul: {
            const Tensor& a = in(0);
            const Tensor& b = in(1);
            require(a.same_shape(b),
                    "elementwise_mul: " + shape_str(a.shape) + " vs " + shape_str(b.shape));
            Tensor out = a;
            for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= b.data[i];
            return out;
        }
        case OpKind::Dot: {
            const Tensor& a = in(0);
            const Tensor& b = in(1);
            require(a.size() == b.size(), "dot: " + shape_str(a.shape) + " vs " + shape_str(b.shape));
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
            return Tensor::scalar(s);
        }
        case OpKind::Sigmoid: {
            Tensor out = in(0);
            for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
            return out;
        }
        case OpKind::Relu: {
            Tensor out = in(0);
            for (double& v : out.data) v = v > 0.0 ? v : 0.0;
            return out;
        }
        case OpKind::Softmax: {
            const Tensor& x = in(0);
            require(x.rank() == 1, "softmax: rank-1 input required, got " + shape_str(x.shape));
            Tensor out = x;
            const double mx = *std::max_element(out.data.begin(), out.data.end());
            double sum = 0.0;
            for (double& v : out.data) {
                v = std::exp(v - mx);
                sum += v;
            }
            for (double& v : out.data) v /= sum;
            return out;
        }
        case OpKind::L2Normalize: {
            const Tensor& x = in(0);
            require(x.rank() == 1, "l2normalize: rank-1 input required, got " + shape_str(x.shape));
            const double norm = x.l2_norm();
            if (norm < kNormFloor)
                throw DegenerateNormError("l2normalize: input norm " + std::to_string(norm) +
                                          " below 1e-12");
            Tensor out = x;
            for (double& v : out.data) v /= norm;
            return out;
        }
        case OpKind::Concat: {
            require(!n.inputs.empty(), "concat: at least one input required");
            int total = 0;
            for (int id : n.inputs) {
                require(value(id).rank() == 1,
                        "concat: rank-1 inputs required, got " + shape_str(value(id).shape));
                total += value(id).rows();
            }
            Tensor out = Tensor::zeros({total});
            std::size_t off = 0;
            for (int id : n.inputs) {
                const Tensor& x = value(id);
                std::copy(x.data.begin(), x.data.end(), out.data.begin() + off);
                off += x.size();
            }
            return out;
        }
        case OpKind::Scale: {
            const Tensor& x = in(0);
            const Tensor& s = in(1);
            require(s.size() == 1, "scale: second operand must be scalar, got " + shape_str(s.shape));
            Tensor out = x;
            for (double& v : out.data) v *= s.data[0];
            return out;
        }
        case OpKind::EmbedLookup: {
            const Tensor& t = in(0);
            Tensor out = Tensor::zeros({t.cols()});
            const double* row = &t.data[static_cast<std::size_t>(n.aux) * t.cols()];
            std::copy(row, row + t.cols(), out.data.begin());
            return out;
        }
        case OpKind::Dropout: {
            Tensor out = in(0);
            for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= n.mask[i] / n.keep_prob;
            return out;
        }
        case OpKind::Log: {
            Tensor out = in(0);
            for (double& v : out.data) v = std::log(v > kLogFloor ? v : kLogFloor);
            return out;
        }
    }
    throw ContractError("graph: unknown op");
}

Tensor& Graph::grad_buf(int id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.grad.data.empty()) n.grad = Tensor::zeros(n.value.shape);
    return n.grad;
}

void Graph::backward(int loss_node) {
    if (loss_node < 0 || loss_node >= size())
        throw ContractError("backward: loss node id out of range");
    if (value(loss_node).size() != 1)
        throw ContractError("backward: loss must be scalar, got " +
                            shape_str(value(loss_node).shape));
    for (Node& n : nodes_) n.grad = Tensor();
    grad_buf(loss_node).data[0] = 1.0;
    for (int id = loss_node; id >= 0; --id) {
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        if (n.op == OpKind::Input || n.grad.data.empty() || !n.requires_grad) continue;
        accumulate(n);
    }
}

void Graph::accumulate(const Node& n) {
    const Tensor& g = n.grad;
    auto needs = [&](std::size_t i) {
        return nodes_[static_cast<std::size_t>(n.inputs[i])].requires_grad;
    };
    auto in = [&](std::size_t i) -> const Tensor& { return value(n.inputs[i]); };
    auto gbuf = [&](std::size_t i) -> Tensor& { return grad_buf(n.inputs[i]); };

    switch (n.op) {
        case OpKind::Input:
            return;
        case OpKind::MatMul: {
            const Tensor& a = in(0);
            const Tensor& b = in(1);
            if (b.rank() == 1) {
                // out_r = sum_c a[r,c] b[c]
                if (needs(0)) {
                    Tensor& da = gbuf(0);
                    for (int r = 0; r < a.rows(); ++r) {
                        const double gr = g.data[static_cast<std::size_t>(r)];
                        if (gr == 0.0) continue;
                        double* drow = &da.data[static_cast<std::size_t>(r) * a.cols()];
                        for (int c = 0; c < a.cols(); ++c) drow[c] += gr * b.data[static_cast<std::size_t>(c)];
                    }
                }
                if (needs(1)) {
                    Tensor& db = gbuf(1);
                    for (int r = 0; r < a.rows(); ++r) {
                        const double gr = g.data[static_cast<std::size_t>(r)];
                        if (gr == 0.0) continue;
                        const double* arow = &a.data[static_cast<std::size_t>(r) * a.cols()];
                        for (int c = 0; c < a.cols(); ++c) db.data[static_cast<std::size_t>(c)] += gr * arow[c];
                    }
                }
            } else {
                if (needs(0)) {
                    Tensor& da = gbuf(0);
                    for (int r = 0; r < a.rows(); ++r)
                        for (int k = 0; k < a.cols(); ++k) {
                            double s = 0.0;
                            for (int c = 0; c < b.cols(); ++c) s += g.at(r, c) * b.at(k, c);
                            da.at(r, k) += s;
                        }
                }
                if (needs(1)) {
                    Tensor& db = gbuf(1);
                    for (int k = 0; k < b.rows(); ++k)
                        for (int c = 0; c < b.cols(); ++c) {
                            double s = 0.0;
                            for (int r = 0; r < a.rows(); ++r) s += a.at(r, k) * g.at(r, c);
                            db.at(k, c) += s;
                        }
                }
            }
            return;
        }
        case OpKind::Add: {
            for (std::size_t i = 0; i < 2; ++i)
                if (needs(i)) {
                    Tensor& d = gbuf(i);
                    for (std::size_t k = 0; k < g.size(); ++k) d.data[k] += g.data[k];
                }
            return;
        }
        case OpKind::ElementwiseMul: {
            if (needs(0)) {
                Tensor& d = gbuf(0);
                const Tensor& b = in(1);
                for (std::size_t k = 0; k < g.size(); ++k) d.data[k] += g.data[k] * b.data[k];
            }
            if (needs(1)) {
                Tensor& d = gbuf(1);
                const Tensor& a = in(0);
                for (std::size_t k = 0; k < g.size(); ++k) d.data[k] += g.data[k] * a.data[k];
            }
            return;
        }
        case OpKind::Dot: {
            const double gs = g.data[0];
            if (needs(0)) {
                Tensor& d = gbuf(0);
                const Tensor& b = in(1);
                for (std::size_t k = 0; k < b.size(); ++k) d.data[k] += gs * b.data[k];
            }
            if (needs(1)) {
                Tensor& d = gbuf(1);
                const Tensor& a = in(0);
                for (std::size_t k = 0; k < a.size(); ++k) d.data[k] += gs * a.data[k];
            }
            return;
        }
        case OpKind::Sigmoid: {
            Tensor& d = gbuf(0);
            for (std::size_t k = 0; k < g.size(); ++k) {
                const double y = n.value.data[k];
                d.data[k] += g.data[k] * y * (1.0 - y);
            }
            return;
        }
        case OpKind::Relu: {
            Tensor& d = gbuf(0);
            const Tensor& x = in(0);
            for (std::size_t k = 0; k < g.size(); ++k)
                if (x.data[k] > 0.0) d.data[k] += g.data[k];
            return;
        }
        case OpKind::Softmax: {
            // dx = y * (g - <y, g>)
            Tensor& d = gbuf(0);
            double dot = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k) dot += n.value.data[k] * g.data[k];
            for (std::size_t k = 0; k < g.size(); ++k)
                d.data[k] += n.value.data[k] * (g.data[k] - dot);
            return;
        }
        case OpKind::L2Normalize: {
            // dx = (g - y * <y, g>) / |x|
            Tensor& d = gbuf(0);
            const double norm = in(0).l2_norm();
            double dot = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k) dot += n.value.data[k] * g.data[k];
            for (std::size_t k = 0; k < g.size(); ++k)
                d.data[k] += (g.data[k] - n.value.data[k] * dot) / norm;
            return;
        }
        case OpKind::Concat: {
            std::size_t off = 0;
            for (std::size_t i = 0; i < n.inputs.size(); ++i) {
                const std::size_t len = in(i).size();
                if (needs(i)) {
                    Tensor& d = gbuf(i);
                    for (std::size_t k = 0; k < len; ++k) d.data[k] += g.data[off + k];
                }
                off += len;
            }
            return;
        }
        case OpKind::Scale: {
            const double s = in(1).data[0];
            if (needs(0)) {
                Tensor& d = gbuf(0);
                for (std::size_t k = 0; k < g.size(); ++k) d.data[k] += g.data[k] * s;
            }
            if (needs(1)) {
                Tensor& d = gbuf(1);
                const Tensor& x = in(0);
                double acc = 0.0;
                for (std::size_t k = 0; k < g.size(); ++k) acc += g.data[k] * x.data[k];
                d.data[0] += acc;
            }
            return;
        }
        case OpKind::EmbedLookup: {
            Tensor& d = gbuf(0);
            const int cols = in(0).cols();
            double* drow = &d.data[static_cast<std::size_t>(n.aux) * cols];
            for (int c = 0; c < cols; ++c) drow[c] += g.data[static_cast<std::size_t>(c)];
            return;
        }
        case OpKind::Dropout: {
            Tensor& d = gbuf(0);
            for (std::size_t k = 0; k < g.size(); ++k)
                d.data[k] += g.data[k] * n.mask[k] / n.keep_prob;
            return;
        }
        case OpKind::Log: {
            Tensor& d = gbuf(0);
            const Tensor& x = in(0);
            for (std::size_t k = 0; k < g.size(); ++k)
                if (x.data[k] > kLogFloor) d.data[k] += g.data[k] / x.data[k];
            return;
        }
    }
}

GradMap Graph::param_grads() const {
    GradMap out;
    for (const Node& n : nodes_) {
        if (n.param_name.empty()) continue;
        if (!n.grad.data.empty())
            out[n.param_name] = n.grad;
        else
            out[n.param_name] = Tensor::zeros(n.value.shape);
    }
    return out;
}

} // namespace sentnet
