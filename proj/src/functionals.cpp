#include "levysim/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levysim/errors.hpp"

namespace levysim {

// --- scalar expressions -----------------------------------------------------

struct ScalarExpr::Node {
    Op op = Op::Const;
    double value = 0.0;  // Const payload
    int index = 0;       // Arg payload / IPow exponent
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

namespace {

using SNode = ScalarExpr::Node;

std::shared_ptr<const SNode> snode(ScalarExpr::Op op, double value, int index,
                                   std::shared_ptr<const SNode> a = nullptr,
                                   std::shared_ptr<const SNode> b = nullptr) {
    auto n = std::make_shared<SNode>();
    n->op = op;
    n->value = value;
    n->index = index;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

const char* scalar_op_name(ScalarExpr::Op op) {
    switch (op) {
        case ScalarExpr::Op::Const: return "const";
        case ScalarExpr::Op::Arg: return "arg";
        case ScalarExpr::Op::Add: return "add";
        case ScalarExpr::Op::Sub: return "sub";
        case ScalarExpr::Op::Mul: return "mul";
        case ScalarExpr::Op::Div: return "div";
        case ScalarExpr::Op::Neg: return "neg";
        case ScalarExpr::Op::Exp: return "exp";
        case ScalarExpr::Op::Sin: return "sin";
        case ScalarExpr::Op::Cos: return "cos";
        case ScalarExpr::Op::Tanh: return "tanh";
        case ScalarExpr::Op::Bump: return "bump";
        case ScalarExpr::Op::IPow: return "ipow";
    }
    return "?";
}

double eval_scalar(const SNode& n, std::span<const double> args) {
    switch (n.op) {
        case ScalarExpr::Op::Const: return n.value;
        case ScalarExpr::Op::Arg:
            if (n.index < 0 || static_cast<std::size_t>(n.index) >= args.size()) {
                throw DomainError("argument index out of range", scalar_op_name(n.op));
            }
            return args[static_cast<std::size_t>(n.index)];
        case ScalarExpr::Op::Add: return eval_scalar(*n.a, args) + eval_scalar(*n.b, args);
        case ScalarExpr::Op::Sub: return eval_scalar(*n.a, args) - eval_scalar(*n.b, args);
        case ScalarExpr::Op::Mul: return eval_scalar(*n.a, args) * eval_scalar(*n.b, args);
        case ScalarExpr::Op::Div: {
            const double den = eval_scalar(*n.b, args);
            if (den == 0.0) throw DomainError("division by zero", "div");
            return eval_scalar(*n.a, args) / den;
        }
        case ScalarExpr::Op::Neg: return -eval_scalar(*n.a, args);
        case ScalarExpr::Op::Exp: return std::exp(eval_scalar(*n.a, args));
        case ScalarExpr::Op::Sin: return std::sin(eval_scalar(*n.a, args));
        case ScalarExpr::Op::Cos: return std::cos(eval_scalar(*n.a, args));
        case ScalarExpr::Op::Tanh: return std::tanh(eval_scalar(*n.a, args));
        case ScalarExpr::Op::Bump: {
            const double u = eval_scalar(*n.a, args);
            if (std::abs(u) >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - u * u));
        }
        case ScalarExpr::Op::IPow: {
            const double base = eval_scalar(*n.a, args);
            const int e = n.index;
            if (e < 0 && base == 0.0) throw DomainError("zero to a negative power", "ipow");
            double r = 1.0;
            const double x = e < 0 ? 1.0 / base : base;
            for (int i = 0; i < std::abs(e); ++i) r *= x;
            return r;
        }
    }
    throw std::logic_error("unhandled scalar op");
}

int scalar_arity(const SNode& n) {
    int m = 0;
    if (n.op == ScalarExpr::Op::Arg) m = n.index + 1;
    if (n.a) m = std::max(m, scalar_arity(*n.a));
    if (n.b) m = std::max(m, scalar_arity(*n.b));
    return m;
}

}  // namespace

ScalarExpr ScalarExpr::constant(double value) { return ScalarExpr(snode(Op::Const, value, 0)); }
ScalarExpr ScalarExpr::arg(int index) {
    if (index < 0) throw std::invalid_argument("argument index must be nonnegative");
    return ScalarExpr(snode(Op::Arg, 0.0, index));
}
ScalarExpr ScalarExpr::add(ScalarExpr a, ScalarExpr b) {
    return ScalarExpr(snode(Op::Add, 0, 0, std::move(a.node_), std::move(b.node_)));
}
ScalarExpr ScalarExpr::sub(ScalarExpr a, ScalarExpr b) {
    return ScalarExpr(snode(Op::Sub, 0, 0, std::move(a.node_), std::move(b.node_)));
}
ScalarExpr ScalarExpr::mul(ScalarExpr a, ScalarExpr b) {
    return ScalarExpr(snode(Op::Mul, 0, 0, std::move(a.node_), std::move(b.node_)));
}
ScalarExpr ScalarExpr::div(ScalarExpr a, ScalarExpr b) {
    return ScalarExpr(snode(Op::Div, 0, 0, std::move(a.node_), std::move(b.node_)));
}
ScalarExpr ScalarExpr::neg(ScalarExpr a) { return ScalarExpr(snode(Op::Neg, 0, 0, std::move(a.node_))); }
ScalarExpr ScalarExpr::exp(ScalarExpr a) { return ScalarExpr(snode(Op::Exp, 0, 0, std::move(a.node_))); }
ScalarExpr ScalarExpr::sin(ScalarExpr a) { return ScalarExpr(snode(Op::Sin, 0, 0, std::move(a.node_))); }
ScalarExpr ScalarExpr::cos(ScalarExpr a) { return ScalarExpr(snode(Op::Cos, 0, 0, std::move(a.node_))); }
ScalarExpr ScalarExpr::tanh(ScalarExpr a) { return ScalarExpr(snode(Op::Tanh, 0, 0, std::move(a.node_))); }
ScalarExpr ScalarExpr::bump(ScalarExpr a) { return ScalarExpr(snode(Op::Bump, 0, 0, std::move(a.node_))); }
ScalarExpr ScalarExpr::ipow(ScalarExpr base, int exponent) {
    return ScalarExpr(snode(Op::IPow, 0, exponent, std::move(base.node_)));
}

double ScalarExpr::eval(std::span<const double> args) const { return eval_scalar(*node_, args); }

int ScalarExpr::arity() const { return scalar_arity(*node_); }

nlohmann::json ScalarExpr::to_json() const {
    const Node& n = *node_;
    nlohmann::json doc{{"op", scalar_op_name(n.op)}};
    switch (n.op) {
        case Op::Const: doc["value"] = n.value; break;
        case Op::Arg: doc["index"] = n.index; break;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
            doc["lhs"] = ScalarExpr(n.a).to_json();
            doc["rhs"] = ScalarExpr(n.b).to_json();
            break;
        case Op::IPow:
            doc["base"] = ScalarExpr(n.a).to_json();
            doc["exponent"] = n.index;
            break;
        default: doc["arg"] = ScalarExpr(n.a).to_json(); break;
    }
    return doc;
}

ScalarExpr ScalarExpr::from_json(const nlohmann::json& doc) {
    const std::string op = doc.at("op").get<std::string>();
    if (op == "const") return constant(doc.at("value").get<double>());
    if (op == "arg") return arg(doc.at("index").get<int>());
    if (op == "add") return add(from_json(doc.at("lhs")), from_json(doc.at("rhs")));
    if (op == "sub") return sub(from_json(doc.at("lhs")), from_json(doc.at("rhs")));
    if (op == "mul") return mul(from_json(doc.at("lhs")), from_json(doc.at("rhs")));
    if (op == "div") return div(from_json(doc.at("lhs")), from_json(doc.at("rhs")));
    if (op == "neg") return neg(from_json(doc.at("arg")));
    if (op == "exp") return exp(from_json(doc.at("arg")));
    if (op == "sin") return sin(from_json(doc.at("arg")));
    if (op == "cos") return cos(from_json(doc.at("arg")));
    if (op == "tanh") return tanh(from_json(doc.at("arg")));
    if (op == "bump") return bump(from_json(doc.at("arg")));
    if (op == "ipow") return ipow(from_json(doc.at("base")), doc.at("exponent").get<int>());
    throw std::invalid_argument("unknown scalar op: " + op);
}

// --- functionals ------------------------------------------------------------

struct Functional::Node {
    Op op = Op::Constant;
    double value = 0.0;  // Constant payload / Coordinate time / sup+integral horizon
    ScalarExpr phi;
    std::vector<double> times;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
    bool has_param = false;
    double max_time = 0.0;
};

namespace {

using FNode = Functional::Node;

std::shared_ptr<const FNode> fnode(Functional::Op op, double value, ScalarExpr phi,
                                   std::vector<double> times,
                                   std::shared_ptr<const FNode> a = nullptr,
                                   std::shared_ptr<const FNode> b = nullptr) {
    auto n = std::make_shared<FNode>();
    n->op = op;
    n->value = value;
    n->phi = std::move(phi);
    n->times = std::move(times);
    n->a = std::move(a);
    n->b = std::move(b);
    n->has_param = op == Functional::Op::Param || (n->a && n->a->has_param) ||
                   (n->b && n->b->has_param);
    switch (op) {
        case Functional::Op::Coordinate:
        case Functional::Op::RunningSup:
        case Functional::Op::TimeIntegral: n->max_time = value; break;
        case Functional::Op::Cylindrical:
            for (double t : n->times) n->max_time = std::max(n->max_time, t);
            break;
        default:
            if (n->a) n->max_time = std::max(n->max_time, n->a->max_time);
            if (n->b) n->max_time = std::max(n->max_time, n->b->max_time);
            break;
    }
    return n;
}

double eval_fnode(const FNode& n, const Path& path, const double* param) {
    switch (n.op) {
        case Functional::Op::Constant: return n.value;
        case Functional::Op::Coordinate: return path.value(n.value);
        case Functional::Op::Cylindrical: {
            std::vector<double> args(n.times.size());
            for (std::size_t i = 0; i < n.times.size(); ++i) args[i] = path.value(n.times[i]);
            return n.phi.eval(args);
        }
        case Functional::Op::Add: return eval_fnode(*n.a, path, param) + eval_fnode(*n.b, path, param);
        case Functional::Op::Sub: return eval_fnode(*n.a, path, param) - eval_fnode(*n.b, path, param);
        case Functional::Op::Mul: return eval_fnode(*n.a, path, param) * eval_fnode(*n.b, path, param);
        case Functional::Op::Div: {
            const double den = eval_fnode(*n.b, path, param);
            if (den == 0.0) throw DomainError("division by zero", "functional div");
            return eval_fnode(*n.a, path, param) / den;
        }
        case Functional::Op::Compose: {
            const double inner = eval_fnode(*n.a, path, param);
            return n.phi.eval(std::span<const double>(&inner, 1));
        }
        case Functional::Op::RunningSup: return path.running_sup(n.value);
        case Functional::Op::TimeIntegral: return path.time_integral(n.value);
        case Functional::Op::Param:
            if (!param) throw std::logic_error("unbound parametric slot");
            return *param;
    }
    throw std::logic_error("unhandled functional op");
}

const char* functional_op_name(Functional::Op op) {
    switch (op) {
        case Functional::Op::Constant: return "constant";
        case Functional::Op::Coordinate: return "coordinate";
        case Functional::Op::Cylindrical: return "cylindrical";
        case Functional::Op::Add: return "add";
        case Functional::Op::Sub: return "sub";
        case Functional::Op::Mul: return "mul";
        case Functional::Op::Div: return "div";
        case Functional::Op::Compose: return "compose";
        case Functional::Op::RunningSup: return "running_sup";
        case Functional::Op::TimeIntegral: return "time_integral";
        case Functional::Op::Param: return "param";
    }
    return "?";
}

}  // namespace

Functional Functional::constant(double c) { return Functional(fnode(Op::Constant, c, {}, {})); }
Functional Functional::coordinate(double time) {
    if (time < 0.0) throw std::invalid_argument("coordinate time must be nonnegative");
    return Functional(fnode(Op::Coordinate, time, {}, {}));
}
Functional Functional::cylindrical(ScalarExpr phi, std::vector<double> times) {
    if (phi.arity() > static_cast<int>(times.size())) {
        throw std::invalid_argument("cylindrical map references more arguments than times given");
    }
    return Functional(fnode(Op::Cylindrical, 0.0, std::move(phi), std::move(times)));
}
Functional Functional::add(Functional a, Functional b) {
    return Functional(fnode(Op::Add, 0, {}, {}, std::move(a.node_), std::move(b.node_)));
}
Functional Functional::sub(Functional a, Functional b) {
    return Functional(fnode(Op::Sub, 0, {}, {}, std::move(a.node_), std::move(b.node_)));
}
Functional Functional::mul(Functional a, Functional b) {
    return Functional(fnode(Op::Mul, 0, {}, {}, std::move(a.node_), std::move(b.node_)));
}
Functional Functional::div(Functional a, Functional b) {
    return Functional(fnode(Op::Div, 0, {}, {}, std::move(a.node_), std::move(b.node_)));
}
Functional Functional::compose(ScalarExpr phi, Functional inner) {
    if (phi.arity() > 1) throw std::invalid_argument("compose expects a unary scalar map");
    return Functional(fnode(Op::Compose, 0, std::move(phi), {}, std::move(inner.node_)));
}
Functional Functional::running_sup(double horizon) {
    return Functional(fnode(Op::RunningSup, horizon, {}, {}));
}
Functional Functional::time_integral(double horizon) {
    return Functional(fnode(Op::TimeIntegral, horizon, {}, {}));
}
Functional Functional::param() { return Functional(fnode(Op::Param, 0, {}, {})); }

Functional::Op Functional::op() const { return node_->op; }
bool Functional::has_param() const { return node_->has_param; }
double Functional::max_time() const { return node_->max_time; }

const ScalarExpr& Functional::cylindrical_phi() const {
    if (!is_cylindrical()) throw NotCylindrical("functional is not a cylindrical node");
    return node_->phi;
}
const std::vector<double>& Functional::cylindrical_times() const {
    if (!is_cylindrical()) throw NotCylindrical("functional is not a cylindrical node");
    return node_->times;
}

double Functional::eval(const Path& path, const double* param) const {
    return eval_fnode(*node_, path, param);
}

Functional Functional::substitute_param(const Functional& replacement) const {
    if (!node_->has_param) return *this;
    if (node_->op == Op::Param) return replacement;
    auto n = std::make_shared<FNode>(*node_);
    if (node_->a) n->a = Functional(node_->a).substitute_param(replacement).node_;
    if (node_->b) n->b = Functional(node_->b).substitute_param(replacement).node_;
    n->has_param = (n->a && n->a->has_param) || (n->b && n->b->has_param);
    n->max_time = std::max(n->max_time, std::max(n->a ? n->a->max_time : 0.0,
                                                 n->b ? n->b->max_time : 0.0));
    return Functional(std::move(n));
}

nlohmann::json Functional::to_json() const {
    const Node& n = *node_;
    nlohmann::json doc{{"op", functional_op_name(n.op)}};
    switch (n.op) {
        case Op::Constant: doc["value"] = n.value; break;
        case Op::Coordinate: doc["time"] = n.value; break;
        case Op::Cylindrical:
            doc["phi"] = n.phi.to_json();
            doc["times"] = n.times;
            break;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
            doc["lhs"] = Functional(n.a).to_json();
            doc["rhs"] = Functional(n.b).to_json();
            break;
        case Op::Compose:
            doc["phi"] = n.phi.to_json();
            doc["arg"] = Functional(n.a).to_json();
            break;
        case Op::RunningSup:
        case Op::TimeIntegral: doc["horizon"] = n.value; break;
        case Op::Param: break;
    }
    return doc;
}

Functional Functional::from_json(const nlohmann::json& doc) {
    const std::string op = doc.at("op").get<std::string>();
    if (op == "constant") return constant(doc.at("value").get<double>());
    if (op == "coordinate") return coordinate(doc.at("time").get<double>());
    if (op == "cylindrical") {
        return cylindrical(ScalarExpr::from_json(doc.at("phi")),
                           doc.at("times").get<std::vector<double>>());
    }
    if (op == "add") return add(from_json(doc.at("lhs")), from_json(doc.at("rhs")));
    if (op == "sub") return sub(from_json(doc.at("lhs")), from_json(doc.at("rhs")));
    if (op == "mul") return mul(from_json(doc.at("lhs")), from_json(doc.at("rhs")));
    if (op == "div") return div(from_json(doc.at("lhs")), from_json(doc.at("rhs")));
    if (op == "compose") {
        return compose(ScalarExpr::from_json(doc.at("phi")), from_json(doc.at("arg")));
    }
    if (op == "running_sup") return running_sup(doc.at("horizon").get<double>());
    if (op == "time_integral") return time_integral(doc.at("horizon").get<double>());
    if (op == "param") return param();
    throw std::invalid_argument("unknown functional op: " + op);
}

PathFunctional::PathFunctional(Functional tree) : tree_(std::move(tree)) {
    if (tree_.has_param()) {
        throw std::invalid_argument("path functional must not contain the free parametric slot");
    }
}

double eval_functional(const PathFunctional& f, const Path& path) {
    if (f.max_time() > path.horizon() + 1e-12) {
        throw HorizonExceeded("functional references times beyond the path horizon");
    }
    return f.tree().eval(path, nullptr);
}

double eval_functional(const PathFunctional& f, const JumpList& omega,
                       const LevyTriplet& triplet) {
    const Path path(omega, triplet);
    return eval_functional(f, path);
}

double parametric_eval(const ParametricFunctional& g, const Path& path, double x) {
    if (g.max_time() > path.horizon() + 1e-12) {
        throw HorizonExceeded("functional references times beyond the path horizon");
    }
    return g.tree().eval(path, &x);
}

double parametric_eval(const ParametricFunctional& g, const JumpList& omega,
                       const LevyTriplet& triplet, double x) {
    const Path path(omega, triplet);
    return parametric_eval(g, path, x);
}

PathFunctional bind(const ParametricFunctional& g, const PathFunctional& f) {
    return PathFunctional(g.tree().substitute_param(f.tree()));
}

}  // namespace levysim
