#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "levysim/canonical_path.hpp"

namespace levysim {

/// Smooth scalar expressions over m arguments: polynomials, exp, sin, cos,
/// tanh, a C-infinity bump for compact-support cutoffs, and arithmetic.
/// Immutable trees with shared subtrees.
class ScalarExpr {
  public:
    enum class Op { Const, Arg, Add, Sub, Mul, Div, Neg, Exp, Sin, Cos, Tanh, Bump, IPow };

    ScalarExpr() : ScalarExpr(constant(0.0)) {}

    static ScalarExpr constant(double value);
    static ScalarExpr arg(int index);
    static ScalarExpr add(ScalarExpr a, ScalarExpr b);
    static ScalarExpr sub(ScalarExpr a, ScalarExpr b);
    static ScalarExpr mul(ScalarExpr a, ScalarExpr b);
    static ScalarExpr div(ScalarExpr a, ScalarExpr b);
    static ScalarExpr neg(ScalarExpr a);
    static ScalarExpr exp(ScalarExpr a);
    static ScalarExpr sin(ScalarExpr a);
    static ScalarExpr cos(ScalarExpr a);
    static ScalarExpr tanh(ScalarExpr a);
    /// C-infinity bump: exp(1 - 1/(1 - u^2)) for |u| < 1, zero otherwise.
    static ScalarExpr bump(ScalarExpr a);
    static ScalarExpr ipow(ScalarExpr base, int exponent);

    /// Evaluates with the given argument vector. Throws DomainError (with the
    /// node path) on division by zero.
    double eval(std::span<const double> args) const;

    /// Number of arguments the expression expects (max referenced index + 1).
    int arity() const;

    nlohmann::json to_json() const;
    static ScalarExpr from_json(const nlohmann::json& doc);

    friend ScalarExpr operator+(ScalarExpr a, ScalarExpr b) { return add(std::move(a), std::move(b)); }
    friend ScalarExpr operator-(ScalarExpr a, ScalarExpr b) { return sub(std::move(a), std::move(b)); }
    friend ScalarExpr operator*(ScalarExpr a, ScalarExpr b) { return mul(std::move(a), std::move(b)); }
    friend ScalarExpr operator/(ScalarExpr a, ScalarExpr b) { return div(std::move(a), std::move(b)); }
    friend ScalarExpr operator-(ScalarExpr a) { return neg(std::move(a)); }

    struct Node;

  private:
    explicit ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Functional expression tree over a cadlag path, with an optional free
/// scalar slot (the parametric argument). Node kinds follow the closed
/// grammar: coordinate projections, cylindrical maps, arithmetic,
/// composition with a scalar map, running sup and time integral.
class Functional {
  public:
    enum class Op {
        Constant,
        Coordinate,
        Cylindrical,
        Add,
        Sub,
        Mul,
        Div,
        Compose,
        RunningSup,
        TimeIntegral,
        Param
    };

    Functional() : Functional(constant(0.0)) {}

    static Functional constant(double c);
    static Functional coordinate(double time);
    static Functional cylindrical(ScalarExpr phi, std::vector<double> times);
    static Functional add(Functional a, Functional b);
    static Functional sub(Functional a, Functional b);
    static Functional mul(Functional a, Functional b);
    static Functional div(Functional a, Functional b);
    static Functional compose(ScalarExpr phi, Functional inner);
    static Functional running_sup(double horizon);
    static Functional time_integral(double horizon);
    static Functional param();

    Op op() const;
    bool has_param() const;

    /// Largest path time the functional reads; 0 for time-free trees.
    double max_time() const;

    bool is_cylindrical() const { return op() == Op::Cylindrical; }
    const ScalarExpr& cylindrical_phi() const;
    const std::vector<double>& cylindrical_times() const;

    /// Evaluates against a prepared path; `param` must be non-null when the
    /// tree contains the free slot.
    double eval(const Path& path, const double* param) const;

    /// Substitutes the free slot by `replacement` (no-op on param-free trees).
    Functional substitute_param(const Functional& replacement) const;

    nlohmann::json to_json() const;
    static Functional from_json(const nlohmann::json& doc);

    friend Functional operator+(Functional a, Functional b) { return add(std::move(a), std::move(b)); }
    friend Functional operator-(Functional a, Functional b) { return sub(std::move(a), std::move(b)); }
    friend Functional operator*(Functional a, Functional b) { return mul(std::move(a), std::move(b)); }
    friend Functional operator/(Functional a, Functional b) { return div(std::move(a), std::move(b)); }

    struct Node;

  private:
    explicit Functional(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Measurable functional F: D([0,inf)) -> R from the closed grammar.
/// Rejects trees containing the free parametric slot.
class PathFunctional {
  public:
    PathFunctional() = default;
    PathFunctional(Functional tree);  // NOLINT: implicit by design

    const Functional& tree() const { return tree_; }
    double max_time() const { return tree_.max_time(); }
    bool is_cylindrical() const { return tree_.is_cylindrical(); }

    nlohmann::json to_json() const { return tree_.to_json(); }
    static PathFunctional from_json(const nlohmann::json& doc) {
        return PathFunctional(Functional::from_json(doc));
    }

  private:
    Functional tree_;
};

/// Parametric functional G: D([0,inf)) x R -> R; for a fixed scalar it
/// reduces to a PathFunctional.
class ParametricFunctional {
  public:
    ParametricFunctional() = default;
    ParametricFunctional(Functional tree) : tree_(std::move(tree)) {}  // NOLINT

    const Functional& tree() const { return tree_; }
    double max_time() const { return tree_.max_time(); }

    nlohmann::json to_json() const { return tree_.to_json(); }
    static ParametricFunctional from_json(const nlohmann::json& doc) {
        return ParametricFunctional(Functional::from_json(doc));
    }

  private:
    Functional tree_;
};

/// Y(omega) = F((X_t(omega))_t). Depends on omega only through the path.
double eval_functional(const PathFunctional& f, const JumpList& omega,
                       const LevyTriplet& triplet);
double eval_functional(const PathFunctional& f, const Path& path);

/// G((X_t(omega))_t, x).
double parametric_eval(const ParametricFunctional& g, const JumpList& omega,
                       const LevyTriplet& triplet, double x);
double parametric_eval(const ParametricFunctional& g, const Path& path, double x);

/// h |-> G(h, F(h)).
PathFunctional bind(const ParametricFunctional& g, const PathFunctional& f);

}  // namespace levysim
