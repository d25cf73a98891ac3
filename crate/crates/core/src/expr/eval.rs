use std::collections::BTreeMap;

use super::{BinOp, Expr, ExprError, Func, Node, NodeKind};
use crate::scalar::{Dual, Scalar};

/// Variable bindings for plain evaluation.
pub type Env = BTreeMap<String, f64>;

fn domain(node: &Node, reason: &'static str) -> ExprError {
    ExprError::Domain {
        node: node.to_string(),
        span: node.span,
        reason,
    }
}

fn eval_node<S, F>(node: &Node, lookup: &F) -> Result<S, ExprError>
where
    S: Scalar,
    F: Fn(&str) -> Option<S>,
{
    match &node.kind {
        NodeKind::Const(c) => Ok(S::from_f64(*c)),
        NodeKind::Var(name) => lookup(name).ok_or_else(|| ExprError::UnboundVariable {
            name: name.clone(),
            span: node.span,
        }),
        NodeKind::Neg(a) => Ok(-eval_node(a, lookup)?),
        NodeKind::Call(func, a) => {
            let x: S = eval_node(a, lookup)?;
            Ok(match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Exp => x.exp(),
                Func::Log => {
                    if x.value() <= 0.0 {
                        return Err(domain(node, "logarithm of a non-positive value"));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x.value() < 0.0 {
                        return Err(domain(node, "square root of a negative value"));
                    }
                    x.sqrt()
                }
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
            })
        }
        NodeKind::Binary(op, a, b) => {
            if *op == BinOp::Pow {
                return eval_pow(node, a, b, lookup);
            }
            let x: S = eval_node(a, lookup)?;
            let y: S = eval_node(b, lookup)?;
            Ok(match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y.value() == 0.0 {
                        return Err(domain(node, "division by zero"));
                    }
                    x / y
                }
                BinOp::Pow => unreachable!(),
            })
        }
    }
}

fn eval_pow<S, F>(node: &Node, base: &Node, exponent: &Node, lookup: &F) -> Result<S, ExprError>
where
    S: Scalar,
    F: Fn(&str) -> Option<S>,
{
    let b: S = eval_node(base, lookup)?;
    if let Some(k) = exponent.const_value() {
        if k.fract() == 0.0 && k.abs() <= i32::MAX as f64 {
            let k = k as i32;
            if k < 0 && b.value() == 0.0 {
                return Err(domain(node, "negative power of zero"));
            }
            return Ok(b.powi(k));
        }
    }
    if b.value() <= 0.0 {
        return Err(domain(node, "non-integer power of a non-positive base"));
    }
    let e: S = eval_node(exponent, lookup)?;
    Ok((e * b.ln()).exp())
}

impl Expr {
    /// Evaluate with an arbitrary scalar type and a variable lookup.
    pub fn eval_with<S, F>(&self, lookup: F) -> Result<S, ExprError>
    where
        S: Scalar,
        F: Fn(&str) -> Option<S>,
    {
        eval_node(self.root(), &lookup)
    }

    /// Evaluate with variables bound positionally: `names[i] ↦ values[i]`.
    pub fn eval_slice<S: Scalar>(&self, names: &[String], values: &[S]) -> Result<S, ExprError> {
        self.eval_with(|v| names.iter().position(|n| n == v).map(|i| values[i]))
    }

    /// IEEE double evaluation.
    pub fn eval(&self, env: &Env) -> Result<f64, ExprError> {
        self.eval_with(|v| env.get(v).copied())
    }

    /// Derivative with respect to `var` via dual numbers (order 1) or
    /// nested dual numbers (order 2).
    pub fn deriv(&self, var: &str, env: &Env, order: u8) -> Result<f64, ExprError> {
        match order {
            1 => self.mixed_partial_1(var, env),
            2 => self.mixed_partial(var, var, env),
            other => Err(ExprError::BadOrder(other)),
        }
    }

    fn mixed_partial_1(&self, var: &str, env: &Env) -> Result<f64, ExprError> {
        let d: Dual<f64> = self.eval_with(|v| {
            env.get(v).map(|&x| {
                if v == var {
                    Dual::variable(x)
                } else {
                    Dual::constant(x)
                }
            })
        })?;
        if !env.contains_key(var) {
            return Ok(0.0);
        }
        Ok(d.eps)
    }

    /// Second mixed partial `∂²/∂a∂b` via nested duals.
    pub fn mixed_partial(&self, a: &str, b: &str, env: &Env) -> Result<f64, ExprError> {
        let d: Dual<Dual<f64>> = self.eval_with(|v| {
            env.get(v).map(|&x| {
                let inner = if v == b {
                    Dual::variable(x)
                } else {
                    Dual::constant(x)
                };
                let outer = if v == a {
                    Dual::constant(1.0)
                } else {
                    Dual::constant(0.0)
                };
                Dual::new(inner, outer)
            })
        })?;
        Ok(d.eps.eps)
    }

    /// Central-difference derivative, kept as an independent cross-check of
    /// the dual-number path. Step `h = 1e-5·max(1, |x|)`.
    pub fn central_difference(&self, var: &str, env: &Env, order: u8) -> Result<f64, ExprError> {
        let x = env.get(var).copied().unwrap_or(0.0);
        let h = 1e-5 * x.abs().max(1.0);
        let at = |t: f64| {
            let mut e = env.clone();
            e.insert(var.to_string(), t);
            self.eval(&e)
        };
        match order {
            1 => Ok((at(x + h)? - at(x - h)?) / (2.0 * h)),
            2 => Ok((at(x + h)? - 2.0 * at(x)? + at(x - h)?) / (h * h)),
            other => Err(ExprError::BadOrder(other)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn env(pairs: &[(&str, f64)]) -> Env {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn hand_arithmetic() {
        let e = parse("u^2+3*v").unwrap();
        assert_eq!(e.eval(&env(&[("u", 2.0), ("v", 1.0)])).unwrap(), 7.0);
    }

    #[test]
    fn trivial_values() {
        assert_eq!(parse("5").unwrap().eval(&Env::new()).unwrap(), 5.0);
        assert_eq!(parse("sin(u)").unwrap().eval(&env(&[("u", 0.0)])).unwrap(), 0.0);
        assert_eq!(parse("log(u)").unwrap().eval(&env(&[("u", 1.0)])).unwrap(), 0.0);
    }

    #[test]
    fn unbound_and_domain_errors() {
        let e = parse("u + w").unwrap();
        assert!(matches!(
            e.eval(&env(&[("u", 1.0)])),
            Err(ExprError::UnboundVariable { ref name, .. }) if name == "w"
        ));
        let e = parse("1 + log(u - 1)").unwrap();
        match e.eval(&env(&[("u", 0.5)])) {
            Err(ExprError::Domain { span, .. }) => assert_eq!(span.start, 4),
            other => panic!("expected domain error, got {other:?}"),
        }
        let e = parse("1/(u-u)").unwrap();
        assert!(matches!(e.eval(&env(&[("u", 3.0)])), Err(ExprError::Domain { .. })));
        let e = parse("sqrt(u)").unwrap();
        assert!(matches!(e.eval(&env(&[("u", -1.0)])), Err(ExprError::Domain { .. })));
        let e = parse("u^0.5").unwrap();
        assert!(matches!(e.eval(&env(&[("u", -1.0)])), Err(ExprError::Domain { .. })));
    }

    #[test]
    fn integer_powers_of_negative_base() {
        let e = parse("u^3 + u^-2").unwrap();
        let x = -2.0;
        assert_eq!(e.eval(&env(&[("u", x)])).unwrap(), -8.0 + 0.25);
    }

    #[test]
    fn derivatives_trivial() {
        let e = parse("u").unwrap();
        assert_eq!(e.deriv("u", &env(&[("u", 3.0)]), 1).unwrap(), 1.0);
        let e = parse("u^2").unwrap();
        for x in [-3.0, 0.0, 0.4, 10.0] {
            assert_eq!(e.deriv("u", &env(&[("u", x)]), 2).unwrap(), 2.0);
        }
        assert!(matches!(e.deriv("u", &env(&[("u", 1.0)]), 3), Err(ExprError::BadOrder(3))));
    }

    #[test]
    fn derivative_against_central_difference() {
        // Expected value 2·cos(0.7) from the central-difference oracle.
        let e = parse("sin(u)*v").unwrap();
        let at = env(&[("u", 0.7), ("v", 2.0)]);
        let fd = e.central_difference("u", &at, 1).unwrap();
        let ad = e.deriv("u", &at, 1).unwrap();
        assert!((fd - 2.0 * 0.7_f64.cos()).abs() < 1e-9);
        assert!((ad - fd).abs() < 1e-9);
    }

    #[test]
    fn mixed_partials() {
        let e = parse("u^2*v^3 + sin(u*v)").unwrap();
        let (u, v) = (0.3, -1.1);
        let at = env(&[("u", u), ("v", v)]);
        let expect = 6.0 * u * v * v + (u * v).cos() - u * v * (u * v).sin();
        assert!((e.mixed_partial("u", "v", &at).unwrap() - expect).abs() < 1e-12);
        assert!((e.mixed_partial("v", "u", &at).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn variable_not_in_env_has_zero_derivative() {
        let e = parse("3").unwrap();
        assert_eq!(e.deriv("u", &Env::new(), 1).unwrap(), 0.0);
    }
}
