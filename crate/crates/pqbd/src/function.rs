//! Test functions selectable from the command line.

use std::fmt;
use std::str::FromStr;

use evalexpr::{
    build_operator_tree, ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node,
    Value,
};
use pqbd_core::{Growth, RealFunction};

/// `cos_x_squared`, `monomial:J`, or `expr:<expression in x>`.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    CosXSquared,
    Monomial(u32),
    /// An `evalexpr` expression in the variable `x`, declared of quadratic
    /// growth with the given constant.
    Expr {
        source: String,
        constant: f64,
    },
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::CosXSquared => f.write_str("cos_x_squared"),
            FunctionSpec::Monomial(j) => write!(f, "monomial:{j}"),
            FunctionSpec::Expr { source, .. } => write!(f, "expr:{source}"),
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "cos_x_squared" {
            return Ok(FunctionSpec::CosXSquared);
        }
        if let Some(j) = s.strip_prefix("monomial:") {
            let j: u32 = j
                .trim()
                .parse()
                .map_err(|_| format!("bad monomial degree in {s:?}"))?;
            if j > 2 {
                return Err(format!("monomial degree {j} exceeds quadratic growth"));
            }
            return Ok(FunctionSpec::Monomial(j));
        }
        if let Some(src) = s.strip_prefix("expr:") {
            return Ok(FunctionSpec::Expr {
                source: src.to_string(),
                constant: 1.0,
            });
        }
        Err(format!(
            "unknown function {s:?}; expected cos_x_squared, monomial:J or expr:<expression>"
        ))
    }
}

impl FunctionSpec {
    pub fn with_growth_constant(self, constant: f64) -> Self {
        match self {
            FunctionSpec::Expr { source, .. } => FunctionSpec::Expr { source, constant },
            other => other,
        }
    }

    pub fn build(&self) -> Result<RealFunction, String> {
        match self {
            FunctionSpec::CosXSquared => Ok(RealFunction::cos_x_squared()),
            FunctionSpec::Monomial(j) => RealFunction::monomial(*j).map_err(|e| e.to_string()),
            FunctionSpec::Expr { source, constant } => {
                let node = compile(source)?;
                RealFunction::new(move |x| evaluate(&node, x), Growth::Quadratic, *constant)
                    .map_err(|e| e.to_string())
            }
        }
    }
}

fn compile(source: &str) -> Result<Node<DefaultNumericTypes>, String> {
    let node = build_operator_tree::<DefaultNumericTypes>(source)
        .map_err(|e| format!("expression {source:?}: {e}"))?;
    if let Some(v) = node.iter_variable_identifiers().find(|v| *v != "x") {
        return Err(format!(
            "expression {source:?} uses unknown variable {v:?}; only x is bound"
        ));
    }
    // surface type errors now rather than inside the operator
    let probe = evaluate(&node, 0.5);
    if probe.is_nan() && !source.contains("nan") {
        return Err(format!(
            "expression {source:?} does not evaluate to a number"
        ));
    }
    Ok(node)
}

fn evaluate(node: &Node<DefaultNumericTypes>, x: f64) -> f64 {
    let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
    if ctx.set_value("x".into(), Value::Float(x)).is_err() {
        return f64::NAN;
    }
    node.eval_number_with_context(&ctx).unwrap_or(f64::NAN)
}
