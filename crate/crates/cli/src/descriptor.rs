//! The descriptor mini-language and its JSON alternatives.
//!
//! Text descriptors are `family:arg,arg,...`. Functions may join several
//! segments with `;`. Wherever a text descriptor is accepted, a scenario file
//! may give the JSON schema form instead.

use serde_json::Value;
use spaceability::generators::{ConcaveGenerator, ConvexGenerator, Descriptor, ExponentFunction};
use spaceability::norms::{ExponentRule, TailRule, WeightRule, WeightedSeq};
use spaceability::{PiecewiseFunction, Segment};

use crate::CliError;

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

/// Splits `family:a,b,c` and parses the arguments as numbers.
fn split(text: &str) -> Result<(&str, Vec<f64>), CliError> {
    let (family, args) = text.trim().split_once(':').unwrap_or((text.trim(), ""));
    let nums = args
        .split(',')
        .filter(|a| !a.trim().is_empty())
        .map(|a| a.trim().parse::<f64>().map_err(|_| schema(format!("`{a}` in `{text}` is not a number"))))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok((family, nums))
}

fn arity(text: &str, family: &str, args: &[f64], n: usize) -> Result<(), CliError> {
    if args.len() != n {
        return Err(schema(format!("`{text}`: {family} takes {n} argument(s), got {}", args.len())));
    }
    Ok(())
}

fn lib(e: spaceability::Error) -> CliError {
    CliError::Schema(e.to_string())
}

/// Concave `φ` on `[0, 1]`: `pow:α` or `powlog:α,β`.
pub fn concave(text: &str) -> Result<ConcaveGenerator, CliError> {
    let (family, a) = split(text)?;
    let g = match family {
        "pow" => {
            arity(text, family, &a, 1)?;
            ConcaveGenerator::try_pow_log(a[0], 0.0).map_err(lib)?
        }
        "powlog" => {
            arity(text, family, &a, 2)?;
            ConcaveGenerator::try_pow_log(a[0], a[1]).map_err(lib)?
        }
        _ => return Err(schema(format!("`{text}`: expected a concave generator (pow, powlog)"))),
    };
    Ok(g)
}

/// Young function `ψ`: `pow:p`, `powlog:p,q` or `exp:p`.
pub fn convex(text: &str) -> Result<ConvexGenerator, CliError> {
    let (family, a) = split(text)?;
    let g = match family {
        "pow" => {
            arity(text, family, &a, 1)?;
            ConvexGenerator::power(a[0])
        }
        "powlog" => {
            arity(text, family, &a, 2)?;
            ConvexGenerator::pow_log(a[0], a[1])
        }
        "exp" => {
            arity(text, family, &a, 1)?;
            ConvexGenerator::exp_pow(a[0])
        }
        _ => return Err(schema(format!("`{text}`: expected a Young function (pow, powlog, exp)"))),
    };
    g.validate().map_err(lib)?;
    Ok(g)
}

/// Variable exponent on `[0, 1]`: `const:q`, `step:q1,t,q2` or `affine:q0,q1`.
pub fn exponent(text: &str) -> Result<ExponentFunction, CliError> {
    let (family, a) = split(text)?;
    match family {
        "const" => {
            arity(text, family, &a, 1)?;
            ExponentFunction::constant(a[0])
        }
        "step" => {
            arity(text, family, &a, 3)?;
            ExponentFunction::step(a[0], a[1], a[2])
        }
        "affine" => {
            arity(text, family, &a, 2)?;
            ExponentFunction::affine(a[0], a[1])
        }
        _ => return Err(schema(format!("`{text}`: expected an exponent (const, step, affine)"))),
    }
    .map_err(lib)
}

fn segment(text: &str) -> Result<Segment, CliError> {
    let (family, a) = split(text)?;
    match family {
        "indicator" => {
            arity(text, family, &a, 2)?;
            Segment::constant(a[0], a[1], 1.0)
        }
        // c·(t − s)^α on (a, b]
        "powersing" => {
            arity(text, family, &a, 5)?;
            Segment::power(a[3], a[4], a[0], a[1], a[2])
        }
        "pow" => {
            arity(text, family, &a, 1)?;
            Segment::power(0.0, 1.0, 1.0, 0.0, a[0])
        }
        _ => return Err(schema(format!("`{text}`: expected a function segment (indicator, powersing, pow)"))),
    }
    .map_err(lib)
}

/// A function on `(0, 1]` as `;`-separated segments with disjoint supports.
pub fn function(text: &str) -> Result<PiecewiseFunction, CliError> {
    let segments = text.split(';').filter(|s| !s.trim().is_empty()).map(segment).collect::<Result<Vec<_>, _>>()?;
    if segments.is_empty() {
        return Err(schema("empty function descriptor"));
    }
    PiecewiseFunction::new(segments).map_err(lib)
}

fn exponent_rule(text: &str) -> Result<ExponentRule, CliError> {
    let (family, a) = split(text)?;
    match family {
        "const" => {
            arity(text, family, &a, 1)?;
            Ok(ExponentRule::Constant { p: a[0] })
        }
        "harmonic" => {
            arity(text, family, &a, 2)?;
            Ok(ExponentRule::Harmonic { limit: a[0], amplitude: a[1] })
        }
        _ => Err(schema(format!("`{text}`: expected a sequence exponent (const, harmonic)"))),
    }
}

/// Weights `geom:scale,ratio`.
pub fn weights(text: &str) -> Result<WeightRule, CliError> {
    let (family, a) = split(text)?;
    match family {
        "geom" => {
            arity(text, family, &a, 2)?;
            Ok(WeightRule::Geometric { scale: a[0], ratio: a[1] })
        }
        _ => Err(schema(format!("`{text}`: expected weights geom:scale,ratio"))),
    }
}

/// A weighted sequence: `terms:x1,x2,...` (finitely supported) or `geom:a,r`
/// (`x_n = a·r^n`, the first `horizon` terms explicit and the rest bounded by a
/// geometric tail, constant exponents only).
pub fn sequence(text: &str, p: &str, w: &str, horizon: usize) -> Result<WeightedSeq, CliError> {
    let exponents = exponent_rule(p)?;
    let weights = weights(w)?;
    let (family, a) = split(text)?;
    let (terms, tail) = match family {
        "terms" => {
            let terms = a.iter().enumerate().filter(|(_, x)| **x != 0.0).map(|(i, x)| (i as u64 + 1, x.abs().ln()));
            (terms.collect(), TailRule::Zero)
        }
        "geom" => {
            arity(text, family, &a, 2)?;
            let (la, lr) = (a[0].abs().ln(), a[1].abs().ln());
            let terms: Vec<(u64, f64)> = (1..=horizon as u64).map(|n| (n, la + n as f64 * lr)).collect();
            let tail = match exponents {
                ExponentRule::Constant { p } => {
                    let next = horizon as u64 + 1;
                    let ln_ratio = p * lr + weights.ln_at(2) - weights.ln_at(1);
                    let ln_first = p * (la + next as f64 * lr) + weights.ln_at(next);
                    if ln_ratio < 0.0 {
                        TailRule::Geometric { ln_first, ln_ratio }
                    } else {
                        TailRule::Unknown
                    }
                }
                ExponentRule::Harmonic { .. } => TailRule::Unknown,
            };
            (terms, tail)
        }
        _ => return Err(schema(format!("`{text}`: expected a sequence (terms, geom)"))),
    };
    WeightedSeq::new(terms, exponents, weights, tail).map_err(lib)
}

/// A descriptor given either as mini-language text or as its JSON schema.
#[derive(Debug, Clone, PartialEq)]
pub enum Spec {
    Text(String),
    Json(Value),
}

impl Spec {
    pub fn from_value(v: &Value) -> Spec {
        match v {
            Value::String(s) => Spec::Text(s.clone()),
            other => Spec::Json(other.clone()),
        }
    }

    fn descriptor(&self) -> Result<Descriptor, CliError> {
        match self {
            Spec::Json(v) => {
                serde_json::from_value(v.clone()).map_err(|e| schema(format!("generator descriptor: {e}")))
            }
            Spec::Text(_) => unreachable!(),
        }
    }

    pub fn concave(&self) -> Result<ConcaveGenerator, CliError> {
        match self {
            Spec::Text(t) => concave(t),
            Spec::Json(_) => match self.descriptor()? {
                Descriptor::Phi(g) => g.validate().map(|_| g).map_err(lib),
                d => Err(schema(format!("expected class Phi, got {d:?}"))),
            },
        }
    }

    pub fn convex(&self) -> Result<ConvexGenerator, CliError> {
        match self {
            Spec::Text(t) => convex(t),
            Spec::Json(_) => match self.descriptor()? {
                Descriptor::Psi(g) => g.validate().map(|_| g).map_err(lib),
                d => Err(schema(format!("expected class Psi, got {d:?}"))),
            },
        }
    }

    pub fn exponent(&self) -> Result<ExponentFunction, CliError> {
        match self {
            Spec::Text(t) => exponent(t),
            Spec::Json(_) => match self.descriptor()? {
                Descriptor::Exponent(e) => Ok(e),
                d => Err(schema(format!("expected class Exponent, got {d:?}"))),
            },
        }
    }

    pub fn function(&self) -> Result<PiecewiseFunction, CliError> {
        match self {
            Spec::Text(t) => function(t),
            Spec::Json(v) => PiecewiseFunction::from_json(&v.to_string()).map_err(|e| schema(format!("function: {e}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(concave("pow:0.5").unwrap(), ConcaveGenerator::power(0.5));
        assert_eq!(concave("powlog:0.5,0.25").unwrap(), ConcaveGenerator::pow_log(0.5, 0.25));
        // decreasing past 1/e, so not a generator on [0, 1]
        assert!(concave("powlog:0.5,1").is_err());
        assert!(concave("pow:1.5").is_err());
        assert_eq!(convex("exp:2").unwrap(), ConvexGenerator::exp_pow(2.0));
        assert!(convex("pow:0.5").is_err());
        assert!(matches!(convex("pow:x"), Err(CliError::Schema(_))));
        assert!(convex("pow:1,2").is_err());
        assert!(convex("cosh:1").is_err());
    }

    #[test]
    fn exponents() {
        assert_eq!(exponent("step:3,0.5,2").unwrap().value(0.25), 3.0);
        assert_eq!(exponent("affine:2,3").unwrap().value(0.5), 2.5);
        assert!(exponent("const:0.5").is_err());
    }

    #[test]
    fn functions() {
        let f = function("indicator:0,0.25").unwrap();
        assert_eq!((f.evaluate(0.1), f.evaluate(0.5)), (1.0, 0.0));
        let f = function("powersing:2,0,-0.5,0,0.5; indicator:0.5,1").unwrap();
        assert!((f.evaluate(0.25) - 4.0).abs() < 1e-15);
        assert_eq!(f.evaluate(0.75), 1.0);
        assert!(function("indicator:0,0.5;indicator:0.25,1").is_err());
        assert!(function("").is_err());
    }

    #[test]
    fn sequences() {
        let s = sequence("geom:1,0.5", "const:1", "geom:1,0.5", 10).unwrap();
        assert_eq!(s.terms.len(), 10);
        assert!(matches!(s.tail, TailRule::Geometric { .. }));
        let s = sequence("terms:1,0,2", "const:2", "geom:1,0.5", 10).unwrap();
        assert_eq!(s.terms, vec![(1, 0.0), (3, 2f64.ln())]);
        assert!(sequence("geom:1,0.5", "const:1", "geom:1,1", 10).is_err());
    }

    #[test]
    fn json_forms() {
        let v: Value = serde_json::json!({"class":"Phi","family":"powlog","params":{"alpha":0.5,"beta":0.25}});
        assert_eq!(Spec::from_value(&v).concave().unwrap(), ConcaveGenerator::pow_log(0.5, 0.25));
        assert!(Spec::from_value(&v).convex().is_err());
        let f = function("indicator:0,0.5").unwrap();
        let v: Value = serde_json::from_str(&f.to_json()).unwrap();
        assert_eq!(Spec::from_value(&v).function().unwrap(), f);
    }
}
