//! Evaluation of parsed cycle expressions in a ring context.

use std::fmt;

use tautring::cohom::{CohomClass, CycleClassMap};
use tautring::corresp::{self, ck_projectors};
use tautring::k3::K3PowerRing;
use tautring::ring::CycleElement;
use tautring::Scalar;

use crate::engine::Engine;
use crate::parser::CycleExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingContext {
    Fano,
    FanoSquare,
    K3 { r: usize, d: u32 },
    Grassmann,
}

impl RingContext {
    pub fn parse(s: &str) -> Option<RingContext> {
        match s {
            "F" => Some(RingContext::Fano),
            "FxF" => Some(RingContext::FanoSquare),
            "Gr" => Some(RingContext::Grassmann),
            _ => {
                let rest = s.strip_prefix("K3:")?;
                let (r, d) = rest.split_once(',')?;
                Some(RingContext::K3 {
                    r: r.trim().parse().ok()?,
                    d: d.trim().parse().ok()?,
                })
            }
        }
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingContext::Fano => write!(f, "F"),
            RingContext::FanoSquare => write!(f, "FxF"),
            RingContext::K3 { r, d } => write!(f, "K3:{r},{d}"),
            RingContext::Grassmann => write!(f, "Gr"),
        }
    }
}

#[derive(Clone)]
pub enum Value {
    Num(Scalar),
    Chow(CycleElement),
    Cohom(CohomClass),
}

#[derive(Debug)]
pub enum EvalError {
    UnknownSymbol { name: String, available: Vec<String> },
    DegreeMismatch(String),
    TypeMismatch(String),
    ClosureViolation(String),
    Unsupported(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnknownSymbol { name, available } => {
                write!(
                    f,
                    "unknown symbol `{name}` in this ring (available: {})",
                    available.join(", ")
                )
            }
            EvalError::DegreeMismatch(m) => write!(f, "degree mismatch: {m}"),
            EvalError::TypeMismatch(m) => write!(f, "type mismatch: {m}"),
            EvalError::ClosureViolation(m) => write!(f, "{m}"),
            EvalError::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

impl std::error::Error for EvalError {}

pub struct Evaluator<'a> {
    pub engine: &'a Engine,
    pub ring: RingContext,
    k3: Option<K3PowerRing>,
    pub warnings: Vec<String>,
}

impl<'a> Evaluator<'a> {
    pub fn new(engine: &'a Engine, ring: RingContext) -> Evaluator<'a> {
        let k3 = match ring {
            RingContext::K3 { r, d } => Some(K3PowerRing::build(r, d)),
            _ => None,
        };
        Evaluator {
            engine,
            ring,
            k3,
            warnings: Vec::new(),
        }
    }


    fn symbols(&self) -> Vec<String> {
        match self.ring {
            RingContext::Fano => vec!["g".into(), "c".into(), "b".into()],
            RingContext::FanoSquare => {
                let mut v: Vec<String> = ["g1", "g2", "c1", "c2", "D", "I", "L", "B", "b1", "b2"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                for k in [0, 2, 4, 6, 8] {
                    v.push(format!("pi{k}"));
                }
                v
            }
            RingContext::K3 { r, .. } => {
                let mut v = Vec::new();
                for i in 1..=r {
                    v.push(format!("h{i}"));
                }
                for i in 1..=r {
                    v.push(format!("o{i}"));
                }
                for i in 1..=r {
                    for j in (i + 1)..=r {
                        v.push(format!("D{i}{j}"));
                    }
                }
                v
            }
            RingContext::Grassmann => vec!["x1".into(), "x2".into()],
        }
    }

    fn symbol(&self, name: &str) -> Result<Value, EvalError> {
        let unknown = || EvalError::UnknownSymbol {
            name: name.to_string(),
            available: self.symbols(),
        };
        let e = self.engine;
        match self.ring {
            RingContext::Fano => match name {
                "g" => Ok(Value::Chow(e.fano().g_elem())),
                "c" => Ok(Value::Chow(e.fano().c_elem())),
                "b" => Ok(Value::Cohom(CohomClass::letter(&e.model_f, "b"))),
                _ => Err(unknown()),
            },
            RingContext::FanoSquare => {
                let sq = &e.sq;
                match name {
                    "g1" => Ok(Value::Chow(sq.gen_elem(sq.gens.g1))),
                    "g2" => Ok(Value::Chow(sq.gen_elem(sq.gens.g2))),
                    "c1" => Ok(Value::Chow(sq.gen_elem(sq.gens.c1))),
                    "c2" => Ok(Value::Chow(sq.gen_elem(sq.gens.c2))),
                    "D" => Ok(Value::Chow(sq.gen_elem(sq.gens.delta))),
                    "I" => Ok(Value::Chow(sq.gen_elem(sq.gens.inc))),
                    "L" => Ok(Value::Chow(sq.l_class())),
                    "B" | "b1" | "b2" => {
                        Ok(Value::Cohom(CohomClass::letter(&e.model_fxf, name)))
                    }
                    "pi0" | "pi2" | "pi4" | "pi6" | "pi8" => {
                        let idx: usize = name[2..].parse::<usize>().unwrap() / 2;
                        Ok(Value::Cohom(ck_projectors(&e.model_fxf)[idx].class.clone()))
                    }
                    _ => Err(unknown()),
                }
            }
            RingContext::K3 { r, .. } => {
                let ring = self.k3.as_ref().expect("k3 context");
                if let Some(rest) = name.strip_prefix('h') {
                    if let Ok(i) = rest.parse::<usize>() {
                        if (1..=r).contains(&i) {
                            return Ok(Value::Chow(ring.h_elem(i - 1)));
                        }
                    }
                }
                if let Some(rest) = name.strip_prefix('o') {
                    if let Ok(i) = rest.parse::<usize>() {
                        if (1..=r).contains(&i) {
                            return Ok(Value::Chow(ring.o_elem(i - 1)));
                        }
                    }
                }
                if let Some(rest) = name.strip_prefix('D') {
                    let digits: Vec<u32> = rest.chars().filter_map(|c| c.to_digit(10)).collect();
                    if digits.len() == 2 && rest.len() == 2 {
                        let (i, j) = (digits[0] as usize, digits[1] as usize);
                        if i >= 1 && j > i && j <= r {
                            return Ok(Value::Chow(ring.diag_elem(i - 1, j - 1)));
                        }
                    }
                }
                Err(unknown())
            }
            RingContext::Grassmann => match name {
                "x1" => Ok(Value::Chow(e.gr.x1_elem())),
                "x2" => Ok(Value::Chow(e.gr.x2_elem())),
                _ => Err(unknown()),
            },
        }
    }

    fn cycle_map(&self) -> Result<CycleClassMap, EvalError> {
        let e = self.engine;
        match self.ring {
            RingContext::Fano => Ok(e.fano().cycle_map(&e.model_f)),
            RingContext::FanoSquare => e
                .sq
                .cycle_map(&e.model_fxf)
                .map_err(|err| EvalError::Unsupported(err.to_string())),
            RingContext::K3 { .. } => {
                let ring = self.k3.as_ref().expect("k3 context");
                Ok(ring.cycle_map(&ring.model(&e.cfg)))
            }
            RingContext::Grassmann => Err(EvalError::Unsupported(
                "no cycle class model for the Grassmannian presentation".into(),
            )),
        }
    }

    pub fn eval(&mut self, expr: &CycleExpr) -> Result<Value, EvalError> {
        match expr {
            CycleExpr::Num(n) => Ok(Value::Num(n.clone())),
            CycleExpr::Sym(name) => self.symbol(name),
            CycleExpr::Neg(inner) => {
                let v = self.eval(inner)?;
                Ok(match v {
                    Value::Num(n) => Value::Num(-n),
                    Value::Chow(x) => Value::Chow(x.scale(&Scalar::from_int(-1))),
                    Value::Cohom(x) => Value::Cohom(x.scale(&Scalar::from_int(-1))),
                })
            }
            CycleExpr::Add(a, b) => self.combine(a, b, false),
            CycleExpr::Sub(a, b) => self.combine(a, b, true),
            CycleExpr::Mul(a, b) => {
                let va = self.eval(a)?;
                let vb = self.eval(b)?;
                match (va, vb) {
                    (Value::Num(x), Value::Num(y)) => Ok(Value::Num(x * y)),
                    (Value::Num(s), Value::Chow(x)) | (Value::Chow(x), Value::Num(s)) => {
                        Ok(Value::Chow(x.scale(&s)))
                    }
                    (Value::Num(s), Value::Cohom(x)) | (Value::Cohom(x), Value::Num(s)) => {
                        Ok(Value::Cohom(x.scale(&s)))
                    }
                    (Value::Chow(x), Value::Chow(y)) => x
                        .try_mul(&y)
                        .map(Value::Chow)
                        .map_err(|e| EvalError::DegreeMismatch(e.to_string())),
                    (Value::Cohom(x), Value::Cohom(y)) => Ok(Value::Cohom(x.mul(&y))),
                    _ => Err(EvalError::TypeMismatch(
                        "cannot multiply a cycle by a cohomology class; apply cl(...) first"
                            .into(),
                    )),
                }
            }
            CycleExpr::Pow(base, k) => {
                let v = self.eval(base)?;
                Ok(match v {
                    Value::Num(n) => Value::Num(n.pow(*k)),
                    Value::Chow(x) => Value::Chow(x.pow(*k)),
                    Value::Cohom(x) => Value::Cohom(x.pow(*k)),
                })
            }
            CycleExpr::Call(name, args) => self.call(name, args),
        }
    }

    fn combine(
        &mut self,
        a: &CycleExpr,
        b: &CycleExpr,
        subtract: bool,
    ) -> Result<Value, EvalError> {
        let va = self.eval(a)?;
        let vb = self.eval(b)?;
        let vb = if subtract {
            match vb {
                Value::Num(n) => Value::Num(-n),
                Value::Chow(x) => Value::Chow(x.scale(&Scalar::from_int(-1))),
                Value::Cohom(x) => Value::Cohom(x.scale(&Scalar::from_int(-1))),
            }
        } else {
            vb
        };
        match (va, vb) {
            (Value::Num(x), Value::Num(y)) => Ok(Value::Num(x + y)),
            (Value::Chow(x), Value::Chow(y)) => x
                .try_add(&y)
                .map(Value::Chow)
                .map_err(|e| EvalError::DegreeMismatch(e.to_string())),
            (Value::Cohom(x), Value::Cohom(y)) => {
                if x.degree() != y.degree()
                    && x.terms().next().is_some()
                    && y.terms().next().is_some()
                {
                    return Err(EvalError::DegreeMismatch(format!(
                        "{} vs {}",
                        x.degree(),
                        y.degree()
                    )));
                }
                if x.terms().next().is_none() {
                    Ok(Value::Cohom(y))
                } else if y.terms().next().is_none() {
                    Ok(Value::Cohom(x))
                } else {
                    Ok(Value::Cohom(x.add(&y)))
                }
            }
            _ => Err(EvalError::TypeMismatch(
                "cannot add values of different kinds".into(),
            )),
        }
    }

    fn call(&mut self, name: &str, args: &[CycleExpr]) -> Result<Value, EvalError> {
        match name {
            "int" => match self.eval(&args[0])? {
                Value::Chow(x) => x
                    .integrate()
                    .map(Value::Num)
                    .map_err(|e| EvalError::DegreeMismatch(e.to_string())),
                Value::Cohom(x) => x
                    .integrate()
                    .map(Value::Num)
                    .map_err(|e| EvalError::DegreeMismatch(e.to_string())),
                Value::Num(_) => Err(EvalError::TypeMismatch("int of a number".into())),
            },
            "nf" => match self.eval(&args[0])? {
                Value::Chow(x) => Ok(Value::Chow(x.normal_form())),
                other => Ok(other),
            },
            "cl" => match self.eval(&args[0])? {
                Value::Chow(x) => {
                    let map = self.cycle_map()?;
                    Ok(Value::Cohom(map.apply(&x)))
                }
                other => Ok(other),
            },
            "pf1" | "pf2" => {
                if self.ring != RingContext::FanoSquare {
                    return Err(EvalError::Unsupported(
                        "projection pushforwards act on the square".into(),
                    ));
                }
                match self.eval(&args[0])? {
                    Value::Chow(x) => {
                        let (pushed, warned) = if name == "pf2" {
                            self.engine.sq.pushforward_pr2(&x)
                        } else {
                            self.engine.sq.pushforward_pr1(&x)
                        };
                        if warned {
                            self.warnings
                                .push("pushforward of a class of degree below 4 is zero".into());
                        }
                        Ok(Value::Chow(pushed))
                    }
                    _ => Err(EvalError::TypeMismatch("pushforward of a non-cycle".into())),
                }
            }
            "tr" => match self.eval(&args[0])? {
                Value::Chow(x) => {
                    if self.ring != RingContext::FanoSquare {
                        return Err(EvalError::Unsupported(
                            "transpose acts on the square".into(),
                        ));
                    }
                    Ok(Value::Chow(self.engine.sq.swap_elem(&x)))
                }
                Value::Cohom(x) => Ok(Value::Cohom(x.transpose())),
                Value::Num(n) => Ok(Value::Num(n)),
            },
            "delta" => {
                if self.ring != RingContext::FanoSquare {
                    return Err(EvalError::Unsupported(
                        "delta(...) embeds a fourfold class into the square".into(),
                    ));
                }
                let mut sub = Evaluator::new(self.engine, RingContext::Fano);
                let inner = sub.eval(&args[0])?;
                match inner {
                    Value::Chow(x) => Ok(Value::Chow(self.engine.sq.delta_star(&x))),
                    _ => Err(EvalError::TypeMismatch(
                        "delta(...) needs a cycle on the fourfold".into(),
                    )),
                }
            }
            "comp" => {
                let a = self.eval(&args[0])?;
                let b = self.eval(&args[1])?;
                match (a, b) {
                    (Value::Chow(x), Value::Chow(y)) => {
                        let composed = corresp::compose_chow(
                            &self.engine.sq,
                            &x,
                            &y,
                            &self.engine.cubic_h4(),
                        )
                        .map_err(|v| EvalError::ClosureViolation(v.to_string()))?;
                        Ok(Value::Chow(composed))
                    }
                    // with one cohomological operand the composition runs in
                    // the model; cycles are promoted through the class map
                    (a, b) => {
                        let promote = |v: Value, ev: &Evaluator| -> Result<CohomClass, EvalError> {
                            match v {
                                Value::Cohom(c) => Ok(c),
                                Value::Chow(x) => Ok(ev.cycle_map()?.apply(&x)),
                                Value::Num(_) => Err(EvalError::TypeMismatch(
                                    "comp needs two classes".into(),
                                )),
                            }
                        };
                        let x = promote(a, self)?;
                        let y = promote(b, self)?;
                        Ok(Value::Cohom(corresp::compose(&x, &y)))
                    }
                }
            }
            _ => unreachable!("parser enforces the function set"),
        }
    }
}

pub fn render_value(v: &Value) -> String {
    match v {
        Value::Num(n) => n.to_string(),
        Value::Chow(x) => x.normal_form().render(),
        Value::Cohom(x) => x.render(),
    }
}
