//! Bounded evaluation of checked formulas in a concrete structure.
//!
//! Residue-field quantifiers enumerate `F_q` exactly. `Z`-sort quantifiers
//! scan the configured window and re-scan it widened by 8 on both sides;
//! a disagreement is reported as [`Truth::Unbounded`]. Valued-field
//! quantifiers enumerate truncated ball representatives `ϖ^v·(unit digits)`
//! over the configured window and always mark the outcome as bounded.
//!
//! Applying `ord` to zero raises the [`Flag::OrdOfZero`] diagnostic and
//! decides the enclosing atom as false (the valuation map is only defined
//! on nonzero elements, so no sentinel value is silently compared).
//!
//! Formulas are compiled to index-resolved form before evaluation so the
//! quantifier loops never touch variable names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::ast::{Formula, Sort, Term};
use super::DPStructure;
use crate::padic::{PadicData, PadicError, PadicNumber, ResidueElement};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum EvalError {
    #[error("no value assigned to free variable `{0}`")]
    UnassignedVariable(String),
    #[error("value for `{name}` has sort {found}, expected {expected}")]
    ValueSortMismatch {
        name: String,
        expected: Sort,
        found: Sort,
    },
    #[error("formula is not fully sort-annotated at `{0}`")]
    NotChecked(String),
    #[error("coset constant d{0} is outside the structure (m = {1})")]
    MissingConstant(usize, u64),
    #[error("Z-sort arithmetic overflowed")]
    Overflow,
    #[error(transparent)]
    Arith(#[from] PadicError),
}

/// Three-valued outcome of bounded evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Truth {
    False,
    /// A `Z`-window scan disagreed with its widened re-scan.
    Unbounded,
    True,
}

impl Truth {
    fn negate(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unbounded => Truth::Unbounded,
        }
    }

    fn of(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unbounded => "UNBOUNDED",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Flag {
    /// `ord` was applied to zero somewhere during evaluation.
    OrdOfZero,
    /// A valued-field quantifier was enumerated over a bounded window.
    VfBounded,
    /// A valued-field computation cancelled below its stored precision;
    /// the affected atom was decided false. Exactness is withdrawn.
    PrecisionLoss,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::OrdOfZero => "ord-of-zero",
            Flag::VfBounded => "vf-bounded",
            Flag::PrecisionLoss => "precision-loss",
        })
    }
}

/// Result of one evaluation: the truth value, whether the semantics were
/// exact (no valued-field quantifier), and any diagnostics raised.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub result: Truth,
    pub exact: bool,
    pub flags: BTreeSet<Flag>,
}

/// A runtime value of one of the three sorts.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Vf(PadicNumber),
    Rf(ResidueElement),
    Zz(i64),
}

impl Value {
    pub fn sort(&self) -> Sort {
        match self {
            Value::Vf(_) => Sort::Vf,
            Value::Rf(_) => Sort::Rf,
            Value::Zz(_) => Sort::Zz,
        }
    }
}

// ---------------------------------------------------------------------------
// Compilation to index-resolved form
// ---------------------------------------------------------------------------

enum CTerm {
    Bound(usize),
    Free(usize),
    Int(i64, Sort),
    Coset(usize),
    Add(Box<CTerm>, Box<CTerm>),
    Mul(Box<CTerm>, Box<CTerm>),
    Ord(Box<CTerm>),
    Ac(Box<CTerm>),
}

enum CFormula {
    Eq(CTerm, CTerm),
    Le(CTerm, CTerm),
    Cong(u64, CTerm, CTerm),
    Not(Box<CFormula>),
    And(Box<CFormula>, Box<CFormula>),
    Or(Box<CFormula>, Box<CFormula>),
    Exists(Sort, Box<CFormula>),
    Forall(Sort, Box<CFormula>),
}

fn compile_term(
    t: &Term,
    binders: &[String],
    free: &BTreeMap<String, usize>,
) -> Result<CTerm, EvalError> {
    Ok(match t {
        Term::Var { name, sort } => {
            if sort.is_none() {
                return Err(EvalError::NotChecked(name.clone()));
            }
            if let Some(level) = binders.iter().rposition(|b| b == name) {
                CTerm::Bound(level)
            } else {
                let idx = free
                    .get(name)
                    .ok_or_else(|| EvalError::UnassignedVariable(name.clone()))?;
                CTerm::Free(*idx)
            }
        }
        Term::Int { value, sort } => match sort {
            Some(s) => CTerm::Int(*value, *s),
            None => return Err(EvalError::NotChecked(value.to_string())),
        },
        Term::CosetConst(i) => CTerm::Coset(*i),
        Term::Add(a, b) => CTerm::Add(
            Box::new(compile_term(a, binders, free)?),
            Box::new(compile_term(b, binders, free)?),
        ),
        Term::Mul(a, b) => CTerm::Mul(
            Box::new(compile_term(a, binders, free)?),
            Box::new(compile_term(b, binders, free)?),
        ),
        Term::Ord(a) => CTerm::Ord(Box::new(compile_term(a, binders, free)?)),
        Term::Ac(a) => CTerm::Ac(Box::new(compile_term(a, binders, free)?)),
    })
}

fn compile(
    f: &Formula,
    binders: &mut Vec<String>,
    free: &BTreeMap<String, usize>,
) -> Result<CFormula, EvalError> {
    Ok(match f {
        Formula::Eq(a, b) => CFormula::Eq(
            compile_term(a, binders, free)?,
            compile_term(b, binders, free)?,
        ),
        Formula::Le(a, b) => CFormula::Le(
            compile_term(a, binders, free)?,
            compile_term(b, binders, free)?,
        ),
        Formula::Cong(d, a, b) => CFormula::Cong(
            *d,
            compile_term(a, binders, free)?,
            compile_term(b, binders, free)?,
        ),
        Formula::Not(g) => CFormula::Not(Box::new(compile(g, binders, free)?)),
        Formula::And(a, b) => CFormula::And(
            Box::new(compile(a, binders, free)?),
            Box::new(compile(b, binders, free)?),
        ),
        Formula::Or(a, b) => CFormula::Or(
            Box::new(compile(a, binders, free)?),
            Box::new(compile(b, binders, free)?),
        ),
        Formula::Exists(n, s, g) => {
            binders.push(n.clone());
            let body = compile(g, binders, free)?;
            binders.pop();
            CFormula::Exists(*s, Box::new(body))
        }
        Formula::Forall(n, s, g) => {
            binders.push(n.clone());
            let body = compile(g, binders, free)?;
            binders.pop();
            CFormula::Forall(*s, Box::new(body))
        }
    })
}

// ---------------------------------------------------------------------------
// Evaluation proper
// ---------------------------------------------------------------------------

enum TermFail {
    /// Undefined or undecidable subcomputation; decides the atom false.
    Undecided,
    Fatal(EvalError),
}

struct Evaluator<'a> {
    st: &'a DPStructure,
    free: Vec<Value>,
    env: Vec<Value>,
    flags: BTreeSet<Flag>,
}

impl<'a> Evaluator<'a> {
    fn vf_arith(&mut self, r: Result<PadicNumber, PadicError>) -> Result<Value, TermFail> {
        match r {
            Ok(v) => Ok(Value::Vf(v)),
            Err(PadicError::PrecisionLoss) => {
                self.flags.insert(Flag::PrecisionLoss);
                Err(TermFail::Undecided)
            }
            Err(e) => Err(TermFail::Fatal(EvalError::Arith(e))),
        }
    }

    fn term(&mut self, t: &CTerm) -> Result<Value, TermFail> {
        match t {
            CTerm::Bound(i) => Ok(self.env[*i].clone()),
            CTerm::Free(i) => Ok(self.free[*i].clone()),
            CTerm::Int(v, s) => Ok(match s {
                Sort::Vf => Value::Vf(PadicNumber::from_integer(self.st.context().clone(), *v)),
                Sort::Rf => {
                    let p = self.st.context().p() as i64;
                    Value::Rf(self.st.context().residue(v.rem_euclid(p) as u64))
                }
                Sort::Zz => Value::Zz(*v),
            }),
            CTerm::Coset(i) => match self.st.constant(*i) {
                Some(c) => Ok(Value::Vf(c.clone())),
                None => Err(TermFail::Fatal(EvalError::MissingConstant(
                    *i,
                    self.st.coset_modulus(),
                ))),
            },
            CTerm::Add(a, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                match (a, b) {
                    (Value::Vf(x), Value::Vf(y)) => self.vf_arith(x.add(&y)),
                    (Value::Rf(x), Value::Rf(y)) => Ok(Value::Rf(x.add(&y))),
                    (Value::Zz(x), Value::Zz(y)) => x
                        .checked_add(y)
                        .map(Value::Zz)
                        .ok_or(TermFail::Fatal(EvalError::Overflow)),
                    _ => Err(TermFail::Fatal(EvalError::NotChecked("+".into()))),
                }
            }
            CTerm::Mul(a, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                match (a, b) {
                    (Value::Vf(x), Value::Vf(y)) => self.vf_arith(x.mul(&y)),
                    (Value::Rf(x), Value::Rf(y)) => Ok(Value::Rf(x.mul(&y))),
                    _ => Err(TermFail::Fatal(EvalError::NotChecked("*".into()))),
                }
            }
            CTerm::Ord(a) => match self.term(a)? {
                Value::Vf(x) => match x.ord() {
                    Some(v) => Ok(Value::Zz(v)),
                    None => {
                        self.flags.insert(Flag::OrdOfZero);
                        Err(TermFail::Undecided)
                    }
                },
                _ => Err(TermFail::Fatal(EvalError::NotChecked("ord".into()))),
            },
            CTerm::Ac(a) => match self.term(a)? {
                Value::Vf(x) => Ok(Value::Rf(x.ac())),
                _ => Err(TermFail::Fatal(EvalError::NotChecked("ac".into()))),
            },
        }
    }

    fn atom(
        &mut self,
        a: &CTerm,
        b: &CTerm,
        cmp: impl Fn(&Value, &Value) -> Result<bool, EvalError>,
    ) -> Result<Truth, EvalError> {
        let va = match self.term(a) {
            Ok(v) => v,
            Err(TermFail::Undecided) => return Ok(Truth::False),
            Err(TermFail::Fatal(e)) => return Err(e),
        };
        let vb = match self.term(b) {
            Ok(v) => v,
            Err(TermFail::Undecided) => return Ok(Truth::False),
            Err(TermFail::Fatal(e)) => return Err(e),
        };
        Ok(Truth::of(cmp(&va, &vb)?))
    }

    fn formula(&mut self, f: &CFormula) -> Result<Truth, EvalError> {
        match f {
            CFormula::Eq(a, b) => self.atom(a, b, |x, y| match (x, y) {
                (Value::Vf(a), Value::Vf(b)) => Ok(a == b),
                (Value::Rf(a), Value::Rf(b)) => Ok(a == b),
                (Value::Zz(a), Value::Zz(b)) => Ok(a == b),
                _ => Err(EvalError::NotChecked("=".into())),
            }),
            CFormula::Le(a, b) => self.atom(a, b, |x, y| match (x, y) {
                (Value::Zz(a), Value::Zz(b)) => Ok(a <= b),
                _ => Err(EvalError::NotChecked("<=".into())),
            }),
            CFormula::Cong(d, a, b) => {
                let d = *d;
                self.atom(a, b, move |x, y| match (x, y) {
                    (Value::Zz(a), Value::Zz(b)) => {
                        Ok((a - b).rem_euclid(d as i64) == 0)
                    }
                    _ => Err(EvalError::NotChecked("~".into())),
                })
            }
            CFormula::Not(g) => Ok(self.formula(g)?.negate()),
            CFormula::And(a, b) => {
                let ra = self.formula(a)?;
                if ra == Truth::False {
                    return Ok(Truth::False);
                }
                let rb = self.formula(b)?;
                Ok(ra.min(rb))
            }
            CFormula::Or(a, b) => {
                let ra = self.formula(a)?;
                if ra == Truth::True {
                    return Ok(Truth::True);
                }
                let rb = self.formula(b)?;
                Ok(ra.max(rb))
            }
            CFormula::Exists(sort, body) => self.quantifier(*sort, body, true),
            CFormula::Forall(sort, body) => self.quantifier(*sort, body, false),
        }
    }

    fn fold(
        &mut self,
        body: &CFormula,
        exists: bool,
        values: impl Iterator<Item = Value>,
    ) -> Result<Truth, EvalError> {
        let mut acc = Truth::of(!exists);
        for v in values {
            self.env.push(v);
            let r = self.formula(body);
            self.env.pop();
            let r = r?;
            if exists {
                if r == Truth::True {
                    return Ok(Truth::True);
                }
                acc = acc.max(r);
            } else {
                if r == Truth::False {
                    return Ok(Truth::False);
                }
                acc = acc.min(r);
            }
        }
        Ok(acc)
    }

    fn quantifier(
        &mut self,
        sort: Sort,
        body: &CFormula,
        exists: bool,
    ) -> Result<Truth, EvalError> {
        match sort {
            Sort::Rf => {
                let ctx = self.st.context().clone();
                let vals = (0..ctx.q()).map(|i| Value::Rf(ctx.residue(i)));
                self.fold(body, exists, vals)
            }
            Sort::Zz => {
                let (lo, hi) = self.st.z_window();
                let inner = self.fold(body, exists, (lo..=hi).map(Value::Zz))?;
                let outer = self.fold(body, exists, (lo - 8..=hi + 8).map(Value::Zz))?;
                Ok(if inner == outer {
                    inner
                } else {
                    Truth::Unbounded
                })
            }
            Sort::Vf => {
                self.flags.insert(Flag::VfBounded);
                let vals = self.st.vf_domain();
                self.fold(body, exists, vals.into_iter().map(Value::Vf))
            }
        }
    }
}

/// Evaluate a checked formula under the given assignment of its free
/// variables.
pub fn evaluate(
    f: &Formula,
    st: &DPStructure,
    assignment: &BTreeMap<String, Value>,
) -> Result<Evaluation, EvalError> {
    let free_sorts = f.free_vars();
    let mut free_index = BTreeMap::new();
    let mut free_values = Vec::new();
    for (name, sort) in &free_sorts {
        let value = assignment
            .get(name)
            .ok_or_else(|| EvalError::UnassignedVariable(name.clone()))?;
        if value.sort() != *sort {
            return Err(EvalError::ValueSortMismatch {
                name: name.clone(),
                expected: *sort,
                found: value.sort(),
            });
        }
        free_index.insert(name.clone(), free_values.len());
        free_values.push(value.clone());
    }
    let compiled = compile(f, &mut Vec::new(), &free_index)?;
    let mut ev = Evaluator {
        st,
        free: free_values,
        env: Vec::new(),
        flags: BTreeSet::new(),
    };
    let result = ev.formula(&compiled)?;
    let exact = !f.has_vf_quantifier() && !ev.flags.contains(&Flag::PrecisionLoss);
    Ok(Evaluation {
        result,
        exact,
        flags: ev.flags,
    })
}

/// The canonical truncated representatives enumerated by a valued-field
/// quantifier: zero plus `ϖ^v · (d_0 + d_1 ϖ + …)` with `d_0 ≠ 0`.
pub(super) fn vf_domain_values(
    ctx: &crate::padic::FieldContext,
    val_lo: i64,
    val_hi: i64,
    digits: u32,
) -> Vec<PadicNumber> {
    let q = ctx.q();
    let k = ctx.k() as usize;
    let mut out = vec![PadicNumber::zero(ctx.clone())];
    let digit_coeffs = |idx: u64| -> Vec<u64> { ctx.residue(idx).coeffs() };
    let combos = (q - 1) * q.pow(digits.saturating_sub(1));
    for v in val_lo..=val_hi {
        for c in 0..combos {
            let first = 1 + c % (q - 1);
            let mut rest = c / (q - 1);
            let mut ds = Vec::with_capacity(digits as usize);
            ds.push(digit_coeffs(first));
            for _ in 1..digits {
                ds.push(digit_coeffs(rest % q));
                rest /= q;
            }
            debug_assert_eq!(ds[0].len(), k);
            let data = PadicData {
                val: Some(v),
                digits: ds,
            };
            out.push(PadicNumber::from_data(ctx, &data).expect("valid ball representative"));
        }
    }
    out
}
