//! Abstract syntax of the three-sorted valued-field language.
//!
//! Sorts: the valued field `VF` and residue field `RF` each carry the ring
//! language (`+`, `*`, `0`, `1`); the value group `Z` carries Presburger
//! arithmetic (`+`, `<=`, `~d` congruences, integer literals, and no
//! multiplication). `ord` maps `VF` to `Z` and `ac` maps `VF` to `RF`.
//! Coset constants `d1, d2, …` live in the `VF` sort.
//!
//! Variable occurrences may be written with or without a sort annotation;
//! [`sort_check`] infers the missing ones and rejects ill-sorted formulas.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sort {
    Vf,
    Rf,
    Zz,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Vf => "VF",
            Sort::Rf => "RF",
            Sort::Zz => "Z",
        })
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SortError {
    #[error("sort mismatch at {context}: expected {expected}, found {found}")]
    Mismatch {
        context: String,
        expected: Sort,
        found: Sort,
    },
    #[error("multiplication is not available in the Z sort (at {0})")]
    MulInZ(String),
    #[error("cannot infer the sort of `{0}`")]
    CannotInfer(String),
    #[error("bound variable `{0}` used with the wrong sort")]
    BoundMismatch(String),
    #[error("VF literals other than integers are not expressible: {0}")]
    BadLiteral(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    /// A variable; the sort is `None` until inference fills it in.
    Var { name: String, sort: Option<Sort> },
    /// An integer literal; resolves to a constant of any sort (`Z`
    /// literals are unrestricted, `VF`/`RF` literals are read as integer
    /// multiples of 1).
    Int { value: i64, sort: Option<Sort> },
    /// The added constant `d_i` of the extended language, `i ≥ 1`.
    CosetConst(usize),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Ord(Box<Term>),
    Ac(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var {
            name: name.into(),
            sort: None,
        }
    }

    pub fn sorted_var(name: &str, sort: Sort) -> Term {
        Term::Var {
            name: name.into(),
            sort: Some(sort),
        }
    }

    pub fn int(value: i64, sort: Sort) -> Term {
        Term::Int {
            value,
            sort: Some(sort),
        }
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn pow(self, e: u64) -> Term {
        assert!(e >= 1, "powers are positive in the surface language");
        let mut acc = self.clone();
        for _ in 1..e {
            acc = Term::mul(acc, self.clone());
        }
        acc
    }

    /// The sort of a fully-annotated term.
    pub fn sort(&self) -> Option<Sort> {
        match self {
            Term::Var { sort, .. } | Term::Int { sort, .. } => *sort,
            Term::CosetConst(_) => Some(Sort::Vf),
            Term::Add(a, b) | Term::Mul(a, b) => a.sort().or(b.sort()),
            Term::Ord(_) => Some(Sort::Zz),
            Term::Ac(_) => Some(Sort::Rf),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Eq(Term, Term),
    /// `Z`-sort comparison.
    Le(Term, Term),
    /// `a ≡ b (mod d)` in the `Z` sort, `d ≥ 2`.
    Cong(u64, Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Sort, Box<Formula>),
    Forall(String, Sort, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Right-nested conjunction of a nonempty list.
    pub fn conj(mut fs: Vec<Formula>) -> Formula {
        let mut acc = fs.pop().expect("nonempty conjunction");
        while let Some(f) = fs.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    pub fn disj(mut fs: Vec<Formula>) -> Formula {
        let mut acc = fs.pop().expect("nonempty disjunction");
        while let Some(f) = fs.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    pub fn exists(name: &str, sort: Sort, body: Formula) -> Formula {
        Formula::Exists(name.into(), sort, Box::new(body))
    }

    pub fn forall(name: &str, sort: Sort, body: Formula) -> Formula {
        Formula::Forall(name.into(), sort, Box::new(body))
    }

    /// Number of top-level conjuncts (flattening nested `And`).
    pub fn conjunct_count(&self) -> usize {
        match self {
            Formula::And(a, b) => a.conjunct_count() + b.conjunct_count(),
            _ => 1,
        }
    }

    pub fn disjunct_count(&self) -> usize {
        match self {
            Formula::Or(a, b) => a.disjunct_count() + b.disjunct_count(),
            _ => 1,
        }
    }

    /// Does any `VF`-sorted quantifier occur? Decides whether bounded
    /// evaluation can be exact.
    pub fn has_vf_quantifier(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Le(..) | Formula::Cong(..) => false,
            Formula::Not(f) => f.has_vf_quantifier(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.has_vf_quantifier() || b.has_vf_quantifier()
            }
            Formula::Exists(_, s, f) | Formula::Forall(_, s, f) => {
                *s == Sort::Vf || f.has_vf_quantifier()
            }
        }
    }

    /// Negation normal form: negations pushed onto atoms.
    pub fn to_nnf(&self) -> Formula {
        fn pos(f: &Formula) -> Formula {
            match f {
                Formula::Eq(..) | Formula::Le(..) | Formula::Cong(..) => f.clone(),
                Formula::Not(g) => neg(g),
                Formula::And(a, b) => Formula::and(pos(a), pos(b)),
                Formula::Or(a, b) => Formula::or(pos(a), pos(b)),
                Formula::Exists(n, s, g) => Formula::Exists(n.clone(), *s, Box::new(pos(g))),
                Formula::Forall(n, s, g) => Formula::Forall(n.clone(), *s, Box::new(pos(g))),
            }
        }
        fn neg(f: &Formula) -> Formula {
            match f {
                Formula::Eq(..) | Formula::Le(..) | Formula::Cong(..) => {
                    Formula::not(f.clone())
                }
                Formula::Not(g) => pos(g),
                Formula::And(a, b) => Formula::or(neg(a), neg(b)),
                Formula::Or(a, b) => Formula::and(neg(a), neg(b)),
                Formula::Exists(n, s, g) => Formula::Forall(n.clone(), *s, Box::new(neg(g))),
                Formula::Forall(n, s, g) => Formula::Exists(n.clone(), *s, Box::new(neg(g))),
            }
        }
        pos(self)
    }

    /// Free variables with their sorts (valid on checked formulas).
    pub fn free_vars(&self) -> BTreeMap<String, Sort> {
        fn term(t: &Term, bound: &mut Vec<String>, out: &mut BTreeMap<String, Sort>) {
            match t {
                Term::Var { name, sort } => {
                    if !bound.contains(name) {
                        if let Some(s) = sort {
                            out.insert(name.clone(), *s);
                        }
                    }
                }
                Term::Int { .. } | Term::CosetConst(_) => {}
                Term::Add(a, b) | Term::Mul(a, b) => {
                    term(a, bound, out);
                    term(b, bound, out);
                }
                Term::Ord(a) | Term::Ac(a) => term(a, bound, out),
            }
        }
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeMap<String, Sort>) {
            match f {
                Formula::Eq(a, b) | Formula::Le(a, b) => {
                    term(a, bound, out);
                    term(b, bound, out);
                }
                Formula::Cong(_, a, b) => {
                    term(a, bound, out);
                    term(b, bound, out);
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Exists(n, _, g) | Formula::Forall(n, _, g) => {
                    bound.push(n.clone());
                    walk(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeMap::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

// ---------------------------------------------------------------------------
// Sort checking and inference
// ---------------------------------------------------------------------------

fn unify(a: Option<Sort>, b: Option<Sort>, context: &str) -> Result<Option<Sort>, SortError> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(SortError::Mismatch {
            context: context.to_string(),
            expected: x,
            found: y,
        }),
        (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
        (None, None) => Ok(None),
    }
}

struct Checker {
    free: BTreeMap<String, Sort>,
    unresolved: usize,
}

impl Checker {
    fn term(
        &mut self,
        t: &mut Term,
        want: Option<Sort>,
        bound: &[(String, Sort)],
    ) -> Result<Option<Sort>, SortError> {
        match t {
            Term::Var { name, sort } => {
                let bound_sort = bound
                    .iter()
                    .rev()
                    .find(|(n, _)| n == name)
                    .map(|(_, s)| *s);
                let mut resolved = unify(*sort, want, name)?;
                if let Some(bs) = bound_sort {
                    if matches!(resolved, Some(r) if r != bs) {
                        return Err(SortError::BoundMismatch(name.clone()));
                    }
                    resolved = Some(bs);
                } else {
                    resolved = unify(resolved, self.free.get(name).copied(), name)?;
                    if let Some(s) = resolved {
                        self.free.insert(name.clone(), s);
                    }
                }
                match resolved {
                    Some(s) => *sort = Some(s),
                    None => self.unresolved += 1,
                }
                Ok(resolved)
            }
            Term::Int { value, sort } => {
                let resolved = unify(*sort, want, &value.to_string())?;
                match resolved {
                    Some(s) => *sort = Some(s),
                    None => self.unresolved += 1,
                }
                Ok(resolved)
            }
            Term::CosetConst(_) => {
                unify(Some(Sort::Vf), want, "coset constant")?;
                Ok(Some(Sort::Vf))
            }
            Term::Add(a, b) => {
                let sa = self.term(a, want, bound)?;
                let sb = self.term(b, unify(sa, want, "+")?, bound)?;
                if sa.is_none() && sb.is_some() {
                    self.term(a, sb, bound)?;
                }
                unify(sa, sb, "+")
            }
            Term::Mul(a, b) => {
                let sa = self.term(a, want, bound)?;
                let sb = self.term(b, unify(sa, want, "*")?, bound)?;
                if sa.is_none() && sb.is_some() {
                    self.term(a, sb, bound)?;
                }
                let s = unify(sa, sb, "*")?;
                if s == Some(Sort::Zz) {
                    return Err(SortError::MulInZ(format!("{t}")));
                }
                Ok(s)
            }
            Term::Ord(a) => {
                self.term(a, Some(Sort::Vf), bound)?;
                unify(Some(Sort::Zz), want, "ord(...)")?;
                Ok(Some(Sort::Zz))
            }
            Term::Ac(a) => {
                self.term(a, Some(Sort::Vf), bound)?;
                unify(Some(Sort::Rf), want, "ac(...)")?;
                Ok(Some(Sort::Rf))
            }
        }
    }

    fn formula(
        &mut self,
        f: &mut Formula,
        bound: &mut Vec<(String, Sort)>,
    ) -> Result<(), SortError> {
        match f {
            Formula::Eq(a, b) => {
                let sa = self.term(a, None, bound)?;
                let sb = self.term(b, sa, bound)?;
                if sa.is_none() && sb.is_some() {
                    self.term(a, sb, bound)?;
                }
                Ok(())
            }
            Formula::Le(a, b) => {
                self.term(a, Some(Sort::Zz), bound)?;
                self.term(b, Some(Sort::Zz), bound)?;
                Ok(())
            }
            Formula::Cong(_, a, b) => {
                self.term(a, Some(Sort::Zz), bound)?;
                self.term(b, Some(Sort::Zz), bound)?;
                Ok(())
            }
            Formula::Not(g) => self.formula(g, bound),
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.formula(a, bound)?;
                self.formula(b, bound)
            }
            Formula::Exists(n, s, g) | Formula::Forall(n, s, g) => {
                bound.push((n.clone(), *s));
                let r = self.formula(g, bound);
                bound.pop();
                r
            }
        }
    }
}

/// Infer missing sorts in place and verify sort discipline. Returns the
/// sorts of the free variables. Fails if some variable or literal cannot
/// be resolved.
pub fn sort_check(f: &mut Formula) -> Result<BTreeMap<String, Sort>, SortError> {
    let mut checker = Checker {
        free: BTreeMap::new(),
        unresolved: 0,
    };
    // iterate until no unresolved slots remain or no progress is made
    let mut last = usize::MAX;
    loop {
        checker.unresolved = 0;
        checker.formula(f, &mut Vec::new())?;
        if checker.unresolved == 0 {
            return Ok(checker.free);
        }
        if checker.unresolved >= last {
            return Err(SortError::CannotInfer(describe_unresolved(f)));
        }
        last = checker.unresolved;
    }
}

fn describe_unresolved(f: &Formula) -> String {
    fn term(t: &Term) -> Option<String> {
        match t {
            Term::Var { name, sort: None } => Some(name.clone()),
            Term::Int { value, sort: None } => Some(value.to_string()),
            Term::Var { .. } | Term::Int { .. } | Term::CosetConst(_) => None,
            Term::Add(a, b) | Term::Mul(a, b) => term(a).or_else(|| term(b)),
            Term::Ord(a) | Term::Ac(a) => term(a),
        }
    }
    fn walk(f: &Formula) -> Option<String> {
        match f {
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Cong(_, a, b) => {
                term(a).or_else(|| term(b))
            }
            Formula::Not(g) => walk(g),
            Formula::And(a, b) | Formula::Or(a, b) => walk(a).or_else(|| walk(b)),
            Formula::Exists(_, _, g) | Formula::Forall(_, _, g) => walk(g),
        }
    }
    walk(f).unwrap_or_else(|| "<unknown>".into())
}

// ---------------------------------------------------------------------------
// Pretty printing (round-trips through the parser)
// ---------------------------------------------------------------------------

fn render_term(t: &Term, bound: &[String], out: &mut String) {
    match t {
        Term::Var { name, sort } => {
            out.push_str(name);
            // free occurrences carry their sort so the text re-parses to
            // the same annotated tree
            if !bound.contains(name) {
                if let Some(s) = sort {
                    out.push(':');
                    out.push_str(&s.to_string());
                }
            }
        }
        Term::Int { value, .. } => out.push_str(&value.to_string()),
        Term::CosetConst(i) => out.push_str(&format!("d{i}")),
        Term::Add(a, b) => {
            out.push('(');
            render_term(a, bound, out);
            out.push_str(" + ");
            render_term(b, bound, out);
            out.push(')');
        }
        Term::Mul(a, b) => {
            out.push('(');
            render_term(a, bound, out);
            out.push_str(" * ");
            render_term(b, bound, out);
            out.push(')');
        }
        Term::Ord(a) => {
            out.push_str("ord(");
            render_term(a, bound, out);
            out.push(')');
        }
        Term::Ac(a) => {
            out.push_str("ac(");
            render_term(a, bound, out);
            out.push(')');
        }
    }
}

fn render_formula(f: &Formula, bound: &mut Vec<String>, out: &mut String) {
    match f {
        Formula::Eq(a, b) => {
            render_term(a, bound, out);
            out.push_str(" = ");
            render_term(b, bound, out);
        }
        Formula::Le(a, b) => {
            render_term(a, bound, out);
            out.push_str(" <= ");
            render_term(b, bound, out);
        }
        Formula::Cong(d, a, b) => {
            render_term(a, bound, out);
            out.push_str(&format!(" ~{d} "));
            render_term(b, bound, out);
        }
        Formula::Not(g) => {
            out.push_str("not (");
            render_formula(g, bound, out);
            out.push(')');
        }
        Formula::And(a, b) => {
            out.push('(');
            render_formula(a, bound, out);
            out.push_str(") and (");
            render_formula(b, bound, out);
            out.push(')');
        }
        Formula::Or(a, b) => {
            out.push('(');
            render_formula(a, bound, out);
            out.push_str(") or (");
            render_formula(b, bound, out);
            out.push(')');
        }
        Formula::Exists(n, s, g) | Formula::Forall(n, s, g) => {
            let kw = if matches!(f, Formula::Exists(..)) {
                "exists"
            } else {
                "forall"
            };
            out.push_str(&format!("{kw} {n}:{s}. ("));
            bound.push(n.clone());
            render_formula(g, bound, out);
            bound.pop();
            out.push(')');
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        render_term(self, &[], &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        render_formula(self, &mut Vec::new(), &mut s);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inference_resolves_through_ac() {
        // exists y:RF. y*y = ac(x): x must be VF
        let mut f = Formula::exists(
            "y",
            Sort::Rf,
            Formula::Eq(
                Term::mul(Term::var("y"), Term::var("y")),
                Term::Ac(Box::new(Term::var("x"))),
            ),
        );
        let free = sort_check(&mut f).unwrap();
        assert_eq!(free.get("x"), Some(&Sort::Vf));
        assert!(!f.has_vf_quantifier());
    }

    #[test]
    fn zz_addition_allowed_multiplication_rejected() {
        let mut ok = Formula::Eq(
            Term::add(
                Term::Ord(Box::new(Term::var("x"))),
                Term::Ord(Box::new(Term::var("x"))),
            ),
            Term::Int {
                value: 2,
                sort: None,
            },
        );
        sort_check(&mut ok).unwrap();

        let mut bad = Formula::Eq(
            Term::mul(
                Term::Ord(Box::new(Term::var("x"))),
                Term::Ord(Box::new(Term::var("x"))),
            ),
            Term::Int {
                value: 2,
                sort: None,
            },
        );
        assert!(matches!(sort_check(&mut bad), Err(SortError::MulInZ(_))));
    }

    #[test]
    fn cross_sort_rejected() {
        // x:VF * n:Z
        let mut bad = Formula::Eq(
            Term::mul(
                Term::sorted_var("x", Sort::Vf),
                Term::sorted_var("n", Sort::Zz),
            ),
            Term::Int {
                value: 1,
                sort: None,
            },
        );
        assert!(matches!(
            sort_check(&mut bad),
            Err(SortError::Mismatch { .. })
        ));
    }

    #[test]
    fn unresolvable_reported() {
        let mut f = Formula::Eq(Term::var("a"), Term::var("b"));
        assert!(matches!(sort_check(&mut f), Err(SortError::CannotInfer(_))));
    }

    #[test]
    fn nnf_structure() {
        let atom = Formula::Eq(
            Term::sorted_var("x", Sort::Zz),
            Term::int(1, Sort::Zz),
        );
        let f = Formula::not(Formula::and(
            atom.clone(),
            Formula::exists("y", Sort::Zz, atom.clone()),
        ));
        let nnf = f.to_nnf();
        match &nnf {
            Formula::Or(a, b) => {
                assert!(matches!(**a, Formula::Not(_)));
                assert!(matches!(**b, Formula::Forall(..)));
            }
            other => panic!("expected Or, got {other:?}"),
        }
    }

    #[test]
    fn counts() {
        let atom = Formula::Eq(
            Term::sorted_var("x", Sort::Zz),
            Term::int(1, Sort::Zz),
        );
        let c = Formula::conj(vec![atom.clone(), atom.clone(), atom.clone()]);
        assert_eq!(c.conjunct_count(), 3);
        let d = Formula::disj(vec![atom.clone(), atom.clone()]);
        assert_eq!(d.disjunct_count(), 2);
    }
}
