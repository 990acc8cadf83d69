//! Parser and bounded evaluator for the three-sorted valued-field
//! language, with the coset-constant extension.
//!
//! The extended language adds constants `d_1, …, d_m` to the valued-field
//! sort, interpreted as units whose angular components represent the
//! distinct cosets of `(F_q^×)^m` in `F_q^×`; constants beyond the coset
//! count are interpreted as 1. [`build_phi_lm`] produces the formula
//! asserting that `ℓ` residue elements are distinct coset representatives
//! that jointly cover, and [`build_psi_lm`] its existential closure; for a
//! fixed `q` and `m` exactly one `ψ_{ℓ,m}` holds as `ℓ` runs over the
//! divisors of `m`, namely `ℓ = gcd(m, q-1)`.

mod ast;
mod eval;
mod parser;

pub use ast::{sort_check, Formula, Sort, SortError, Term};
pub use eval::{evaluate, EvalError, Evaluation, Flag, Truth, Value};
pub use parser::{parse, ParseError};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::orbits::{Algebra, LieMatrix};
use crate::padic::{residue_power_coset_reps, FieldContext, PadicNumber};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum DpError {
    #[error("{0} does not divide {1}")]
    InvalidDivisor(u64, u64),
    #[error("structure constants fail their defining formula")]
    BadConstants,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

// ---------------------------------------------------------------------------
// Structures
// ---------------------------------------------------------------------------

/// A concrete interpretation: the field, the coset constants `d_i`, and
/// the windows bounding `Z`- and `VF`-sort quantifier enumeration.
#[derive(Clone, Debug)]
pub struct DPStructure {
    ctx: FieldContext,
    m: u64,
    constants: Vec<PadicNumber>,
    z_window: (i64, i64),
    vf_val_window: (i64, i64),
    vf_digits: u32,
    vf_ring_mode: bool,
}

impl DPStructure {
    /// Build the structure for `F` with `m` coset constants: the first
    /// `gcd(m, q-1)` are lifts of the canonical residue representatives,
    /// the rest are 1. The defining formula of the constants is verified
    /// at construction (for residue fields small enough to enumerate).
    pub fn new(ctx: &FieldContext, m: u64) -> Result<Self, DpError> {
        assert!(m >= 1, "the extension needs m >= 1");
        let reps = residue_power_coset_reps(m, ctx);
        let mut constants: Vec<PadicNumber> = reps.iter().map(|r| r.lift()).collect();
        constants.resize(m as usize, PadicNumber::one(ctx.clone()));
        let st = DPStructure {
            ctx: ctx.clone(),
            m,
            constants,
            z_window: (-16, 16),
            vf_val_window: (-4, 4),
            vf_digits: 2,
            vf_ring_mode: false,
        };
        if ctx.q() <= 512 {
            let ell = reps.len() as u64;
            let phi = build_phi_lm(ell, m).expect("gcd divides m");
            let assignment: BTreeMap<String, Value> = (1..=ell)
                .map(|i| {
                    (
                        format!("y{i}"),
                        Value::Rf(st.constants[(i - 1) as usize].ac()),
                    )
                })
                .collect();
            let ev = evaluate(&phi, &st, &assignment)?;
            if ev.result != Truth::True {
                return Err(DpError::BadConstants);
            }
        }
        Ok(st)
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    /// The modulus `m` of the coset extension.
    pub fn coset_modulus(&self) -> u64 {
        self.m
    }

    /// Interpretation of `d_i` (1-based).
    pub fn constant(&self, i: usize) -> Option<&PadicNumber> {
        if i == 0 {
            return None;
        }
        self.constants.get(i - 1)
    }

    pub fn with_z_window(mut self, lo: i64, hi: i64) -> Self {
        assert!(lo <= hi);
        self.z_window = (lo, hi);
        self
    }

    pub fn with_vf_window(mut self, val_lo: i64, val_hi: i64, digits: u32) -> Self {
        assert!(val_lo <= val_hi && digits >= 1);
        self.vf_val_window = (val_lo, val_hi);
        self.vf_digits = digits;
        self
    }

    /// Restrict valued-field quantifiers to the valuation ring, for
    /// formulas of the ring language.
    pub fn with_ring_mode(mut self, ring: bool) -> Self {
        self.vf_ring_mode = ring;
        self
    }

    pub fn z_window(&self) -> (i64, i64) {
        self.z_window
    }

    pub(crate) fn vf_domain(&self) -> Vec<PadicNumber> {
        let lo = if self.vf_ring_mode {
            self.vf_val_window.0.max(0)
        } else {
            self.vf_val_window.0
        };
        eval::vf_domain_values(&self.ctx, lo, self.vf_val_window.1, self.vf_digits)
    }
}

// ---------------------------------------------------------------------------
// The coset formulas
// ---------------------------------------------------------------------------

/// `φ_{ℓ,m}(y_1, …, y_ℓ)`: the `y_i` are pairwise in distinct
/// `(F_q^×)^m`-cosets (`ℓ(ℓ-1)/2` conjuncts) and every residue element is
/// reached from one of them (`ℓ`-fold disjunction), all quantifiers in the
/// residue sort.
pub fn build_phi_lm(ell: u64, m: u64) -> Result<Formula, DpError> {
    if ell == 0 || m % ell != 0 {
        return Err(DpError::InvalidDivisor(ell, m));
    }
    let y = |i: u64| Term::sorted_var(&format!("y{i}"), Sort::Rf);
    let z = || Term::sorted_var("z", Sort::Rf);
    let x = || Term::sorted_var("x", Sort::Rf);
    let mut conjuncts = Vec::new();
    for i in 1..=ell {
        for j in i + 1..=ell {
            // no z with y_i = y_j z^m
            conjuncts.push(Formula::not(Formula::exists(
                "z",
                Sort::Rf,
                Formula::Eq(y(i), Term::mul(y(j), z().pow(m))),
            )));
        }
    }
    let coverage = Formula::forall(
        "x",
        Sort::Rf,
        Formula::exists(
            "z",
            Sort::Rf,
            Formula::disj(
                (1..=ell)
                    .map(|i| Formula::Eq(x(), Term::mul(y(i), z().pow(m))))
                    .collect(),
            ),
        ),
    );
    conjuncts.push(coverage);
    Ok(Formula::conj(conjuncts))
}

/// `ψ_{ℓ,m} = ∃ y_1 … y_ℓ. φ_{ℓ,m}`.
pub fn build_psi_lm(ell: u64, m: u64) -> Result<Formula, DpError> {
    let mut f = build_phi_lm(ell, m)?;
    for i in (1..=ell).rev() {
        f = Formula::exists(&format!("y{i}"), Sort::Rf, f);
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Nilpotency as a quantifier-free formula
// ---------------------------------------------------------------------------

/// Matrix entry variable names `x_<row>_<col>`, 1-based.
pub fn entry_var_name(i: usize, j: usize) -> String {
    format!("x_{}_{}", i + 1, j + 1)
}

/// The quantifier-free formula in the `N²` entry variables asserting that
/// the `N`-th power of the matrix vanishes (`N = n` for `sl_n`, `N = 2n`
/// for `sp_2n`).
pub fn nilpotency_formula(algebra: Algebra) -> Formula {
    let n = algebra.matrix_size();
    let var = |i: usize, j: usize| Term::sorted_var(&entry_var_name(i, j), Sort::Vf);
    let mut power: Vec<Vec<Term>> = (0..n)
        .map(|i| (0..n).map(|j| var(i, j)).collect())
        .collect();
    for _ in 1..n {
        let mut next: Vec<Vec<Term>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc: Option<Term> = None;
                for (k, p) in power[i].iter().enumerate() {
                    let prod = Term::mul(p.clone(), var(k, j));
                    acc = Some(match acc {
                        None => prod,
                        Some(a) => Term::add(a, prod),
                    });
                }
                row.push(acc.expect("n >= 1"));
            }
            next.push(row);
        }
        power = next;
    }
    let zero = || Term::int(0, Sort::Vf);
    Formula::conj(
        power
            .into_iter()
            .flatten()
            .map(|entry| Formula::Eq(entry, zero()))
            .collect(),
    )
}

/// Assignment binding the entry variables to a concrete matrix.
pub fn matrix_assignment(m: &LieMatrix) -> BTreeMap<String, Value> {
    let mut out = BTreeMap::new();
    for i in 0..m.size() {
        for j in 0..m.size() {
            out.insert(entry_var_name(i, j), Value::Vf(m.entry(i, j).clone()));
        }
    }
    out
}
