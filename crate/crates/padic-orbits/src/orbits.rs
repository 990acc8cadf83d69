//! Rational nilpotent orbit labels for `sl_n` and `sp_2n` and their
//! explicit matrix representatives.
//!
//! An `sl_n` orbit is a partition of `n` together with a coset datum
//! `d = ϖ^j u_i` running over `F^×/(F^×)^{gcd(λ)}`; an `sp_2n` orbit is a
//! symplectic-admissible partition of `2n` together with a tuple of
//! quadratic-form classes, one of dimension `m_i(λ)` for each even `i`.
//! Representatives are assembled exactly, so no precision is consumed.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::rank_i64;
use crate::padic::{residue_power_coset_reps, FieldContext, PadicError, PadicNumber};
use crate::partitions::{enumerate_partitions, Partition};
use crate::quadforms::{enumerate_tuples, QFormError, QTuple, QTupleData};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("not regular semisimple: a root vanishes on the element")]
    NotRegular,
    #[error("label does not belong to this operation: {0}")]
    BadLabel(String),
    #[error(transparent)]
    Arith(#[from] PadicError),
    #[error(transparent)]
    Form(#[from] QFormError),
}

/// Which classical algebra a matrix or label lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algebra {
    /// `sl_n`, `n ≥ 2`.
    Sl(u32),
    /// `sp_2n` embedded via `g^t J g = J` with `J = [[0, I], [-I, 0]]`.
    Sp(u32),
}

impl Algebra {
    pub fn matrix_size(self) -> usize {
        match self {
            Algebra::Sl(n) => n as usize,
            Algebra::Sp(n) => 2 * n as usize,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            Algebra::Sl(n) => n as usize - 1,
            Algebra::Sp(n) => n as usize,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Algebra::Sl(n) => (n * n - 1) as usize,
            Algebra::Sp(n) => (2 * n * n + n) as usize,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algebra::Sl(_) => "sl",
            Algebra::Sp(_) => "sp",
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Sl(n) => write!(f, "sl{}", n),
            Algebra::Sp(n) => write!(f, "sp{}", 2 * n),
        }
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// A square matrix of field elements tagged with its ambient algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct LieMatrix {
    algebra: Algebra,
    ctx: FieldContext,
    entries: Vec<Vec<PadicNumber>>,
}

impl LieMatrix {
    pub fn new(
        algebra: Algebra,
        ctx: FieldContext,
        entries: Vec<Vec<PadicNumber>>,
    ) -> Result<Self, OrbitError> {
        let n = algebra.matrix_size();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(OrbitError::BadLabel(format!(
                "expected a {n}x{n} matrix for {algebra}"
            )));
        }
        Ok(LieMatrix {
            algebra,
            ctx,
            entries,
        })
    }

    pub fn zero(algebra: Algebra, ctx: FieldContext) -> Self {
        let n = algebra.matrix_size();
        let z = PadicNumber::zero(ctx.clone());
        LieMatrix {
            algebra,
            ctx,
            entries: vec![vec![z; n]; n],
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &PadicNumber {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<PadicNumber>] {
        &self.entries
    }

    /// Membership in the tagged algebra: trace zero for `sl_n`;
    /// `X^t J + J X = 0` for `sp_2n`, i.e. `D = -A^t` with `B`, `C`
    /// symmetric in block form.
    pub fn in_algebra(&self) -> Result<bool, OrbitError> {
        match self.algebra {
            Algebra::Sl(_) => {
                let mut tr = PadicNumber::zero(self.ctx.clone());
                for i in 0..self.size() {
                    tr = tr.add(&self.entries[i][i])?;
                }
                Ok(tr.is_zero())
            }
            Algebra::Sp(n) => {
                let n = n as usize;
                for i in 0..n {
                    for j in 0..n {
                        // D = -A^t
                        if self.entries[n + i][n + j] != self.entries[j][i].neg() {
                            return Ok(false);
                        }
                        // B and C symmetric
                        if self.entries[i][n + j] != self.entries[j][n + i] {
                            return Ok(false);
                        }
                        if self.entries[n + i][j] != self.entries[n + j][i] {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn mul(&self, other: &LieMatrix) -> Result<LieMatrix, OrbitError> {
        let n = self.size();
        let zero = PadicNumber::zero(self.ctx.clone());
        let mut out = vec![vec![zero; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = PadicNumber::zero(self.ctx.clone());
                for k in 0..n {
                    let t = self.entries[i][k].mul(&other.entries[k][j])?;
                    acc = acc.add(&t)?;
                }
                out[i][j] = acc;
            }
        }
        Ok(LieMatrix {
            algebra: self.algebra,
            ctx: self.ctx.clone(),
            entries: out,
        })
    }

    /// `X^N = 0` with `N` the matrix size, evaluated exactly. An error
    /// means truncation prevented certifying a zero entry.
    pub fn is_nilpotent(&self) -> Result<bool, OrbitError> {
        let n = self.size();
        let mut power = self.clone();
        for _ in 1..n {
            if power.entries.iter().flatten().all(|e| e.is_zero()) {
                return Ok(true);
            }
            power = power.mul(self)?;
        }
        Ok(power.entries.iter().flatten().all(|e| e.is_zero()))
    }
}

impl fmt::Display for LieMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Orbit labels
// ---------------------------------------------------------------------------

/// Canonical coset datum `d = ϖ^j · u_i` for an `sl_n` label; equality is
/// equality of the canonical pair `(j, i)`.
#[derive(Clone, Debug)]
pub struct CosetDatum {
    pub j: u64,
    pub i: usize,
    value: PadicNumber,
}

impl CosetDatum {
    pub fn new(ctx: &FieldContext, m: u64, j: u64, i: usize) -> Result<Self, OrbitError> {
        let units = residue_power_coset_reps(m, ctx);
        if j >= m || i >= units.len() {
            return Err(OrbitError::BadLabel(format!(
                "coset index (j={j}, i={i}) out of range for m={m}"
            )));
        }
        Ok(CosetDatum {
            j,
            i,
            value: units[i].lift().shift(j as i64),
        })
    }

    pub fn value(&self) -> &PadicNumber {
        &self.value
    }
}

impl PartialEq for CosetDatum {
    fn eq(&self, other: &Self) -> bool {
        self.j == other.j && self.i == other.i
    }
}
impl Eq for CosetDatum {}

#[derive(Clone, Debug, PartialEq)]
pub enum OrbitDatum {
    Sl(CosetDatum),
    Sp(QTuple),
}

/// A rational nilpotent orbit label: the index set `E` ranges over these.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitLabel {
    algebra: Algebra,
    lambda: Partition,
    datum: OrbitDatum,
    ctx: FieldContext,
}

impl OrbitLabel {
    pub fn algebra(&self) -> Algebra {
        self.algebra
    }
    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }
    pub fn datum(&self) -> &OrbitDatum {
        &self.datum
    }
    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn sl(ctx: &FieldContext, lambda: Partition, j: u64, i: usize) -> Result<Self, OrbitError> {
        let n = lambda.n() as u32;
        if n < 2 {
            return Err(OrbitError::BadLabel("sl_n needs n >= 2".into()));
        }
        let datum = CosetDatum::new(ctx, lambda.gcd(), j, i)?;
        Ok(OrbitLabel {
            algebra: Algebra::Sl(n),
            lambda,
            datum: OrbitDatum::Sl(datum),
            ctx: ctx.clone(),
        })
    }

    pub fn sp(ctx: &FieldContext, tuple: QTuple) -> Result<Self, OrbitError> {
        let two_n = tuple.lambda().n();
        if two_n % 2 != 0 || two_n == 0 {
            return Err(OrbitError::BadLabel("sp_2n needs an even-size partition".into()));
        }
        Ok(OrbitLabel {
            algebra: Algebra::Sp((two_n / 2) as u32),
            lambda: tuple.lambda().clone(),
            datum: OrbitDatum::Sp(tuple),
            ctx: ctx.clone(),
        })
    }

    pub fn representative(&self) -> Result<LieMatrix, OrbitError> {
        match &self.datum {
            OrbitDatum::Sl(_) => sl_representative(self),
            OrbitDatum::Sp(_) => sp_representative(self),
        }
    }

    pub fn to_data(&self) -> OrbitLabelData {
        OrbitLabelData {
            alg: self.algebra.name().to_string(),
            lambda: self.lambda.clone(),
            datum: match &self.datum {
                OrbitDatum::Sl(d) => OrbitDatumData::Sl { j: d.j, i: d.i },
                OrbitDatum::Sp(t) => OrbitDatumData::Sp(t.to_data()),
            },
        }
    }

    pub fn from_data(ctx: &FieldContext, data: &OrbitLabelData) -> Result<Self, OrbitError> {
        match (data.alg.as_str(), &data.datum) {
            ("sl", OrbitDatumData::Sl { j, i }) => {
                OrbitLabel::sl(ctx, data.lambda.clone(), *j, *i)
            }
            ("sp", OrbitDatumData::Sp(t)) => {
                if t.lambda != data.lambda {
                    return Err(OrbitError::BadLabel(
                        "tuple partition disagrees with label partition".into(),
                    ));
                }
                OrbitLabel::sp(ctx, QTuple::from_data(ctx, t)?)
            }
            (alg, _) => Err(OrbitError::BadLabel(format!(
                "algebra `{alg}` does not match the datum shape"
            ))),
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.datum {
            OrbitDatum::Sl(d) => write!(
                f,
                "{} lambda={} d={}",
                self.algebra, self.lambda, d.value
            ),
            OrbitDatum::Sp(t) => write!(f, "{} lambda={} [{}]", self.algebra, self.lambda, t),
        }
    }
}

/// Serialized label `{alg, lambda, datum}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitLabelData {
    pub alg: String,
    pub lambda: Partition,
    pub datum: OrbitDatumData,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrbitDatumData {
    Sl { j: u64, i: usize },
    Sp(QTupleData),
}

// ---------------------------------------------------------------------------
// Label enumeration
// ---------------------------------------------------------------------------

/// All `sl_n` labels: for each partition `λ` of `n`, one label per element
/// of `F^×/(F^×)^{gcd(λ)}` in the canonical `(j, i)` order.
pub fn sl_labels(n: u32, ctx: &FieldContext) -> Vec<OrbitLabel> {
    assert!(n >= 2, "sl_n needs n >= 2");
    let mut out = Vec::new();
    for lambda in enumerate_partitions(n as u64) {
        let m = lambda.gcd();
        let units = residue_power_coset_reps(m, ctx).len();
        for j in 0..m {
            for i in 0..units {
                out.push(OrbitLabel::sl(ctx, lambda.clone(), j, i).expect("valid datum"));
            }
        }
    }
    out
}

/// All `sp_2n` labels: admissible partitions of `2n`, each with its tuples.
pub fn sp_labels(n: u32, ctx: &FieldContext) -> Vec<OrbitLabel> {
    assert!(n >= 1, "sp_2n needs n >= 1");
    let mut out = Vec::new();
    for lambda in enumerate_partitions(2 * n as u64) {
        if !lambda.is_symplectic_admissible() {
            continue;
        }
        for tuple in enumerate_tuples(&lambda, ctx).expect("admissible partition") {
            out.push(OrbitLabel::sp(ctx, tuple).expect("valid tuple"));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Representatives
// ---------------------------------------------------------------------------

/// Nilpotent Jordan matrix with the given block sizes: ones on the
/// superdiagonal inside each block.
fn jordan_positions(sizes: &[u64]) -> Vec<(usize, usize)> {
    let mut pos = Vec::new();
    let mut offset = 0usize;
    for &s in sizes {
        let s = s as usize;
        for r in 0..s.saturating_sub(1) {
            pos.push((offset + r, offset + r + 1));
        }
        offset += s;
    }
    pos
}

/// `X_d = J_λ D(d)` with `D(d) = diag(1, …, 1, d)`: the Jordan matrix of
/// type `λ` with its last column scaled by `d`.
pub fn sl_representative(label: &OrbitLabel) -> Result<LieMatrix, OrbitError> {
    let (n, datum) = match (&label.algebra, &label.datum) {
        (Algebra::Sl(n), OrbitDatum::Sl(d)) => (*n as usize, d),
        _ => return Err(OrbitError::BadLabel("not an sl label".into())),
    };
    let ctx = &label.ctx;
    let mut m = LieMatrix::zero(label.algebra, ctx.clone());
    let one = PadicNumber::one(ctx.clone());
    for (r, c) in jordan_positions(label.lambda.parts()) {
        m.entries[r][c] = if c == n - 1 {
            datum.value.clone()
        } else {
            one.clone()
        };
    }
    Ok(m)
}

/// One placement instruction for assembling a symplectic representative.
enum SpPlacement {
    /// A `±1` entry of the nilpotent `A`/`D` blocks.
    Entry { row: usize, col: usize, sign: i64 },
    /// The minimal representative of `Q_j`, scaled by `(-1)^N`, dropped
    /// into the `B` block at `(row0, col0)`.
    FormBlock {
        j: u64,
        row0: usize,
        col0: usize,
        mj: usize,
        negate: bool,
    },
}

/// Block layout of the symplectic representative: for each part size `j`
/// with `m_j ≠ 0`, the action on `V(j)` in the symplectic basis, scattered
/// to global matrix positions (`p_i ↦ i`, `q_i ↦ n + i`).
fn sp_layout(lambda: &Partition, n: usize) -> Vec<SpPlacement> {
    let mut out = Vec::new();
    let two_n = lambda.n();
    // s_j = Σ_{j' < j} (1/2) j' m_{j'}
    let mut s = 0usize;
    for j in 1..=two_n {
        let mj = lambda.multiplicity(j) as usize;
        if mj == 0 {
            continue;
        }
        let cj = (j as usize) * mj / 2; // p-vectors spanned by V(j)
        if j % 2 == 1 {
            // A = J_μ with μ = (j, …, j), m_j/2 parts; D = -A^t
            let mu = vec![j; mj / 2];
            for (r, c) in jordan_positions(&mu) {
                out.push(SpPlacement::Entry { row: s + r, col: s + c, sign: 1 });
                out.push(SpPlacement::Entry { row: n + s + c, col: n + s + r, sign: -1 });
            }
        } else {
            let nn = (j / 2) as usize; // j = 2N
            let blocks = vec![nn as u64; mj];
            for (r, c) in jordan_positions(&blocks) {
                out.push(SpPlacement::Entry { row: s + r, col: s + c, sign: 1 });
                out.push(SpPlacement::Entry { row: n + s + c, col: n + s + r, sign: -1 });
            }
            // B = Z ⊕ (-1)^N Q_j, the zero block Z of size m_j(N-1)
            let offset = mj * (nn - 1);
            out.push(SpPlacement::FormBlock {
                j: j as u64,
                row0: s + offset,
                col0: n + s + offset,
                mj,
                negate: nn % 2 == 1,
            });
        }
        s += cj;
    }
    out
}

/// The symplectic representative built block-by-block on the `V(j)`.
pub fn sp_representative(label: &OrbitLabel) -> Result<LieMatrix, OrbitError> {
    let (half, tuple) = match (&label.algebra, &label.datum) {
        (Algebra::Sp(n), OrbitDatum::Sp(t)) => (*n as usize, t),
        _ => return Err(OrbitError::BadLabel("not an sp label".into())),
    };
    let ctx = label.ctx.clone();
    let mut m = LieMatrix::zero(label.algebra, ctx.clone());
    let one = PadicNumber::one(ctx.clone());
    for placement in sp_layout(&label.lambda, half) {
        match placement {
            SpPlacement::Entry { row, col, sign } => {
                m.entries[row][col] = if sign == 1 { one.clone() } else { one.neg() };
            }
            SpPlacement::FormBlock { j, row0, col0, mj, negate } => {
                let class = tuple
                    .class(j)
                    .ok_or_else(|| OrbitError::BadLabel(format!("tuple misses index {j}")))?;
                let q = class.minimal_representative(&ctx);
                for r in 0..mj {
                    for c in 0..mj {
                        if q[r][c].is_zero() {
                            continue;
                        }
                        m.entries[row0 + r][col0 + c] =
                            if negate { q[r][c].neg() } else { q[r][c].clone() };
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Integer specialization of a representative (`d = 1` for `sl`; the
/// maximal-Witt tuple for `sp`): the orbit dimension only depends on `λ`.
pub fn integer_representative(algebra: Algebra, lambda: &Partition) -> Vec<Vec<i64>> {
    let n = algebra.matrix_size();
    let mut m = vec![vec![0i64; n]; n];
    match algebra {
        Algebra::Sl(_) => {
            for (r, c) in jordan_positions(lambda.parts()) {
                m[r][c] = 1;
            }
        }
        Algebra::Sp(half) => {
            for placement in sp_layout(lambda, half as usize) {
                match placement {
                    SpPlacement::Entry { row, col, sign } => m[row][col] = sign,
                    SpPlacement::FormBlock { row0, col0, mj, negate, .. } => {
                        // q0-blocks plus a trailing 1: an integer stand-in
                        // with the same rank pattern as any nondegenerate
                        // class
                        let sign: i64 = if negate { -1 } else { 1 };
                        let witt = mj / 2;
                        for b in 0..witt {
                            m[row0 + 2 * b][col0 + 2 * b + 1] = sign;
                            m[row0 + 2 * b + 1][col0 + 2 * b] = sign;
                        }
                        if mj % 2 == 1 {
                            m[row0 + mj - 1][col0 + mj - 1] = sign;
                        }
                    }
                }
            }
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Orbit dimension via the centralizer
// ---------------------------------------------------------------------------

/// Integer basis matrices of the algebra in its standard representation.
fn algebra_basis(algebra: Algebra) -> Vec<Vec<Vec<i64>>> {
    let size = algebra.matrix_size();
    let mut basis = Vec::with_capacity(algebra.dim());
    let e = |i: usize, j: usize, v: i64, m: &mut Vec<Vec<i64>>| {
        m[i][j] = v;
    };
    match algebra {
        Algebra::Sl(n) => {
            let n = n as usize;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let mut m = vec![vec![0; size]; size];
                    e(i, j, 1, &mut m);
                    basis.push(m);
                }
            }
            for i in 0..n - 1 {
                let mut m = vec![vec![0; size]; size];
                e(i, i, 1, &mut m);
                e(i + 1, i + 1, -1, &mut m);
                basis.push(m);
            }
        }
        Algebra::Sp(n) => {
            let n = n as usize;
            // e_i - e_j root vectors
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let mut m = vec![vec![0; size]; size];
                    e(i, j, 1, &mut m);
                    e(n + j, n + i, -1, &mut m);
                    basis.push(m);
                }
            }
            // e_i + e_j (i < j) and 2e_i
            for i in 0..n {
                for j in i..n {
                    let mut m = vec![vec![0; size]; size];
                    if i == j {
                        e(i, n + i, 1, &mut m);
                    } else {
                        e(i, n + j, 1, &mut m);
                        e(j, n + i, 1, &mut m);
                    }
                    basis.push(m);
                }
            }
            // -(e_i + e_j) and -2e_i
            for i in 0..n {
                for j in i..n {
                    let mut m = vec![vec![0; size]; size];
                    if i == j {
                        e(n + i, i, 1, &mut m);
                    } else {
                        e(n + i, j, 1, &mut m);
                        e(n + j, i, 1, &mut m);
                    }
                    basis.push(m);
                }
            }
            // Cartan
            for i in 0..n {
                let mut m = vec![vec![0; size]; size];
                e(i, i, 1, &mut m);
                e(n + i, n + i, -1, &mut m);
                basis.push(m);
            }
        }
    }
    debug_assert_eq!(basis.len(), algebra.dim());
    basis
}

fn commutator(x: &[Vec<i64>], y: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = x.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0i64;
            for k in 0..n {
                acc += x[i][k] * y[k][j] - y[i][k] * x[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Orbit dimension `dim g - dim centralizer`, computed as the exact rank
/// of `ad(X)` on `g` for the integer representative. The dimension does
/// not depend on the coset datum or the tuple.
pub fn orbit_dimension(algebra: Algebra, lambda: &Partition) -> usize {
    let x = integer_representative(algebra, lambda);
    let basis = algebra_basis(algebra);
    let rows: Vec<Vec<i64>> = basis
        .iter()
        .map(|b| commutator(&x, b).into_iter().flatten().collect())
        .collect();
    rank_i64(&rows)
}

/// Cross-check formula for `sl_n`: `n² - Σ (λᵗ_i)²`.
pub fn sl_dimension_formula(n: u32, lambda: &Partition) -> usize {
    let t = lambda.transpose();
    let sq: u64 = t.parts().iter().map(|&x| x * x).sum();
    (n as u64 * n as u64 - sq) as usize
}

// ---------------------------------------------------------------------------
// Weyl discriminant
// ---------------------------------------------------------------------------

/// `Σ_{α ∈ Φ} ord(α(X))` for a regular semisimple diagonal `X`. For `sp`
/// the input matrix is `diag(x_1, …, x_n, -x_1, …, -x_n)`.
pub fn weyl_discriminant_valuation(x: &LieMatrix) -> Result<i64, OrbitError> {
    let n = x.size();
    for i in 0..n {
        for j in 0..n {
            if i != j && !x.entry(i, j).is_zero() {
                return Err(OrbitError::NotDiagonal);
            }
        }
    }
    let diag: Vec<PadicNumber> = (0..n).map(|i| x.entry(i, i).clone()).collect();
    match x.algebra {
        Algebra::Sl(_) => {
            let mut total = 0i64;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let v = diag[i].sub(&diag[j])?;
                    total += v.ord().ok_or(OrbitError::NotRegular)?;
                }
            }
            Ok(total)
        }
        Algebra::Sp(half) => {
            let half = half as usize;
            // consistency of the embedding
            for i in 0..half {
                if diag[half + i] != diag[i].neg() {
                    return Err(OrbitError::BadLabel(
                        "diagonal not of the form (x, -x)".into(),
                    ));
                }
            }
            let xs = &diag[..half];
            let mut total = 0i64;
            for i in 0..half {
                for j in 0..half {
                    if i == j {
                        continue;
                    }
                    let v = xs[i].sub(&xs[j])?;
                    total += v.ord().ok_or(OrbitError::NotRegular)?;
                }
            }
            for i in 0..half {
                for j in i + 1..half {
                    let s = xs[i].add(&xs[j])?;
                    let o = s.ord().ok_or(OrbitError::NotRegular)?;
                    total += 2 * o; // ±(e_i + e_j)
                }
            }
            for xi in xs {
                let two_x = xi.add(xi)?;
                let o = two_x.ord().ok_or(OrbitError::NotRegular)?;
                total += 2 * o; // ±2e_i
            }
            Ok(total)
        }
    }
}
