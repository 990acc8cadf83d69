//! Classification of nondegenerate quadratic forms over `F`.
//!
//! A form is pinned down by its dimension, discriminant square class and
//! Hasse invariant; equivalently by its Witt index together with one of the
//! fifteen anisotropic kernels (dimension at most four). Class lookup is
//! invariant-driven throughout; the constructive splitting algorithm exists
//! only as a test oracle.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{legendre, FieldContext, PadicError, PadicNumber};
use crate::partitions::Partition;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QFormError {
    #[error("degenerate form")]
    Degenerate,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("zero argument to the Hilbert symbol")]
    ZeroArgument,
    #[error("invariants match no class; internal classification bug")]
    NoMatch,
    #[error("partition is not symplectic-admissible")]
    NotAdmissible,
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("cannot parse entry `{0}`")]
    BadEntry(String),
    #[error(transparent)]
    Arith(#[from] PadicError),
}

// ---------------------------------------------------------------------------
// Square classes
// ---------------------------------------------------------------------------

/// The four classes of `F^×/(F^×)²`, written multiplicatively with the
/// fixed non-square unit `ε` and the uniformizer `ϖ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SquareClass {
    One,
    Eps,
    Pi,
    EpsPi,
}

impl SquareClass {
    pub const ALL: [SquareClass; 4] = [
        SquareClass::One,
        SquareClass::Eps,
        SquareClass::Pi,
        SquareClass::EpsPi,
    ];

    pub fn of(x: &PadicNumber) -> Result<Self, QFormError> {
        let v = x.ord().ok_or(QFormError::ZeroArgument)?;
        let sq = legendre(&x.ac())? == 1;
        Ok(match (v.rem_euclid(2), sq) {
            (0, true) => SquareClass::One,
            (0, false) => SquareClass::Eps,
            (1, true) => SquareClass::Pi,
            (1, false) => SquareClass::EpsPi,
            _ => unreachable!(),
        })
    }

    pub fn mul(self, other: Self) -> Self {
        let bits = |c: Self| -> (u8, u8) {
            match c {
                SquareClass::One => (0, 0),
                SquareClass::Eps => (1, 0),
                SquareClass::Pi => (0, 1),
                SquareClass::EpsPi => (1, 1),
            }
        };
        let (e1, p1) = bits(self);
        let (e2, p2) = bits(other);
        match ((e1 ^ e2), (p1 ^ p2)) {
            (0, 0) => SquareClass::One,
            (1, 0) => SquareClass::Eps,
            (0, 1) => SquareClass::Pi,
            (1, 1) => SquareClass::EpsPi,
            _ => unreachable!(),
        }
    }

    /// Canonical representative: `1`, `ε`, `ϖ` or `εϖ` with `ε` the lift of
    /// the smallest non-residue.
    pub fn representative(self, ctx: &FieldContext) -> PadicNumber {
        let eps = ctx.epsilon().lift();
        match self {
            SquareClass::One => PadicNumber::one(ctx.clone()),
            SquareClass::Eps => eps,
            SquareClass::Pi => PadicNumber::uniformizer(ctx.clone()),
            SquareClass::EpsPi => eps.shift(1),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SquareClass::One => "1",
            SquareClass::Eps => "eps",
            SquareClass::Pi => "pi",
            SquareClass::EpsPi => "eps*pi",
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl TryFrom<String> for SquareClass {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        match s.as_str() {
            "1" => Ok(SquareClass::One),
            "eps" => Ok(SquareClass::Eps),
            "pi" => Ok(SquareClass::Pi),
            "eps*pi" => Ok(SquareClass::EpsPi),
            other => Err(format!("unknown square class `{other}`")),
        }
    }
}

impl From<SquareClass> for String {
    fn from(c: SquareClass) -> String {
        c.symbol().to_string()
    }
}

/// Unit-part parameter `t ∈ {1, ε}` of the ramified table rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnitTag {
    One,
    Eps,
}

impl UnitTag {
    fn class(self) -> SquareClass {
        match self {
            UnitTag::One => SquareClass::One,
            UnitTag::Eps => SquareClass::Eps,
        }
    }
    fn symbol(self) -> &'static str {
        match self {
            UnitTag::One => "1",
            UnitTag::Eps => "eps",
        }
    }
}

/// `α` of the anisotropic table: `ε` when `-1` is a square, else `1`.
pub fn alpha_class(ctx: &FieldContext) -> SquareClass {
    if minus_one_is_square(ctx) {
        SquareClass::Eps
    } else {
        SquareClass::One
    }
}

pub fn minus_one_is_square(ctx: &FieldContext) -> bool {
    ctx.q() % 4 == 1
}

// ---------------------------------------------------------------------------
// Hilbert symbol and invariants of diagonal forms
// ---------------------------------------------------------------------------

/// Tame Hilbert symbol `(a, b)_F` for odd residue characteristic: with
/// `a = ϖ^α u`, `b = ϖ^β v`,
/// `(a,b) = (-1)^{αβ(q-1)/2} · leg(ū)^β · leg(v̄)^α`.
pub fn hilbert_symbol(a: &PadicNumber, b: &PadicNumber) -> Result<i32, QFormError> {
    let va = a.ord().ok_or(QFormError::ZeroArgument)?;
    let vb = b.ord().ok_or(QFormError::ZeroArgument)?;
    let ctx = a.context();
    let la = legendre(&a.ac())?;
    let lb = legendre(&b.ac())?;
    let mut out = 1;
    if va.rem_euclid(2) == 1 && vb.rem_euclid(2) == 1 && (ctx.q() - 1) / 2 % 2 == 1 {
        out = -out;
    }
    if vb.rem_euclid(2) == 1 && la == -1 {
        out = -out;
    }
    if va.rem_euclid(2) == 1 && lb == -1 {
        out = -out;
    }
    Ok(out)
}

/// A nondegenerate diagonal quadratic form `diag(a_1, …, a_r)`.
#[derive(Clone, Debug)]
pub struct DiagonalForm {
    ctx: FieldContext,
    entries: Vec<PadicNumber>,
}

impl DiagonalForm {
    pub fn new(ctx: FieldContext, entries: Vec<PadicNumber>) -> Result<Self, QFormError> {
        if entries.iter().any(|e| e.is_zero()) {
            return Err(QFormError::Degenerate);
        }
        Ok(DiagonalForm { ctx, entries })
    }

    /// Parse a comma-separated entry list like `1,eps,pi,eps*pi` or `-3*pi`.
    pub fn parse(ctx: &FieldContext, text: &str) -> Result<Self, QFormError> {
        let mut entries = Vec::new();
        for raw in text.split(',') {
            let raw = raw.trim();
            if raw.is_empty() {
                return Err(QFormError::BadEntry(raw.to_string()));
            }
            let (negate, body) = match raw.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, raw),
            };
            let mut value = PadicNumber::one(ctx.clone());
            for factor in body.split('*') {
                let factor = factor.trim();
                let f = match factor {
                    "eps" => ctx.epsilon().lift(),
                    "pi" | "p" => PadicNumber::uniformizer(ctx.clone()),
                    digits => {
                        let n: i64 = digits
                            .parse()
                            .map_err(|_| QFormError::BadEntry(raw.to_string()))?;
                        PadicNumber::from_integer(ctx.clone(), n)
                    }
                };
                value = value.mul(&f)?;
            }
            if negate {
                value = value.neg();
            }
            entries.push(value);
        }
        DiagonalForm::new(ctx.clone(), entries)
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn entries(&self) -> &[PadicNumber] {
        &self.entries
    }

    pub fn dim(&self) -> u32 {
        self.entries.len() as u32
    }

    /// Discriminant as a square class: the product of the entries.
    pub fn discriminant(&self) -> Result<SquareClass, QFormError> {
        let mut d = SquareClass::One;
        for e in &self.entries {
            d = d.mul(SquareClass::of(e)?);
        }
        Ok(d)
    }

    /// Hasse invariant `Π_{i<j} (a_i, a_j)_F`; `+1` in dimension ≤ 1.
    pub fn hasse(&self) -> Result<i32, QFormError> {
        let mut h = 1;
        for i in 0..self.entries.len() {
            for j in i + 1..self.entries.len() {
                h *= hilbert_symbol(&self.entries[i], &self.entries[j])?;
            }
        }
        Ok(h)
    }
}

// ---------------------------------------------------------------------------
// Anisotropic kernels: the fifteen table rows plus the zero form
// ---------------------------------------------------------------------------

/// Tag of an anisotropic isometry class. The diagonal representatives follow
/// the classification table, with `α = ε` when `-1` is a square and `α = 1`
/// otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnisoTag {
    Zero,
    /// `diag(a)` for `a` a square-class representative.
    Dim1(SquareClass),
    /// `diag(1, α)`.
    Dim2UnitPlus,
    /// `diag(ϖ, αϖ)`.
    Dim2UnitMinus,
    /// `diag(t, t'ϖ)`, `t, t' ∈ {1, ε}`.
    Dim2Ramified(UnitTag, UnitTag),
    /// `diag(αt, ϖ, αϖ)`, `t ∈ {1, ε}`.
    Dim3UnitDisc(UnitTag),
    /// `diag(1, α, tϖ)`, `t ∈ {1, ε}`.
    Dim3Ramified(UnitTag),
    /// `diag(1, -ε, -ϖ, εϖ)`.
    Dim4,
}

impl AnisoTag {
    pub fn dim(self) -> u32 {
        match self {
            AnisoTag::Zero => 0,
            AnisoTag::Dim1(_) => 1,
            AnisoTag::Dim2UnitPlus | AnisoTag::Dim2UnitMinus | AnisoTag::Dim2Ramified(..) => 2,
            AnisoTag::Dim3UnitDisc(_) | AnisoTag::Dim3Ramified(_) => 3,
            AnisoTag::Dim4 => 4,
        }
    }

    /// Table order within each dimension.
    pub fn of_dim(dim: u32) -> Vec<AnisoTag> {
        use AnisoTag::*;
        match dim {
            0 => vec![Zero],
            1 => SquareClass::ALL.iter().map(|&c| Dim1(c)).collect(),
            2 => vec![
                Dim2UnitPlus,
                Dim2UnitMinus,
                Dim2Ramified(UnitTag::One, UnitTag::One),
                Dim2Ramified(UnitTag::One, UnitTag::Eps),
                Dim2Ramified(UnitTag::Eps, UnitTag::One),
                Dim2Ramified(UnitTag::Eps, UnitTag::Eps),
            ],
            3 => vec![
                Dim3UnitDisc(UnitTag::One),
                Dim3UnitDisc(UnitTag::Eps),
                Dim3Ramified(UnitTag::One),
                Dim3Ramified(UnitTag::Eps),
            ],
            4 => vec![Dim4],
            _ => vec![],
        }
    }

    pub fn all() -> Vec<AnisoTag> {
        (0..=4).flat_map(AnisoTag::of_dim).collect()
    }

    /// Diagonal entries of the table representative over the given field.
    pub fn diagonal_entries(self, ctx: &FieldContext) -> Vec<PadicNumber> {
        let one = PadicNumber::one(ctx.clone());
        let eps = ctx.epsilon().lift();
        let pi = PadicNumber::uniformizer(ctx.clone());
        let alpha = alpha_class(ctx).representative(ctx);
        let t = |tag: UnitTag| tag.class().representative(ctx);
        match self {
            AnisoTag::Zero => vec![],
            AnisoTag::Dim1(c) => vec![c.representative(ctx)],
            AnisoTag::Dim2UnitPlus => vec![one, alpha],
            AnisoTag::Dim2UnitMinus => {
                let api = alpha.shift(1);
                vec![pi, api]
            }
            AnisoTag::Dim2Ramified(t1, t2) => {
                let second = t(t2).shift(1);
                vec![t(t1), second]
            }
            AnisoTag::Dim3UnitDisc(tt) => {
                let at = alpha.mul(&t(tt)).expect("same context");
                let api = alpha.shift(1);
                vec![at, pi, api]
            }
            AnisoTag::Dim3Ramified(tt) => {
                let tpi = t(tt).shift(1);
                vec![one, alpha, tpi]
            }
            AnisoTag::Dim4 => {
                let epi = eps.shift(1);
                vec![one, eps.neg(), pi.neg(), epi]
            }
        }
    }

    pub fn symbol(self) -> String {
        match self {
            AnisoTag::Zero => "[]".to_string(),
            AnisoTag::Dim1(c) => format!("[{}]", c.symbol()),
            AnisoTag::Dim2UnitPlus => "[1,alpha]".to_string(),
            AnisoTag::Dim2UnitMinus => "[pi,alpha*pi]".to_string(),
            AnisoTag::Dim2Ramified(t1, t2) => {
                format!("[{},{}*pi]", t1.symbol(), t2.symbol())
            }
            AnisoTag::Dim3UnitDisc(t) => format!("[alpha*{},pi,alpha*pi]", t.symbol()),
            AnisoTag::Dim3Ramified(t) => format!("[1,alpha,{}*pi]", t.symbol()),
            AnisoTag::Dim4 => "[1,-eps,-pi,eps*pi]".to_string(),
        }
    }

    pub fn from_symbol(s: &str) -> Option<AnisoTag> {
        AnisoTag::all().into_iter().find(|t| t.symbol() == s)
    }
}

impl fmt::Display for AnisoTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol())
    }
}

// ---------------------------------------------------------------------------
// Isometry classes
// ---------------------------------------------------------------------------

/// Isometry class of a nondegenerate quadratic form: Witt index plus
/// anisotropic kernel, with the classifying invariants cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFormClass {
    dim: u32,
    disc: SquareClass,
    hasse: i32,
    witt_index: u32,
    aniso: AnisoTag,
}

impl QFormClass {
    /// Build the class `q₀^m ⊕ aniso` over the given field, computing its
    /// discriminant and Hasse invariant from the diagonalized
    /// representative.
    pub fn from_parts(
        witt_index: u32,
        aniso: AnisoTag,
        ctx: &FieldContext,
    ) -> Result<Self, QFormError> {
        let mut entries = Vec::new();
        let one = PadicNumber::one(ctx.clone());
        for _ in 0..witt_index {
            // the hyperbolic plane diagonalizes as diag(1, -1)
            entries.push(one.clone());
            entries.push(one.neg());
        }
        entries.extend(aniso.diagonal_entries(ctx));
        let form = DiagonalForm::new(ctx.clone(), entries);
        let (disc, hasse) = match form {
            Ok(f) => (f.discriminant()?, f.hasse()?),
            Err(_) => (SquareClass::One, 1), // dimension zero
        };
        Ok(QFormClass {
            dim: 2 * witt_index + aniso.dim(),
            disc,
            hasse,
            witt_index,
            aniso,
        })
    }

    pub fn zero(ctx: &FieldContext) -> Self {
        Self::from_parts(0, AnisoTag::Zero, ctx).expect("zero class")
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }
    pub fn disc(&self) -> SquareClass {
        self.disc
    }
    pub fn hasse(&self) -> i32 {
        self.hasse
    }
    pub fn witt_index(&self) -> u32 {
        self.witt_index
    }
    pub fn aniso(&self) -> AnisoTag {
        self.aniso
    }

    /// Block matrix `q₀^m ⊕ diag(table representative)`.
    pub fn minimal_representative(&self, ctx: &FieldContext) -> Vec<Vec<PadicNumber>> {
        let n = self.dim as usize;
        let zero = PadicNumber::zero(ctx.clone());
        let one = PadicNumber::one(ctx.clone());
        let mut m = vec![vec![zero; n]; n];
        for b in 0..self.witt_index as usize {
            m[2 * b][2 * b + 1] = one.clone();
            m[2 * b + 1][2 * b] = one.clone();
        }
        let offset = 2 * self.witt_index as usize;
        for (i, e) in self.aniso.diagonal_entries(ctx).into_iter().enumerate() {
            m[offset + i][offset + i] = e;
        }
        m
    }

    pub fn to_data(&self) -> QFormClassData {
        QFormClassData {
            dim: self.dim,
            disc: self.disc,
            hasse: self.hasse,
            witt: self.witt_index,
            aniso: self.aniso.symbol(),
        }
    }

    pub fn from_data(ctx: &FieldContext, data: &QFormClassData) -> Result<Self, QFormError> {
        let aniso = AnisoTag::from_symbol(&data.aniso)
            .ok_or_else(|| QFormError::InvalidTuple(format!("unknown kernel `{}`", data.aniso)))?;
        let class = QFormClass::from_parts(data.witt, aniso, ctx)?;
        if class.dim != data.dim || class.disc != data.disc || class.hasse != data.hasse {
            return Err(QFormError::InvalidTuple(
                "stored invariants disagree with (witt, aniso)".into(),
            ));
        }
        Ok(class)
    }
}

impl fmt::Display for QFormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim {} disc {} hasse {:+} witt {} aniso {}",
            self.dim, self.disc, self.hasse, self.witt_index, self.aniso
        )
    }
}

/// Serialized form of [`QFormClass`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QFormClassData {
    pub dim: u32,
    pub disc: SquareClass,
    pub hasse: i32,
    pub witt: u32,
    pub aniso: String,
}

/// All isometry classes of nondegenerate forms of the given dimension,
/// largest Witt index first, anisotropic kernels in table order.
pub fn enumerate_classes(dim: u32, ctx: &FieldContext) -> Vec<QFormClass> {
    let mut out = Vec::new();
    for m in (0..=dim / 2).rev() {
        let adim = dim - 2 * m;
        for tag in AnisoTag::of_dim(adim) {
            out.push(QFormClass::from_parts(m, tag, ctx).expect("table class"));
        }
    }
    out
}

/// Invariant-driven Witt decomposition of a diagonal form: compute
/// `(dim, disc, Hasse)` and look the class up. A failed lookup is an
/// internal bug, surfaced as [`QFormError::NoMatch`].
pub fn witt_decompose(f: &DiagonalForm) -> Result<QFormClass, QFormError> {
    let dim = f.dim();
    let disc = f.discriminant()?;
    let hasse = f.hasse()?;
    enumerate_classes(dim, f.context())
        .into_iter()
        .find(|c| c.disc == disc && c.hasse == hasse)
        .ok_or(QFormError::NoMatch)
}

/// Classify an arbitrary symmetric Gram matrix by congruence
/// diagonalization followed by [`witt_decompose`].
pub fn classify_gram(
    ctx: &FieldContext,
    gram: &[Vec<PadicNumber>],
) -> Result<QFormClass, QFormError> {
    let n = gram.len();
    for row in gram {
        if row.len() != n {
            return Err(QFormError::NotSymmetric);
        }
    }
    for i in 0..n {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(QFormError::NotSymmetric);
            }
        }
    }
    if n == 0 {
        return Ok(QFormClass::zero(ctx));
    }
    let mut g = gram.to_vec();
    let zero = PadicNumber::zero(ctx.clone());
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        if g[i][i].is_zero() {
            // bring a nonzero onto the diagonal
            if let Some(j) = (i + 1..n).find(|&j| !g[j][j].is_zero()) {
                g.swap(i, j);
                for row in g.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !g[i][j].is_zero()) {
                // basis change e_i += e_j turns the diagonal entry into
                // 2·g[i][j] (char ≠ 2)
                for c in 0..n {
                    let v = g[i][c].add(&g[j][c])?;
                    g[i][c] = v;
                }
                for r in 0..n {
                    let v = g[r][i].add(&g[r][j])?;
                    g[r][i] = v;
                }
            } else {
                return Err(QFormError::Degenerate);
            }
        }
        // Fraction-free clearing: replace (row_j, col_j) by
        // pivot·(row_j, col_j) - g[j][i]·(row_i, col_i). This is congruence
        // by an invertible matrix, so the isometry class is unchanged (the
        // new diagonal differs from the Schur complement by the square
        // pivot²), and exact entries stay exact — no division ever happens.
        let pivot = g[i][i].clone();
        for j in i + 1..n {
            let c = g[j][i].clone();
            if c.is_zero() {
                continue;
            }
            // row_j <- pivot·row_j - c·row_i; position (j, i) becomes an
            // exact zero by construction, so it is written directly
            for col in 0..n {
                if col == i {
                    continue;
                }
                let a = pivot.mul(&g[j][col])?;
                let b = c.mul(&g[i][col])?;
                g[j][col] = a.sub(&b)?;
            }
            g[j][i] = zero.clone();
            // col_j <- pivot·col_j - c·col_i, using the updated column
            for row in 0..n {
                if row == i {
                    continue;
                }
                let a = pivot.mul(&g[row][j])?;
                let b = c.mul(&g[row][i])?;
                g[row][j] = a.sub(&b)?;
            }
            g[i][j] = zero.clone();
        }
        diag.push(pivot);
    }
    witt_decompose(&DiagonalForm::new(ctx.clone(), diag)?)
}

// ---------------------------------------------------------------------------
// Tuples of classes attached to a symplectic partition
// ---------------------------------------------------------------------------

/// For each even part size `i` of `λ`, an isometry class of dimension
/// `m_i(λ)` (dimension-zero classes are allowed and stored).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTuple {
    lambda: Partition,
    classes: BTreeMap<u64, QFormClass>,
}

impl QTuple {
    pub fn new(
        lambda: Partition,
        classes: BTreeMap<u64, QFormClass>,
    ) -> Result<Self, QFormError> {
        if !lambda.is_symplectic_admissible() {
            return Err(QFormError::NotAdmissible);
        }
        let n2 = lambda.n();
        for i in (2..=n2).step_by(2) {
            let expect = lambda.multiplicity(i) as u32;
            let got = classes.get(&i).map(|c| c.dim());
            if got != Some(expect) {
                return Err(QFormError::InvalidTuple(format!(
                    "class at index {i} must have dimension {expect}, found {got:?}"
                )));
            }
        }
        if classes.keys().any(|&i| i % 2 != 0 || i == 0 || i > n2) {
            return Err(QFormError::InvalidTuple(
                "classes must be indexed by even part sizes".into(),
            ));
        }
        Ok(QTuple { lambda, classes })
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn class(&self, i: u64) -> Option<&QFormClass> {
        self.classes.get(&i)
    }

    pub fn classes(&self) -> &BTreeMap<u64, QFormClass> {
        &self.classes
    }

    pub fn to_data(&self) -> QTupleData {
        QTupleData {
            lambda: self.lambda.clone(),
            classes: self
                .classes
                .iter()
                .map(|(&i, c)| (i.to_string(), c.to_data()))
                .collect(),
        }
    }

    pub fn from_data(ctx: &FieldContext, data: &QTupleData) -> Result<Self, QFormError> {
        let classes = data
            .classes
            .iter()
            .map(|(i, d)| {
                let idx: u64 = i
                    .parse()
                    .map_err(|_| QFormError::InvalidTuple(format!("bad index `{i}`")))?;
                QFormClass::from_data(ctx, d).map(|c| (idx, c))
            })
            .collect::<Result<BTreeMap<_, _>, _>>()?;
        QTuple::new(data.lambda.clone(), classes)
    }
}

impl fmt::Display for QTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .classes
            .iter()
            .map(|(i, c)| format!("Q{}: witt {} {}", i, c.witt_index(), c.aniso()))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QTupleData {
    pub lambda: Partition,
    /// Keyed by the even part size, as a decimal string for JSON maps.
    pub classes: BTreeMap<String, QFormClassData>,
}

/// All tuples corresponding to `λ`: the Cartesian product over even `i` of
/// the classes of dimension `m_i(λ)`, earlier indices varying slowest.
pub fn enumerate_tuples(lambda: &Partition, ctx: &FieldContext) -> Result<Vec<QTuple>, QFormError> {
    if !lambda.is_symplectic_admissible() {
        return Err(QFormError::NotAdmissible);
    }
    let n2 = lambda.n();
    let indices: Vec<u64> = (2..=n2).step_by(2).collect();
    let per_index: Vec<Vec<QFormClass>> = indices
        .iter()
        .map(|&i| enumerate_classes(lambda.multiplicity(i) as u32, ctx))
        .collect();
    let mut out = Vec::new();
    let mut counters = vec![0usize; indices.len()];
    loop {
        let classes: BTreeMap<u64, QFormClass> = indices
            .iter()
            .zip(counters.iter())
            .map(|(&i, &c)| (i, per_index[indices.iter().position(|&x| x == i).unwrap()][c].clone()))
            .collect();
        out.push(QTuple::new(lambda.clone(), classes)?);
        // odometer, last index fastest
        let mut pos = indices.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            counters[pos] += 1;
            if counters[pos] < per_index[pos].len() {
                break;
            }
            counters[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> FieldContext {
        FieldContext::with_precision(p, 1, 8).unwrap()
    }

    fn pi(c: &FieldContext) -> PadicNumber {
        PadicNumber::uniformizer(c.clone())
    }

    fn one(c: &FieldContext) -> PadicNumber {
        PadicNumber::one(c.clone())
    }

    #[test]
    fn square_class_of() {
        let c = ctx(7);
        assert_eq!(SquareClass::of(&one(&c)).unwrap(), SquareClass::One);
        assert_eq!(SquareClass::of(&pi(&c)).unwrap(), SquareClass::Pi);
        let eps = c.epsilon().lift();
        assert_eq!(SquareClass::of(&eps).unwrap(), SquareClass::Eps);
        assert_eq!(SquareClass::of(&eps.shift(3)).unwrap(), SquareClass::EpsPi);
        // squares land in One
        let x = PadicNumber::from_integer(c.clone(), 2 * 2 * 49);
        assert_eq!(SquareClass::of(&x).unwrap(), SquareClass::One);
    }

    #[test]
    fn hilbert_one_is_trivial() {
        for p in [3, 5, 7] {
            let c = ctx(p);
            for sc in SquareClass::ALL {
                let b = sc.representative(&c);
                assert_eq!(hilbert_symbol(&one(&c), &b).unwrap(), 1);
            }
        }
    }

    #[test]
    fn hilbert_eps_pi() {
        for p in [3, 5, 7, 11, 13] {
            let c = ctx(p);
            let eps = c.epsilon().lift();
            assert_eq!(hilbert_symbol(&eps, &pi(&c)).unwrap(), -1, "p = {p}");
        }
    }

    #[test]
    fn hilbert_pi_pi_depends_on_q_mod_4() {
        let c5 = ctx(5);
        assert_eq!(hilbert_symbol(&pi(&c5), &pi(&c5)).unwrap(), 1);
        let c7 = ctx(7);
        assert_eq!(hilbert_symbol(&pi(&c7), &pi(&c7)).unwrap(), -1);
    }

    #[test]
    fn hilbert_symmetry_and_bimultiplicativity() {
        for p in [3, 5, 7] {
            let c = ctx(p);
            let reps: Vec<PadicNumber> =
                SquareClass::ALL.iter().map(|s| s.representative(&c)).collect();
            for a in &reps {
                for b in &reps {
                    let ab = hilbert_symbol(a, b).unwrap();
                    assert_eq!(ab, hilbert_symbol(b, a).unwrap());
                    for cc in &reps {
                        let bc = b.mul(cc).unwrap();
                        assert_eq!(
                            hilbert_symbol(a, &bc).unwrap(),
                            hilbert_symbol(a, b).unwrap() * hilbert_symbol(a, cc).unwrap()
                        );
                    }
                }
                // (a, -a) = 1
                assert_eq!(hilbert_symbol(a, &a.neg()).unwrap(), 1);
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        let c = ctx(5);
        let alpha = alpha_class(&c).representative(&c);
        let f = DiagonalForm::new(c.clone(), vec![one(&c), alpha]).unwrap();
        assert_eq!(f.discriminant().unwrap(), alpha_class(&c));
        let f = DiagonalForm::new(c.clone(), vec![pi(&c)]).unwrap();
        assert_eq!(f.discriminant().unwrap(), SquareClass::Pi);
        let f = DiagonalForm::new(c.clone(), vec![pi(&c), pi(&c)]).unwrap();
        assert_eq!(f.discriminant().unwrap(), SquareClass::One);
    }

    #[test]
    fn hasse_examples() {
        for p in [3, 5, 7, 13] {
            let c = ctx(p);
            let alpha = alpha_class(&c).representative(&c);
            // diag(pi, alpha*pi) -> -1
            let f = DiagonalForm::new(c.clone(), vec![pi(&c), alpha.shift(1)]).unwrap();
            assert_eq!(f.hasse().unwrap(), -1, "p = {p}");
            // any dim-1 form -> +1
            for sc in SquareClass::ALL {
                let f = DiagonalForm::new(c.clone(), vec![sc.representative(&c)]).unwrap();
                assert_eq!(f.hasse().unwrap(), 1);
            }
            // the dim-4 anisotropic representative -> -1
            let f = DiagonalForm::new(c.clone(), AnisoTag::Dim4.diagonal_entries(&c)).unwrap();
            assert_eq!(f.hasse().unwrap(), -1, "p = {p}");
            assert_eq!(f.discriminant().unwrap(), SquareClass::One);
        }
    }

    #[test]
    fn witt_decompose_examples() {
        let c = ctx(7);
        // hyperbolic plane as diag(1, -1)
        let f = DiagonalForm::new(c.clone(), vec![one(&c), one(&c).neg()]).unwrap();
        let cls = witt_decompose(&f).unwrap();
        assert_eq!(cls.witt_index(), 1);
        assert_eq!(cls.aniso(), AnisoTag::Zero);
        // the four-dimensional anisotropic class
        let f = DiagonalForm::new(c.clone(), AnisoTag::Dim4.diagonal_entries(&c)).unwrap();
        let cls = witt_decompose(&f).unwrap();
        assert_eq!(cls.witt_index(), 0);
        assert_eq!(cls.aniso(), AnisoTag::Dim4);
        // diag(1, 1, -1, -1) splits twice
        let f = DiagonalForm::new(
            c.clone(),
            vec![one(&c), one(&c), one(&c).neg(), one(&c).neg()],
        )
        .unwrap();
        let cls = witt_decompose(&f).unwrap();
        assert_eq!(cls.witt_index(), 2);
        assert_eq!(cls.aniso(), AnisoTag::Zero);
    }

    #[test]
    fn class_counts() {
        for p in [3, 5, 7, 13] {
            let c = ctx(p);
            assert_eq!(enumerate_classes(0, &c).len(), 1);
            assert_eq!(enumerate_classes(1, &c).len(), 4);
            assert_eq!(enumerate_classes(2, &c).len(), 7);
            assert_eq!(enumerate_classes(3, &c).len(), 8);
            assert_eq!(enumerate_classes(4, &c).len(), 8);
            // anisotropic rows per dimension: 4 / 6 / 4 / 1
            for (d, count) in [(1u32, 4), (2, 6), (3, 4), (4, 1)] {
                assert_eq!(AnisoTag::of_dim(d).len(), count);
            }
        }
    }

    #[test]
    fn table_classes_distinct_within_dimension() {
        for p in [3, 5, 7, 13] {
            let c = ctx(p);
            for dim in 1..=4u32 {
                let classes: Vec<QFormClass> = AnisoTag::of_dim(dim)
                    .into_iter()
                    .map(|t| QFormClass::from_parts(0, t, &c).unwrap())
                    .collect();
                for i in 0..classes.len() {
                    for j in i + 1..classes.len() {
                        assert!(
                            classes[i].disc() != classes[j].disc()
                                || classes[i].hasse() != classes[j].hasse(),
                            "p={p} dim={dim}: {} vs {}",
                            classes[i],
                            classes[j]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn full_class_list_distinct_invariants() {
        for p in [3, 5, 7, 13] {
            let c = ctx(p);
            for dim in 0..=6u32 {
                let classes = enumerate_classes(dim, &c);
                for i in 0..classes.len() {
                    for j in i + 1..classes.len() {
                        assert!(
                            classes[i].disc() != classes[j].disc()
                                || classes[i].hasse() != classes[j].hasse()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_representative_examples() {
        let c = ctx(7);
        let zero = QFormClass::zero(&c);
        assert!(zero.minimal_representative(&c).is_empty());

        let dim1_pi = QFormClass::from_parts(0, AnisoTag::Dim1(SquareClass::Pi), &c).unwrap();
        let m = dim1_pi.minimal_representative(&c);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0][0], pi(&c));

        let hyp = QFormClass::from_parts(1, AnisoTag::Zero, &c).unwrap();
        let m = hyp.minimal_representative(&c);
        assert!(m[0][0].is_zero() && m[1][1].is_zero());
        assert_eq!(m[0][1], one(&c));
        assert_eq!(m[1][0], one(&c));
    }

    #[test]
    fn classify_gram_round_trip_small() {
        for p in [5, 7] {
            let c = ctx(p);
            for dim in 0..=4u32 {
                for cls in enumerate_classes(dim, &c) {
                    let m = cls.minimal_representative(&c);
                    let back = classify_gram(&c, &m).unwrap();
                    assert_eq!(back, cls, "p={p} class {cls}");
                }
            }
        }
    }

    #[test]
    fn gram_validation() {
        let c = ctx(5);
        let bad = vec![
            vec![one(&c), one(&c)],
            vec![one(&c).neg(), one(&c)],
        ];
        assert_eq!(classify_gram(&c, &bad), Err(QFormError::NotSymmetric));
        let degenerate = vec![
            vec![one(&c), PadicNumber::zero(c.clone())],
            vec![PadicNumber::zero(c.clone()), PadicNumber::zero(c.clone())],
        ];
        assert_eq!(classify_gram(&c, &degenerate), Err(QFormError::Degenerate));
    }

    #[test]
    fn tuple_counts() {
        let c = ctx(7);
        let lam4 = Partition::new(vec![4]).unwrap();
        assert_eq!(enumerate_tuples(&lam4, &c).unwrap().len(), 4);
        let lam1111 = Partition::new(vec![1, 1, 1, 1]).unwrap();
        assert_eq!(enumerate_tuples(&lam1111, &c).unwrap().len(), 1);
        let lam22 = Partition::new(vec![2, 2]).unwrap();
        assert_eq!(enumerate_tuples(&lam22, &c).unwrap().len(), 7);
        let lam31 = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(enumerate_tuples(&lam31, &c), Err(QFormError::NotAdmissible));
    }

    #[test]
    fn parse_entry_lists() {
        let c = ctx(7);
        let f = DiagonalForm::parse(&c, "1,eps,pi,eps*pi").unwrap();
        assert_eq!(f.dim(), 4);
        assert_eq!(f.entries()[1], c.epsilon().lift());
        assert_eq!(f.entries()[3].ord(), Some(1));
        let f = DiagonalForm::parse(&c, "-3*pi, 2").unwrap();
        assert_eq!(f.entries()[0].ord(), Some(1));
        assert!(DiagonalForm::parse(&c, "1,,2").is_err());
        assert!(DiagonalForm::parse(&c, "xyz").is_err());
    }

    #[test]
    fn class_data_round_trip() {
        let c = ctx(5);
        for dim in 0..=4 {
            for cls in enumerate_classes(dim, &c) {
                let data = cls.to_data();
                let json = serde_json::to_string(&data).unwrap();
                let back: QFormClassData = serde_json::from_str(&json).unwrap();
                assert_eq!(QFormClass::from_data(&c, &back).unwrap(), cls);
            }
        }
    }
}
