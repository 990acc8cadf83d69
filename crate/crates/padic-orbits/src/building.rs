//! The standard affine apartment for types `A_{n-1}` and `C_n`, with its
//! hyperplane structure, facet data and depth-zero Moy-Prasad lattices.
//!
//! Apartment points are exact rational coordinate vectors (sum-zero for
//! type `A`), so every floor and ceiling of a root value is exact. A
//! lattice is the map `coordinate ↦ valuation lower bound`: each root
//! coordinate is bounded by `-⌊α(x)⌋` (and `1 - ⌈α(x)⌉` for the
//! pro-unipotent sublattice), Cartan coordinates by `0` (resp. `1`).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{rank_i64, rat, Rat};
use crate::orbits::{Algebra, LieMatrix, OrbitError};
use crate::padic::{FieldContext, PadicError, ResidueElement};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BuildingError {
    #[error("point has wrong coordinate length for {0}")]
    BadPoint(String),
    #[error("type A coordinates must sum to zero")]
    NotSumZero,
    #[error("matrix does not lie in the lattice: coordinate {coord} has valuation {val:?}, bound {bound}")]
    NotInLattice {
        coord: String,
        val: Option<i64>,
        bound: i64,
    },
    #[error("matrix does not belong to the algebra of the lattice")]
    NotInAlgebra,
    #[error("algebra mismatch between matrix and lattice")]
    AlgebraMismatch,
    #[error(transparent)]
    Arith(#[from] PadicError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

// ---------------------------------------------------------------------------
// Roots and the root datum
// ---------------------------------------------------------------------------

/// An integral linear functional on the apartment coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    coeffs: Vec<i64>,
}

impl Root {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn eval(&self, x: &ApartmentPoint) -> Rat {
        self.coeffs
            .iter()
            .zip(x.coords.iter())
            .map(|(&c, v)| rat(c) * v)
            .sum()
    }

    fn eval_vec(&self, v: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .zip(v.iter())
            .map(|(&c, x)| rat(c) * x)
            .sum()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.abs();
            if c > 0 && !first {
                write!(f, "+")?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "e{}", i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Matrix positions (row, col, sign) spanned by one root coordinate in the
/// standard representation; the first position carries sign `+1` and is
/// where the coordinate of a matrix is read off.
pub type RootPositions = Vec<(usize, usize, i64)>;

/// Roots, simple roots, coroots and the coordinate map for one algebra.
#[derive(Clone, Debug)]
pub struct RootDatum {
    algebra: Algebra,
    roots: Vec<Root>,
    positions: Vec<RootPositions>,
    coroots: Vec<Vec<i64>>,
    simple: Vec<usize>,
    highest: usize,
}

impl RootDatum {
    pub fn new(algebra: Algebra) -> Self {
        let mut roots = Vec::new();
        let mut positions = Vec::new();
        let mut coroots = Vec::new();
        match algebra {
            Algebra::Sl(n) => {
                let n = n as usize;
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let mut c = vec![0i64; n];
                        c[i] = 1;
                        c[j] = -1;
                        coroots.push(c.clone());
                        roots.push(Root { coeffs: c });
                        positions.push(vec![(i, j, 1)]);
                    }
                }
            }
            Algebra::Sp(half) => {
                let n = half as usize;
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let mut c = vec![0i64; n];
                        c[i] = 1;
                        c[j] = -1;
                        coroots.push(c.clone());
                        roots.push(Root { coeffs: c });
                        positions.push(vec![(i, j, 1), (n + j, n + i, -1)]);
                    }
                }
                for i in 0..n {
                    for j in i + 1..n {
                        let mut c = vec![0i64; n];
                        c[i] = 1;
                        c[j] = 1;
                        let neg: Vec<i64> = c.iter().map(|&v| -v).collect();
                        coroots.push(c.clone());
                        roots.push(Root { coeffs: c });
                        positions.push(vec![(i, n + j, 1), (j, n + i, 1)]);
                        coroots.push(neg.clone());
                        roots.push(Root { coeffs: neg });
                        positions.push(vec![(n + i, j, 1), (n + j, i, 1)]);
                    }
                }
                for i in 0..n {
                    let mut c = vec![0i64; n];
                    c[i] = 2;
                    let mut co = vec![0i64; n];
                    co[i] = 1;
                    coroots.push(co.clone());
                    roots.push(Root { coeffs: c.clone() });
                    positions.push(vec![(i, n + i, 1)]);
                    let neg: Vec<i64> = c.iter().map(|&v| -v).collect();
                    let nco: Vec<i64> = co.iter().map(|&v| -v).collect();
                    coroots.push(nco);
                    roots.push(Root { coeffs: neg });
                    positions.push(vec![(n + i, i, 1)]);
                }
            }
        }
        let find = |coeffs: &[i64], roots: &[Root]| {
            roots
                .iter()
                .position(|r| r.coeffs == coeffs)
                .expect("root present")
        };
        let (simple, highest) = match algebra {
            Algebra::Sl(n) => {
                let n = n as usize;
                let mut simple = Vec::new();
                for i in 0..n - 1 {
                    let mut c = vec![0i64; n];
                    c[i] = 1;
                    c[i + 1] = -1;
                    simple.push(find(&c, &roots));
                }
                let mut theta = vec![0i64; n];
                theta[0] = 1;
                theta[n - 1] = -1;
                (simple, find(&theta, &roots))
            }
            Algebra::Sp(half) => {
                let n = half as usize;
                let mut simple = Vec::new();
                for i in 0..n - 1 {
                    let mut c = vec![0i64; n];
                    c[i] = 1;
                    c[i + 1] = -1;
                    simple.push(find(&c, &roots));
                }
                let mut last = vec![0i64; n];
                last[n - 1] = 2;
                simple.push(find(&last, &roots));
                let mut theta = vec![0i64; n];
                theta[0] = 2;
                (simple, find(&theta, &roots))
            }
        };
        RootDatum {
            algebra,
            roots,
            positions,
            coroots,
            simple,
            highest,
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, idx: usize) -> &Root {
        &self.roots[idx]
    }

    pub fn positions(&self, idx: usize) -> &RootPositions {
        &self.positions[idx]
    }

    pub fn coroot(&self, idx: usize) -> &[i64] {
        &self.coroots[idx]
    }

    pub fn simple_roots(&self) -> &[usize] {
        self.simple.as_slice()
    }

    pub fn highest_root(&self) -> usize {
        self.highest
    }

    pub fn rank(&self) -> usize {
        self.algebra.rank()
    }

    /// Index of the root `α = e_i - e_j` etc. by coefficient vector.
    pub fn find_root(&self, coeffs: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r.coeffs == coeffs)
    }

    /// Coordinate dimension of the apartment's ambient vector space.
    pub fn coord_len(&self) -> usize {
        match self.algebra {
            Algebra::Sl(n) => n as usize,
            Algebra::Sp(n) => n as usize,
        }
    }
}

// ---------------------------------------------------------------------------
// Apartment points
// ---------------------------------------------------------------------------

/// A point of the apartment in exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApartmentPoint {
    algebra: Algebra,
    coords: Vec<Rat>,
}

impl ApartmentPoint {
    pub fn new(algebra: Algebra, coords: Vec<Rat>) -> Result<Self, BuildingError> {
        let expect = match algebra {
            Algebra::Sl(n) => n as usize,
            Algebra::Sp(n) => n as usize,
        };
        if coords.len() != expect {
            return Err(BuildingError::BadPoint(algebra.to_string()));
        }
        if matches!(algebra, Algebra::Sl(_)) {
            let sum: Rat = coords.iter().cloned().sum();
            if !sum.is_zero() {
                return Err(BuildingError::NotSumZero);
            }
        }
        Ok(ApartmentPoint { algebra, coords })
    }

    pub fn origin(algebra: Algebra) -> Self {
        let len = match algebra {
            Algebra::Sl(n) => n as usize,
            Algebra::Sp(n) => n as usize,
        };
        ApartmentPoint {
            algebra,
            coords: vec![Rat::zero(); len],
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }
}

impl fmt::Display for ApartmentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `Φ_x`: indices of the roots with `α(x) ∈ Z`.
pub fn phi_x(x: &ApartmentPoint, rd: &RootDatum) -> Vec<usize> {
    rd.roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.eval(x).is_integer())
        .map(|(i, _)| i)
        .collect()
}

/// Dimension of the facet through `x`: the rank minus the rank of the span
/// of `Φ_x` as linear functionals.
pub fn facet_dimension(x: &ApartmentPoint, rd: &RootDatum) -> usize {
    let integral = phi_x(x, rd);
    let rows: Vec<Vec<i64>> = integral
        .iter()
        .map(|&i| rd.roots[i].coeffs.clone())
        .collect();
    rd.rank() - rank_i64(&rows)
}

// ---------------------------------------------------------------------------
// Moy-Prasad lattices
// ---------------------------------------------------------------------------

/// A coordinate of the algebra: a root space or a diagonal (Cartan) slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Coord {
    Root(usize),
    Diag(usize),
}

/// The pair of lattices `g_x ⊇ g_x⁺` in entrywise valuation-bound form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoyPrasadLattice {
    algebra: Algebra,
    root_bounds: Vec<i64>,
    root_plus_bounds: Vec<i64>,
}

impl MoyPrasadLattice {
    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    /// Valuation lower bound of a coordinate in `g_x`.
    pub fn bound(&self, c: Coord) -> i64 {
        match c {
            Coord::Root(i) => self.root_bounds[i],
            Coord::Diag(_) => 0,
        }
    }

    /// Valuation lower bound of a coordinate in `g_x⁺`.
    pub fn plus_bound(&self, c: Coord) -> i64 {
        match c {
            Coord::Root(i) => self.root_plus_bounds[i],
            Coord::Diag(_) => 1,
        }
    }

    /// A coordinate survives in the quotient `V = g_x / g_x⁺` iff its two
    /// bounds differ.
    pub fn jumps(&self, c: Coord) -> bool {
        self.bound(c) < self.plus_bound(c)
    }

    /// `dim V = rank + |Φ_x|`.
    pub fn quotient_dimension(&self) -> usize {
        self.algebra.rank()
            + self
                .root_bounds
                .iter()
                .zip(self.root_plus_bounds.iter())
                .filter(|(b, p)| b < p)
                .count()
    }

    /// Entrywise exponent matrix of `g_x` (or `g_x⁺`): root positions carry
    /// the root bound, diagonal positions the Cartan bound.
    pub fn exponent_matrix(&self, rd: &RootDatum, plus: bool) -> Vec<Vec<i64>> {
        assert_eq!(rd.algebra(), self.algebra);
        let n = self.algebra.matrix_size();
        let diag_bound = if plus { 1 } else { 0 };
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][i] = diag_bound;
        }
        let bounds = if plus {
            &self.root_plus_bounds
        } else {
            &self.root_bounds
        };
        for (idx, pos) in rd.positions.iter().enumerate() {
            for &(r, c, _) in pos {
                m[r][c] = bounds[idx];
            }
        }
        m
    }

    /// JSON-friendly view: exponents keyed by root name plus the Cartan
    /// bounds.
    pub fn to_data(&self, rd: &RootDatum) -> MoyPrasadData {
        let mut bounds = BTreeMap::new();
        let mut plus_bounds = BTreeMap::new();
        for (i, r) in rd.roots().iter().enumerate() {
            bounds.insert(r.to_string(), self.root_bounds[i]);
            plus_bounds.insert(r.to_string(), self.root_plus_bounds[i]);
        }
        bounds.insert("cartan".into(), 0);
        plus_bounds.insert("cartan".into(), 1);
        MoyPrasadData {
            bounds,
            plus_bounds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MoyPrasadData {
    pub bounds: BTreeMap<String, i64>,
    pub plus_bounds: BTreeMap<String, i64>,
}

/// The depth-zero lattice pair at `x`: root coordinate `α` is bounded by
/// `-⌊α(x)⌋` in `g_x` and `1 - ⌈α(x)⌉` in `g_x⁺`.
pub fn moy_prasad(x: &ApartmentPoint, rd: &RootDatum) -> MoyPrasadLattice {
    let mut root_bounds = Vec::with_capacity(rd.roots.len());
    let mut root_plus_bounds = Vec::with_capacity(rd.roots.len());
    for r in &rd.roots {
        let v = r.eval(x);
        root_bounds.push(-v.floor().to_integer().to_i64().expect("small exponent"));
        root_plus_bounds.push(1 - v.ceil().to_integer().to_i64().expect("small exponent"));
    }
    MoyPrasadLattice {
        algebra: rd.algebra(),
        root_bounds,
        root_plus_bounds,
    }
}

/// Pretty symbol for one exponent: `O`, `P`, `P^2`, `P^-1`, …
pub fn exponent_symbol(e: i64) -> String {
    match e {
        0 => "O".to_string(),
        1 => "P".to_string(),
        e => format!("P^{e}"),
    }
}

/// Column-aligned rendering of an exponent matrix with the table symbols.
pub fn render_symbol_matrix(m: &[Vec<i64>]) -> String {
    let cells: Vec<Vec<String>> = m
        .iter()
        .map(|row| row.iter().map(|&e| exponent_symbol(e)).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(|s| s.len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().map(|s| format!("{s:<width$}")).collect();
        out.push_str(&format!("  {}\n", line.join(" ").trim_end()));
    }
    out
}

// ---------------------------------------------------------------------------
// Residue quotient elements
// ---------------------------------------------------------------------------

/// An element of `V = g_x / g_x⁺`, stored as the residues of its nonzero
/// jumping coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueQuotientElement {
    algebra: Algebra,
    ctx: FieldContext,
    values: BTreeMap<Coord, ResidueElement>,
}

impl ResidueQuotientElement {
    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn values(&self) -> &BTreeMap<Coord, ResidueElement> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Assemble the residue matrix over `F_q` via the coordinate map.
    pub fn residue_matrix(&self, rd: &RootDatum) -> Vec<Vec<ResidueElement>> {
        assert_eq!(rd.algebra(), self.algebra);
        let n = self.algebra.matrix_size();
        let zero = self.ctx.residue(0);
        let mut m = vec![vec![zero; n]; n];
        for (&coord, val) in &self.values {
            match coord {
                Coord::Root(idx) => {
                    for &(r, c, sign) in rd.positions(idx) {
                        m[r][c] = if sign >= 0 { val.clone() } else { val.neg() };
                    }
                }
                Coord::Diag(i) => match self.algebra {
                    Algebra::Sl(_) => m[i][i] = val.clone(),
                    Algebra::Sp(half) => {
                        let half = half as usize;
                        m[i][i] = val.clone();
                        m[half + i][half + i] = val.neg();
                    }
                },
            }
        }
        m
    }

    /// Degeneracy: the residue matrix is nilpotent over `F_q`.
    pub fn is_degenerate(&self, rd: &RootDatum) -> bool {
        let m = self.residue_matrix(rd);
        let n = m.len();
        let idx: Vec<Vec<u64>> = m
            .iter()
            .map(|row| row.iter().map(|e| e.index()).collect())
            .collect();
        let ctx = &self.ctx;
        let mut pow = idx.clone();
        for _ in 1..n {
            if pow.iter().flatten().all(|&v| v == 0) {
                return true;
            }
            let mut next = vec![vec![0u64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0u64;
                    for (k, pr) in pow[i].iter().enumerate() {
                        acc = ctx.r_add(acc, ctx.r_mul(*pr, idx[k][j]));
                    }
                    next[i][j] = acc;
                }
            }
            pow = next;
        }
        pow.iter().flatten().all(|&v| v == 0)
    }
}

/// Project a matrix into the residue quotient of a lattice: each jumping
/// coordinate `c` with bound `a` maps to the residue of `ϖ^{-a}` times the
/// coordinate value. Errors if some coordinate violates its bound.
pub fn residue_project(
    x: &LieMatrix,
    lattice: &MoyPrasadLattice,
    rd: &RootDatum,
) -> Result<ResidueQuotientElement, BuildingError> {
    if x.algebra() != lattice.algebra {
        return Err(BuildingError::AlgebraMismatch);
    }
    if !x.in_algebra()? {
        return Err(BuildingError::NotInAlgebra);
    }
    let ctx = x.context().clone();
    let mut values = BTreeMap::new();
    // root coordinates: read off at the primary position
    for (idx, pos) in rd.positions.iter().enumerate() {
        let (r, c, _) = pos[0];
        let value = x.entry(r, c);
        let bound = lattice.root_bounds[idx];
        match value.ord() {
            None => {}
            Some(v) if v >= bound => {
                if lattice.jumps(Coord::Root(idx)) && v == bound {
                    values.insert(Coord::Root(idx), value.ac());
                }
            }
            val => {
                return Err(BuildingError::NotInLattice {
                    coord: rd.roots[idx].to_string(),
                    val,
                    bound,
                })
            }
        }
    }
    // Cartan coordinates: the diagonal, bound 0, always jumping
    let diag_count = match x.algebra() {
        Algebra::Sl(n) => n as usize,
        Algebra::Sp(n) => n as usize,
    };
    for i in 0..diag_count {
        let value = x.entry(i, i);
        match value.ord() {
            None => {}
            Some(v) if v >= 0 => {
                if v == 0 {
                    values.insert(Coord::Diag(i), value.ac());
                }
            }
            val => {
                return Err(BuildingError::NotInLattice {
                    coord: format!("h{}", i + 1),
                    val,
                    bound: 0,
                })
            }
        }
    }
    Ok(ResidueQuotientElement {
        algebra: x.algebra(),
        ctx,
        values,
    })
}

// ---------------------------------------------------------------------------
// Affine subspaces and alcove reduction
// ---------------------------------------------------------------------------

/// Intersection of affine root hyperplanes: each constraint `(α, m)` means
/// `α(x) = -m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub constraints: Vec<(usize, i64)>,
}

impl AffineSubspace {
    pub fn describe(&self, rd: &RootDatum) -> String {
        if self.constraints.is_empty() {
            return "full apartment".to_string();
        }
        let parts: Vec<String> = self
            .constraints
            .iter()
            .map(|&(root, m)| {
                if m == 0 {
                    format!("H({})", rd.root(root))
                } else {
                    format!("H({}{:+})", rd.root(root), m)
                }
            })
            .collect();
        parts.join(" n ")
    }
}

/// One affine reflection applied during alcove reduction: across the
/// hyperplane `α(x) = level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineReflection {
    pub root: usize,
    pub level: i64,
}

/// Reflect `x` to the closed fundamental alcove
/// `{0 ≤ α_i(x), θ(x) ≤ 1}`, returning the reduced point and the sequence
/// of reflections applied.
pub fn reduce_to_alcove(
    x: &ApartmentPoint,
    rd: &RootDatum,
) -> (ApartmentPoint, Vec<AffineReflection>) {
    let mut coords = x.coords.clone();
    let mut word = Vec::new();
    let reflect = |coords: &mut Vec<Rat>, root: &Root, coroot: &[i64], level: i64| {
        // s(x) = x - (α(x) - level)·α^∨
        let v: Rat = root
            .coeffs
            .iter()
            .zip(coords.iter())
            .map(|(&c, x)| rat(c) * x)
            .sum();
        let t = v - rat(level);
        for (c, &co) in coords.iter_mut().zip(coroot.iter()) {
            *c -= &t * rat(co);
        }
    };
    let max_steps = 100_000;
    for _ in 0..max_steps {
        let mut acted = false;
        for &s in &rd.simple {
            let v = rd.roots[s].eval_vec(&coords);
            if v.is_negative() {
                reflect(&mut coords, &rd.roots[s], &rd.coroots[s], 0);
                word.push(AffineReflection { root: s, level: 0 });
                acted = true;
                break;
            }
        }
        if acted {
            continue;
        }
        let theta = rd.roots[rd.highest].eval_vec(&coords);
        if theta > rat(1) {
            reflect(
                &mut coords,
                &rd.roots[rd.highest],
                &rd.coroots[rd.highest],
                1,
            );
            word.push(AffineReflection {
                root: rd.highest,
                level: 1,
            });
            continue;
        }
        return (
            ApartmentPoint {
                algebra: x.algebra,
                coords,
            },
            word,
        );
    }
    unreachable!("affine Weyl reduction failed to terminate");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat_frac;
    use crate::orbits::{sl_labels, Algebra, OrbitDatum};
    use crate::padic::PadicNumber;

    fn ctx(p: u64) -> FieldContext {
        FieldContext::with_precision(p, 1, 8).unwrap()
    }

    fn sl3_point(a1: Rat, a2: Rat) -> ApartmentPoint {
        // coordinates (x1, x2, x3) with x1 - x2 = a1, x2 - x3 = a2, sum 0
        let x1 = (&a1 * rat(2) + &a2) / rat(3);
        let x2 = &x1 - &a1;
        let x3 = &x2 - &a2;
        ApartmentPoint::new(Algebra::Sl(3), vec![x1, x2, x3]).unwrap()
    }

    #[test]
    fn root_counts() {
        let a2 = RootDatum::new(Algebra::Sl(3));
        assert_eq!(a2.roots().len(), 6); // n² - n
        let c2 = RootDatum::new(Algebra::Sp(2));
        assert_eq!(c2.roots().len(), 8); // 2n²
        let c3 = RootDatum::new(Algebra::Sp(3));
        assert_eq!(c3.roots().len(), 18);
    }

    #[test]
    fn coordinate_map_covers_everything_once() {
        for alg in [Algebra::Sl(3), Algebra::Sl(4), Algebra::Sp(2), Algebra::Sp(3)] {
            let rd = RootDatum::new(alg);
            let n = alg.matrix_size();
            let mut seen = vec![vec![0u32; n]; n];
            for pos in &rd.positions {
                assert_eq!(pos[0].2, 1, "primary position carries sign +1");
                for &(r, c, _) in pos {
                    seen[r][c] += 1;
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let expect = u32::from(i != j);
                    assert_eq!(seen[i][j], expect, "{alg} position ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn phi_x_examples() {
        let rd = RootDatum::new(Algebra::Sl(3));
        // the origin is integral on every root
        assert_eq!(phi_x(&ApartmentPoint::origin(Algebra::Sl(3)), &rd).len(), 6);
        // alcove barycenter: no root integral
        let bary = sl3_point(rat_frac(1, 3), rat_frac(1, 3));
        assert!(phi_x(&bary, &rd).is_empty());
        // edge with α1 = 0, 0 < α2 < 1: exactly ±α1
        let edge = sl3_point(rat(0), rat_frac(1, 2));
        let on = phi_x(&edge, &rd);
        assert_eq!(on.len(), 2);
        for i in on {
            let c = rd.root(i).coeffs();
            assert_eq!(c[2], 0); // ±(e1 - e2)
        }
    }

    #[test]
    fn facet_dimensions() {
        let rd = RootDatum::new(Algebra::Sl(3));
        let bary = sl3_point(rat_frac(1, 3), rat_frac(1, 3));
        assert_eq!(facet_dimension(&bary, &rd), 2);
        assert_eq!(facet_dimension(&ApartmentPoint::origin(Algebra::Sl(3)), &rd), 0);
        let edge = sl3_point(rat(0), rat_frac(1, 2));
        assert_eq!(facet_dimension(&edge, &rd), 1);
    }

    /// The five facet lattices of the alcove walk-through for `sl_3`.
    #[test]
    fn sl3_lattice_table() {
        let rd = RootDatum::new(Algebra::Sl(3));
        let cases: Vec<(Rat, Rat, [[i64; 3]; 3], [[i64; 3]; 3])> = vec![
            // alcove interior
            (
                rat_frac(1, 3),
                rat_frac(1, 3),
                [[0, 0, 0], [1, 0, 0], [1, 1, 0]],
                [[1, 0, 0], [1, 1, 0], [1, 1, 1]],
            ),
            // edge on the α2 wall
            (
                rat_frac(1, 2),
                rat(0),
                [[0, 0, 0], [1, 0, 0], [1, 0, 0]],
                [[1, 0, 0], [1, 1, 1], [1, 1, 1]],
            ),
            // the origin
            (
                rat(0),
                rat(0),
                [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
                [[1, 1, 1], [1, 1, 1], [1, 1, 1]],
            ),
            // vertex α1 = 1, α2 = 0
            (
                rat(1),
                rat(0),
                [[0, -1, -1], [1, 0, 0], [1, 0, 0]],
                [[1, 0, 0], [2, 1, 1], [2, 1, 1]],
            ),
            // vertex α1 = 0, α2 = 1
            (
                rat(0),
                rat(1),
                [[0, 0, -1], [0, 0, -1], [1, 1, 0]],
                [[1, 1, 0], [1, 1, 0], [2, 2, 1]],
            ),
        ];
        for (a1, a2, want_g, want_plus) in cases {
            let x = sl3_point(a1.clone(), a2.clone());
            let lat = moy_prasad(&x, &rd);
            let g = lat.exponent_matrix(&rd, false);
            let plus = lat.exponent_matrix(&rd, true);
            for i in 0..3 {
                assert_eq!(g[i][..], want_g[i][..], "g at ({a1},{a2}) row {i}");
                assert_eq!(plus[i][..], want_plus[i][..], "g+ at ({a1},{a2}) row {i}");
            }
        }
    }

    /// The two lattice pairs of the `sp_4` walk-through.
    #[test]
    fn sp4_lattices() {
        let rd = RootDatum::new(Algebra::Sp(2));
        let origin = ApartmentPoint::origin(Algebra::Sp(2));
        let lat = moy_prasad(&origin, &rd);
        let g = lat.exponent_matrix(&rd, false);
        let plus = lat.exponent_matrix(&rd, true);
        assert!(g.iter().flatten().all(|&e| e == 0));
        assert!(plus.iter().flatten().all(|&e| e == 1));
        assert_eq!(lat.quotient_dimension(), 10);

        let x = ApartmentPoint::new(
            Algebra::Sp(2),
            vec![rat_frac(-1, 2), rat_frac(-1, 2)],
        )
        .unwrap();
        let lat = moy_prasad(&x, &rd);
        let g = lat.exponent_matrix(&rd, false);
        let want_g = [
            [0, 0, 1, 1],
            [0, 0, 1, 1],
            [-1, -1, 0, 0],
            [-1, -1, 0, 0],
        ];
        let want_plus = [
            [1, 1, 2, 2],
            [1, 1, 2, 2],
            [0, 0, 1, 1],
            [0, 0, 1, 1],
        ];
        let plus = lat.exponent_matrix(&rd, true);
        for i in 0..4 {
            assert_eq!(g[i][..], want_g[i][..], "row {i}");
            assert_eq!(plus[i][..], want_plus[i][..], "row {i}");
        }
        assert_eq!(lat.quotient_dimension(), 10);
    }

    #[test]
    fn quotient_dimension_examples() {
        let rd = RootDatum::new(Algebra::Sl(3));
        let origin = ApartmentPoint::origin(Algebra::Sl(3));
        assert_eq!(moy_prasad(&origin, &rd).quotient_dimension(), 8);
        let bary = sl3_point(rat_frac(1, 3), rat_frac(1, 3));
        assert_eq!(moy_prasad(&bary, &rd).quotient_dimension(), 2);
    }

    #[test]
    fn floor_ceil_duality() {
        // -⌊t⌋ = ⌈-t⌉ coordinatewise: plus bound of -α relates to bound of α
        let rd = RootDatum::new(Algebra::Sp(2));
        let pts = [
            ApartmentPoint::new(Algebra::Sp(2), vec![rat_frac(3, 7), rat_frac(-2, 5)]).unwrap(),
            ApartmentPoint::new(Algebra::Sp(2), vec![rat_frac(-1, 2), rat(2)]).unwrap(),
        ];
        for x in &pts {
            let lat = moy_prasad(x, &rd);
            for (i, r) in rd.roots().iter().enumerate() {
                let neg: Vec<i64> = r.coeffs().iter().map(|&c| -c).collect();
                let j = rd.find_root(&neg).unwrap();
                // bound(α) + plus_bound(-α) = 1
                assert_eq!(lat.root_bounds[i] + lat.root_plus_bounds[j], 1);
            }
        }
    }

    #[test]
    fn residue_projection_of_sl3_representative() {
        let c = ctx(7);
        let rd = RootDatum::new(Algebra::Sl(3));
        let origin = ApartmentPoint::origin(Algebra::Sl(3));
        let lat = moy_prasad(&origin, &rd);
        for label in sl_labels(3, &c) {
            if label.lambda().parts() != [3] {
                continue;
            }
            let d = match label.datum() {
                OrbitDatum::Sl(d) => d.value().clone(),
                _ => unreachable!(),
            };
            if d.ord() != Some(0) {
                continue; // only depth-zero data sit in the origin lattice
            }
            let x = label.representative().unwrap();
            let v = residue_project(&x, &lat, &rd).unwrap();
            let m = v.residue_matrix(&rd);
            assert_eq!(m[0][1].index(), 1);
            assert_eq!(m[1][2], d.ac());
            assert!(m[2][0].is_zero());
            assert!(v.is_degenerate(&rd));
        }
    }

    #[test]
    fn projection_rejects_out_of_lattice() {
        let c = ctx(5);
        let rd = RootDatum::new(Algebra::Sl(2));
        let origin = ApartmentPoint::origin(Algebra::Sl(2));
        let lat = moy_prasad(&origin, &rd);
        let zero = PadicNumber::zero(c.clone());
        let bad = LieMatrix::new(
            Algebra::Sl(2),
            c.clone(),
            vec![
                vec![zero.clone(), PadicNumber::uniformizer(c.clone()).inv().unwrap()],
                vec![zero.clone(), zero.clone()],
            ],
        )
        .unwrap();
        match residue_project(&bad, &lat, &rd) {
            Err(BuildingError::NotInLattice { coord, val, bound }) => {
                assert_eq!(coord, "e1-e2");
                assert_eq!(val, Some(-1));
                assert_eq!(bound, 0);
            }
            other => panic!("expected NotInLattice, got {other:?}"),
        }
    }

    #[test]
    fn zero_projects_to_zero() {
        let c = ctx(5);
        let rd = RootDatum::new(Algebra::Sp(2));
        let lat = moy_prasad(&ApartmentPoint::origin(Algebra::Sp(2)), &rd);
        let z = LieMatrix::zero(Algebra::Sp(2), c);
        let v = residue_project(&z, &lat, &rd).unwrap();
        assert!(v.is_zero());
        assert!(v.is_degenerate(&rd));
    }

    #[test]
    fn nondegenerate_diagonal_detected() {
        let c = ctx(5);
        let rd = RootDatum::new(Algebra::Sl(3));
        let bary = sl3_point(rat_frac(1, 3), rat_frac(1, 3));
        let lat = moy_prasad(&bary, &rd);
        let zero = PadicNumber::zero(c.clone());
        let one = PadicNumber::one(c.clone());
        let m = LieMatrix::new(
            Algebra::Sl(3),
            c.clone(),
            vec![
                vec![one.clone(), zero.clone(), zero.clone()],
                vec![zero.clone(), one.neg(), zero.clone()],
                vec![zero.clone(), zero.clone(), zero.clone()],
            ],
        )
        .unwrap();
        let v = residue_project(&m, &lat, &rd).unwrap();
        assert!(!v.is_degenerate(&rd));
    }

    #[test]
    fn alcove_reduction() {
        let rd = RootDatum::new(Algebra::Sl(3));
        // already inside: identity word
        let bary = sl3_point(rat_frac(1, 3), rat_frac(1, 3));
        let (red, word) = reduce_to_alcove(&bary, &rd);
        assert_eq!(red, bary);
        assert!(word.is_empty());
        // (α1, α2) = (0, -1) reduces to the vertex (1, 0)
        let x = sl3_point(rat(0), rat(-1));
        let (red, word) = reduce_to_alcove(&x, &rd);
        assert!(!word.is_empty());
        let a1 = rd.roots()[rd.simple_roots()[0]].eval(&red);
        let a2 = rd.roots()[rd.simple_roots()[1]].eval(&red);
        assert_eq!((a1, a2), (rat(1), rat(0)));
        // (α1, α2) = (0, -2) reduces to the vertex (0, 1)
        let x = sl3_point(rat(0), rat(-2));
        let (red, _) = reduce_to_alcove(&x, &rd);
        let a1 = rd.roots()[rd.simple_roots()[0]].eval(&red);
        let a2 = rd.roots()[rd.simple_roots()[1]].eval(&red);
        assert_eq!((a1, a2), (rat(0), rat(1)));
    }

    #[test]
    fn alcove_reduction_preserves_facet_data() {
        let rd = RootDatum::new(Algebra::Sp(2));
        let pts = [
            ApartmentPoint::new(Algebra::Sp(2), vec![rat_frac(-1, 2), rat_frac(-1, 2)]).unwrap(),
            ApartmentPoint::new(Algebra::Sp(2), vec![rat_frac(7, 3), rat_frac(-5, 4)]).unwrap(),
            ApartmentPoint::new(Algebra::Sp(2), vec![rat(-3), rat_frac(1, 2)]).unwrap(),
        ];
        for x in &pts {
            let (red, _) = reduce_to_alcove(x, &rd);
            assert_eq!(phi_x(x, &rd).len(), phi_x(&red, &rd).len());
            assert_eq!(facet_dimension(x, &rd), facet_dimension(&red, &rd));
        }
    }

    #[test]
    fn symbol_rendering() {
        assert_eq!(exponent_symbol(0), "O");
        assert_eq!(exponent_symbol(1), "P");
        assert_eq!(exponent_symbol(2), "P^2");
        assert_eq!(exponent_symbol(-1), "P^-1");
        let s = render_symbol_matrix(&[vec![0, -1], vec![1, 2]]);
        assert_eq!(s, "  O    P^-1\n  P    P^2\n");
    }

    #[test]
    fn lattice_constant_on_facet() {
        let rd = RootDatum::new(Algebra::Sl(3));
        // two interior points of the same alcove
        let a = sl3_point(rat_frac(1, 3), rat_frac(1, 3));
        let b = sl3_point(rat_frac(1, 5), rat_frac(2, 5));
        assert_eq!(moy_prasad(&a, &rd), moy_prasad(&b, &rd));
        // two interior points of the same edge
        let e1 = sl3_point(rat(0), rat_frac(1, 3));
        let e2 = sl3_point(rat(0), rat_frac(3, 4));
        assert_eq!(moy_prasad(&e1, &rd), moy_prasad(&e2, &rd));
    }
}
