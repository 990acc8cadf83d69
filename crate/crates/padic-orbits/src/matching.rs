//! Explicit matching between orbit labels and (facet, degenerate element)
//! pairs: build the affine subspace attached to a label, pick a point in a
//! maximal facet, form the lattice pair there and project the explicit
//! representative into the quotient.
//!
//! When the chosen point lies outside the fundamental alcove, the lattice
//! is computed at the original point and the alcove-reduced point is
//! reported separately; the two quotients are canonically identified, so
//! no conjugation of the representative is needed.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::building::{
    moy_prasad, phi_x, reduce_to_alcove, residue_project, AffineReflection, AffineSubspace,
    ApartmentPoint, BuildingError, MoyPrasadLattice, ResidueQuotientElement, RootDatum,
};
use crate::linalg::{primitive_integer_vector, rat, solve_affine, Rat};
use crate::orbits::{
    orbit_dimension, sl_labels, sp_labels, Algebra, OrbitDatum, OrbitError, OrbitLabel,
};
use crate::padic::FieldContext;
use crate::partitions::Partition;
use crate::quadforms::{QFormError, QTuple};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum MatchError {
    #[error("affine subspace is empty")]
    EmptySubspace,
    #[error("index collision while building the subspace: {0}")]
    IndexCollision(String),
    #[error("label shape mismatch: {0}")]
    BadLabel(String),
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Form(#[from] QFormError),
}

// ---------------------------------------------------------------------------
// The affine subspaces H
// ---------------------------------------------------------------------------

/// Locations of the nonzero superdiagonal entries of `J_λ`: `{1, …, n}`
/// minus the partial sums of `λ` (1-based).
pub fn i_lambda(lambda: &Partition) -> Vec<u64> {
    let n = lambda.n();
    let mut sums = Vec::new();
    let mut acc = 0;
    for &p in lambda.parts() {
        acc += p;
        sums.push(acc);
    }
    (1..=n).filter(|i| !sums.contains(i)).collect()
}

/// `H_{λ,D}`: for each `i ∈ I_λ` the constraint `α_i(x) = -val(d_{i+1})`,
/// where `d_{i+1}` is the `(i, i+1)` entry of `J_λ D(d)` (so the offset is
/// zero except possibly at position `n-1`).
pub fn h_subspace_sl(
    rd: &RootDatum,
    lambda: &Partition,
    d_valuation: i64,
) -> Result<AffineSubspace, MatchError> {
    let n = lambda.n();
    let mut constraints = Vec::new();
    for i in i_lambda(lambda) {
        // simple root α_i = e_i - e_{i+1}
        let mut coeffs = vec![0i64; rd.coord_len()];
        coeffs[(i - 1) as usize] = 1;
        coeffs[i as usize] = -1;
        let idx = rd
            .find_root(&coeffs)
            .ok_or_else(|| MatchError::IndexCollision(format!("missing simple root {i}")))?;
        let offset = if i == n - 1 { d_valuation } else { 0 };
        constraints.push((idx, offset));
    }
    Ok(AffineSubspace { constraints })
}

/// `H_{λ,Q̄}`: the intersection over part sizes `j` of the hyperplanes for
/// `S_j¹` (offset zero) and `S_j²` (offsets the valuations of the
/// anisotropic diagonal of `Q_j`).
pub fn h_subspace_sp(
    rd: &RootDatum,
    tuple: &QTuple,
    ctx: &FieldContext,
) -> Result<AffineSubspace, MatchError> {
    let lambda = tuple.lambda();
    let two_n = lambda.n();
    let rank = rd.coord_len();
    let mut seen: BTreeMap<usize, i64> = BTreeMap::new();
    let push = |seen: &mut BTreeMap<usize, i64>,
                    coeffs: Vec<i64>,
                    offset: i64|
     -> Result<(), MatchError> {
        let idx = rd.find_root(&coeffs).ok_or_else(|| {
            MatchError::IndexCollision(format!("no root with coefficients {coeffs:?}"))
        })?;
        if seen.insert(idx, offset).is_some() {
            return Err(MatchError::IndexCollision(format!(
                "root {} assigned twice",
                rd.root(idx)
            )));
        }
        Ok(())
    };
    // s_j = Σ_{j' < j} (1/2) j' m_{j'}, in e-index units
    let mut s = 0usize;
    for j in 1..=two_n {
        let mj = lambda.multiplicity(j) as usize;
        if mj == 0 {
            continue;
        }
        let cj = (j as usize) * mj / 2;
        if j % 2 == 1 {
            // S_j = simple chains within each odd block: skip multiples of j
            for k in 1..=(cj as u64) {
                if k % j == 0 {
                    continue;
                }
                let k = k as usize;
                let mut c = vec![0i64; rank];
                c[s + k - 1] = 1;
                c[s + k] = -1;
                push(&mut seen, c, 0)?;
            }
        } else {
            let nn = (j / 2) as usize;
            let m_big = (nn - 1) * mj;
            let class = tuple
                .class(j as u64)
                .ok_or_else(|| MatchError::BadLabel(format!("tuple misses index {j}")))?;
            let witt = class.witt_index() as usize;
            // chains e_{s+k} - e_{s+k+m_j}
            for k in 1..=m_big {
                let mut c = vec![0i64; rank];
                c[s + k - 1] = 1;
                c[s + k - 1 + mj] = -1;
                push(&mut seen, c, 0)?;
            }
            // hyperbolic pairs e_{s+M+2i-1} + e_{s+M+2i}
            for i in 1..=witt {
                let mut c = vec![0i64; rank];
                c[s + m_big + 2 * i - 2] = 1;
                c[s + m_big + 2 * i - 1] = 1;
                push(&mut seen, c, 0)?;
            }
            // long roots 2e_{s+M+i} with the anisotropic valuations
            let aniso = class.aniso().diagonal_entries(ctx);
            debug_assert_eq!(aniso.len(), mj - 2 * witt);
            for (t, a) in aniso.iter().enumerate() {
                let i = 2 * witt + 1 + t;
                let mut c = vec![0i64; rank];
                c[s + m_big + i - 1] = 2;
                let val = a.ord().expect("anisotropic entries are nonzero");
                push(&mut seen, c, val)?;
            }
        }
        s += cj;
    }
    Ok(AffineSubspace {
        constraints: seen.into_iter().collect(),
    })
}

/// The subspace attached to a label, for either algebra.
pub fn h_subspace(rd: &RootDatum, label: &OrbitLabel) -> Result<AffineSubspace, MatchError> {
    match label.datum() {
        OrbitDatum::Sl(d) => {
            let val = d.value().ord().expect("coset data are nonzero");
            h_subspace_sl(rd, label.lambda(), val)
        }
        OrbitDatum::Sp(t) => h_subspace_sp(rd, t, label.context()),
    }
}

// ---------------------------------------------------------------------------
// Picking a point in a maximal facet
// ---------------------------------------------------------------------------

fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    loop {
        let mut is_p = c > 1;
        let mut d = 2;
        while d * d <= c {
            if c % d == 0 {
                is_p = false;
                break;
            }
            d += 1;
        }
        if is_p {
            return c;
        }
        c += 1;
    }
}

/// A deterministic rational point of `H` lying in a relatively open facet
/// of maximal dimension: `Φ_x` at the output is exactly the set of roots
/// that are constant and integral on all of `H`.
///
/// The point is the least-norm solution of the constraint system perturbed
/// along a kernel basis by `1/M, 1/M², …` for a prime `M`; distinct powers
/// keep independent directions from cancelling on any root, and only
/// finitely many primes can make an unwanted root integral, so the
/// verification loop terminates.
pub fn maximal_facet_point(
    h: &AffineSubspace,
    rd: &RootDatum,
) -> Result<ApartmentPoint, MatchError> {
    let dim = rd.coord_len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for &(root, m) in &h.constraints {
        rows.push(rd.root(root).coeffs().iter().map(|&c| rat(c)).collect());
        rhs.push(rat(-m));
    }
    if matches!(rd.algebra(), Algebra::Sl(_)) {
        rows.push(vec![rat(1); dim]);
        rhs.push(rat(0));
    }
    let sol = solve_affine(&rows, &rhs, dim).ok_or(MatchError::EmptySubspace)?;
    let base = ApartmentPoint::new(rd.algebra(), sol.point.clone()).expect("solver output");
    let directions: Vec<Vec<i64>> = sol
        .directions
        .iter()
        .map(|v| {
            primitive_integer_vector(v)
                .iter()
                .map(|b| i64::try_from(b).expect("small direction"))
                .collect()
        })
        .collect();
    // roots that are integrally constant on H
    let expected: Vec<usize> = rd
        .roots()
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            directions
                .iter()
                .all(|v| r.coeffs().iter().zip(v.iter()).map(|(&a, &b)| a * b).sum::<i64>() == 0)
                && r.eval(&base).is_integer()
        })
        .map(|(i, _)| i)
        .collect();
    if directions.is_empty() {
        return Ok(base);
    }
    let max_offset = h.constraints.rem_abs_max();
    let start = 4 * (rd.algebra().matrix_size() as u64 + 2) * (1 + max_offset);
    let mut m = next_prime(start);
    for _ in 0..200 {
        let mut coords = base.coords().to_vec();
        let mut scale = rat(1);
        let m_rat = rat(m as i64);
        for v in &directions {
            scale = &scale / &m_rat;
            for (c, &d) in coords.iter_mut().zip(v.iter()) {
                *c += &scale * rat(d);
            }
        }
        let candidate = ApartmentPoint::new(rd.algebra(), coords).expect("still in apartment");
        if phi_x(&candidate, rd) == expected {
            return Ok(candidate);
        }
        m = next_prime(m);
    }
    unreachable!("perturbation denominators cannot collide for infinitely many primes")
}

trait OffsetMax {
    fn rem_abs_max(&self) -> u64;
}
impl OffsetMax for Vec<(usize, i64)> {
    fn rem_abs_max(&self) -> u64 {
        self.iter().map(|&(_, m)| m.unsigned_abs()).max().unwrap_or(0)
    }
}

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

/// Verification outcomes for one matched label; all of them must hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchChecks {
    pub in_algebra: bool,
    pub nilpotent: bool,
    pub in_lattice: bool,
    pub degenerate: bool,
}

impl MatchChecks {
    pub fn all_green(&self) -> bool {
        self.in_algebra && self.nilpotent && self.in_lattice && self.degenerate
    }
}

/// The full output of matching one orbit label.
#[derive(Clone, Debug)]
pub struct MatchResult {
    pub label: OrbitLabel,
    pub subspace: AffineSubspace,
    /// The chosen maximal-facet point of the subspace; the lattice pair is
    /// computed here.
    pub facet_point: ApartmentPoint,
    /// The representative of the facet point in the closed fundamental
    /// alcove.
    pub alcove_point: ApartmentPoint,
    pub word: Vec<AffineReflection>,
    pub lattice: MoyPrasadLattice,
    pub v: ResidueQuotientElement,
    pub checks: MatchChecks,
    pub orbit_dim: usize,
}

impl fmt::Display for MatchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> facet point {} (dim {}), checks {}",
            self.label,
            self.facet_point,
            self.orbit_dim,
            if self.checks.all_green() { "ok" } else { "FAILED" }
        )
    }
}

/// Match one label: subspace, facet point, lattice pair, projection, and
/// the verification record.
pub fn match_label(label: &OrbitLabel) -> Result<MatchResult, MatchError> {
    let rd = RootDatum::new(label.algebra());
    let subspace = h_subspace(&rd, label)?;
    let facet_point = maximal_facet_point(&subspace, &rd)?;
    let lattice = moy_prasad(&facet_point, &rd);
    let rep = label.representative()?;
    let in_algebra = rep.in_algebra()?;
    let nilpotent = rep.is_nilpotent()?;
    let v = residue_project(&rep, &lattice, &rd)?;
    let degenerate = v.is_degenerate(&rd);
    let (alcove_point, word) = reduce_to_alcove(&facet_point, &rd);
    Ok(MatchResult {
        label: label.clone(),
        subspace,
        facet_point,
        alcove_point,
        word,
        lattice,
        v,
        checks: MatchChecks {
            in_algebra,
            nilpotent,
            in_lattice: true,
            degenerate,
        },
        orbit_dim: orbit_dimension(label.algebra(), label.lambda()),
    })
}

/// Results of matching every label of an algebra, in canonical label
/// order, with any per-label failures kept alongside.
pub struct MatchReport {
    pub results: Vec<MatchResult>,
    pub failures: Vec<(OrbitLabel, MatchError)>,
}

impl MatchReport {
    /// Orbit-dimension stratification: count of labels per dimension,
    /// largest first.
    pub fn strata(&self) -> Vec<(usize, usize)> {
        let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
        for r in &self.results {
            *by_dim.entry(r.orbit_dim).or_insert(0) += 1;
        }
        by_dim.into_iter().rev().collect()
    }
}

pub fn match_all(algebra: Algebra, ctx: &FieldContext) -> MatchReport {
    let labels = match algebra {
        Algebra::Sl(n) => sl_labels(n, ctx),
        Algebra::Sp(n) => sp_labels(n, ctx),
    };
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for label in labels {
        match match_label(&label) {
            Ok(r) => results.push(r),
            Err(e) => failures.push((label, e)),
        }
    }
    MatchReport { results, failures }
}
