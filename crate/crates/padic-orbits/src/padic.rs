//! Exact truncated arithmetic in an unramified extension of `Q_p`.
//!
//! The field `F` always has uniformizer `ϖ = p`; the residue extension
//! degree `k` only changes the residue field `F_q`, `q = p^k`, which is
//! realized as `F_p[x]/(f)` for the lexicographically smallest monic
//! irreducible `f` of degree `k`. A nonzero field element is stored as
//! `ϖ^v · u` with `u` a unit known either exactly (an integer polynomial)
//! or to a fixed number of base-`p` digits. Zero is a distinguished value
//! with `ord = ∞`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Hard cap on the residue extension degree; keeps residue arithmetic on
/// stack arrays.
pub const MAX_K: usize = 8;

const DEFAULT_PRECISION: u32 = 32;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("invalid field context: {0}")]
    InvalidContext(String),
    #[error("inversion of zero")]
    InversionOfZero,
    #[error("additive cancellation consumed all stored digits")]
    PrecisionLoss,
    #[error("zero input where a unit is required")]
    ZeroInput,
    #[error("element belongs to a different field context")]
    ContextMismatch,
    #[error("cannot reconstruct value: {0}")]
    BadData(String),
}

// ---------------------------------------------------------------------------
// Field context
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct CtxInner {
    p: u64,
    k: u32,
    precision: u32,
    q: u64,
    /// Coefficients of the monic degree-`k` irreducible polynomial over
    /// `F_p`, lowest degree first, leading coefficient 1 implicit.
    /// Empty iff `k == 1`.
    poly: Vec<u64>,
    /// Index of the smallest quadratic non-residue of `F_q` in the fixed
    /// enumeration.
    epsilon: u64,
}

/// Ambient data of the local field: the prime `p`, residue degree `k`,
/// working precision in base-`p` digits, and the defining polynomial of
/// `F_q` when `k > 1`.
///
/// Cheap to clone; all elements carry one.
#[derive(Clone, Debug)]
pub struct FieldContext(Arc<CtxInner>);

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k && self.0.poly == other.0.poly
    }
}
impl Eq for FieldContext {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldContext {
    /// Context for `Q_p` itself (`k = 1`) or its unramified extension of
    /// degree `k`, with the default precision of 32 digits.
    pub fn new(p: u64, k: u32) -> Result<Self, PadicError> {
        Self::with_precision(p, k, DEFAULT_PRECISION)
    }

    pub fn with_precision(p: u64, k: u32, precision: u32) -> Result<Self, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::InvalidContext(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(PadicError::InvalidContext(
                "residue characteristic 2 is not supported".into(),
            ));
        }
        if k == 0 || k as usize > MAX_K {
            return Err(PadicError::InvalidContext(format!(
                "residue degree {k} out of range 1..={MAX_K}"
            )));
        }
        if precision == 0 {
            return Err(PadicError::InvalidContext("precision must be >= 1".into()));
        }
        let q = (p as u128).checked_pow(k).filter(|&q| q < (1u128 << 32));
        let q = match q {
            Some(q) => q as u64,
            None => {
                return Err(PadicError::InvalidContext(format!(
                    "residue field size p^k = {p}^{k} too large"
                )))
            }
        };
        let poly = if k == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, k)
        };
        Self::finish(p, k, precision, q, poly)
    }

    /// Same, but with an explicitly chosen defining polynomial (coefficients
    /// of `x^0..x^{k-1}`; the leading coefficient is 1). Verified
    /// irreducible at construction.
    pub fn with_poly(p: u64, k: u32, precision: u32, poly: Vec<u64>) -> Result<Self, PadicError> {
        let base = Self::with_precision(p, k, precision)?;
        if k == 1 {
            return Ok(base);
        }
        if poly.len() != k as usize || poly.iter().any(|&c| c >= p) {
            return Err(PadicError::InvalidContext(
                "polynomial must have k coefficients reduced mod p".into(),
            ));
        }
        if !poly_is_irreducible(base.p(), &poly) {
            return Err(PadicError::InvalidContext(
                "polynomial is reducible over F_p".into(),
            ));
        }
        Self::finish(base.p(), k, precision, base.q(), poly)
    }

    fn finish(p: u64, k: u32, precision: u32, q: u64, poly: Vec<u64>) -> Result<Self, PadicError> {
        let bootstrap = FieldContext(Arc::new(CtxInner {
            p,
            k,
            precision,
            q,
            poly,
            epsilon: 0,
        }));
        // Smallest non-residue in the fixed enumeration of F_q.
        let eps = (1..q)
            .find(|&u| bootstrap.r_pow(u, (q - 1) / 2) != 1)
            .expect("F_q^x contains a non-square for odd q");
        let inner = CtxInner {
            epsilon: eps,
            poly: bootstrap.0.poly.clone(),
            ..*bootstrap.0
        };
        Ok(FieldContext(Arc::new(inner)))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn q(&self) -> u64 {
        self.0.q
    }
    pub fn precision(&self) -> u32 {
        self.0.precision
    }
    /// Defining polynomial coefficients (empty when `k = 1`).
    pub fn poly(&self) -> &[u64] {
        &self.0.poly
    }

    /// The fixed non-square unit of the residue field: the smallest
    /// non-residue in the enumeration of `F_q`.
    pub fn epsilon(&self) -> ResidueElement {
        ResidueElement {
            ctx: self.clone(),
            value: self.0.epsilon,
        }
    }

    /// Residue element from its enumeration index (base-`p` digits of the
    /// index are the polynomial coefficients).
    pub fn residue(&self, value: u64) -> ResidueElement {
        assert!(value < self.q(), "residue index out of range");
        ResidueElement {
            ctx: self.clone(),
            value,
        }
    }

    pub fn residues(&self) -> impl Iterator<Item = ResidueElement> + '_ {
        (0..self.q()).map(move |v| self.residue(v))
    }

    /// ϖ^precision as a big integer, the modulus of truncated units.
    fn p_pow(&self, e: u32) -> BigInt {
        BigInt::from(self.p()).pow(e)
    }

    // -- raw residue arithmetic on enumeration indices ----------------------

    fn decode(&self, v: u64) -> [u64; MAX_K] {
        let mut c = [0u64; MAX_K];
        let mut v = v;
        let p = self.p();
        for slot in c.iter_mut().take(self.k() as usize) {
            *slot = v % p;
            v /= p;
        }
        c
    }

    fn encode(&self, c: &[u64; MAX_K]) -> u64 {
        let p = self.p();
        let mut v = 0u64;
        for i in (0..self.k() as usize).rev() {
            v = v * p + c[i];
        }
        v
    }

    pub(crate) fn r_add(&self, a: u64, b: u64) -> u64 {
        let p = self.p();
        let (ca, cb) = (self.decode(a), self.decode(b));
        let mut c = [0u64; MAX_K];
        for i in 0..self.k() as usize {
            c[i] = (ca[i] + cb[i]) % p;
        }
        self.encode(&c)
    }

    pub(crate) fn r_neg(&self, a: u64) -> u64 {
        let p = self.p();
        let ca = self.decode(a);
        let mut c = [0u64; MAX_K];
        for i in 0..self.k() as usize {
            c[i] = (p - ca[i]) % p;
        }
        self.encode(&c)
    }

    pub(crate) fn r_sub(&self, a: u64, b: u64) -> u64 {
        self.r_add(a, self.r_neg(b))
    }

    pub(crate) fn r_mul(&self, a: u64, b: u64) -> u64 {
        let k = self.k() as usize;
        if k == 1 {
            return (a as u128 * b as u128 % self.p() as u128) as u64;
        }
        let p = self.p();
        let (ca, cb) = (self.decode(a), self.decode(b));
        let mut prod = [0u64; 2 * MAX_K];
        for i in 0..k {
            if ca[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
            }
        }
        // reduce by the monic defining polynomial
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &fj) in self.0.poly.iter().enumerate() {
                let t = (c * (p - fj)) % p;
                prod[d - k + j] = (prod[d - k + j] + t) % p;
            }
        }
        let mut out = [0u64; MAX_K];
        out[..k].copy_from_slice(&prod[..k]);
        self.encode(&out)
    }

    pub(crate) fn r_pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.r_mul(acc, base);
            }
            base = self.r_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn r_inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inversion of zero residue");
        self.r_pow(a, self.q() - 2)
    }
}

// -- polynomial utilities over F_p (dense u64 coefficient vectors) ----------

fn poly_mod_mul(p: u64, a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
    let k = f.len();
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (j, &fj) in f.iter().enumerate() {
            let t = c * (p - fj) % p;
            prod[d - k + j] = (prod[d - k + j] + t) % p;
        }
    }
    prod.truncate(k);
    prod
}

fn poly_gcd_is_one(p: u64, a: &[u64], b: &[u64]) -> bool {
    // Euclidean algorithm; inputs are small.
    let norm = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    norm(&mut a);
    norm(&mut b);
    while !b.is_empty() {
        // a mod b
        let db = b.len() - 1;
        let lead_inv = mod_inv_scalar(p, b[db]);
        while a.len() >= b.len() && !a.is_empty() {
            let da = a.len() - 1;
            let c = a[da] * lead_inv % p;
            if c != 0 {
                for j in 0..=db {
                    let t = c * b[j] % p;
                    let idx = da - db + j;
                    a[idx] = (a[idx] + p - t) % p;
                }
            }
            a.pop();
            norm(&mut a);
            if a.len() <= db {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
        norm(&mut b);
    }
    a.len() == 1
}

fn mod_inv_scalar(p: u64, a: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// `f` of degree `k` is irreducible over `F_p` iff `x^{p^k} ≡ x (mod f)`
/// and `gcd(x^{p^{k/r}} - x, f) = 1` for every prime `r | k`.
fn poly_is_irreducible(p: u64, poly: &[u64]) -> bool {
    let k = poly.len();
    if poly[0] == 0 {
        return false; // divisible by x
    }
    let xp = |e: u32| -> Vec<u64> {
        // x^(p^e) mod f by repeated Frobenius power
        let mut cur = vec![0u64, 1]; // x
        cur.resize(k, 0);
        for _ in 0..e {
            // cur^p mod f, square-and-multiply on the exponent p
            let mut acc = vec![0u64; k];
            acc[0] = 1;
            let mut base = cur.clone();
            let mut ex = p;
            while ex > 0 {
                if ex & 1 == 1 {
                    acc = poly_mod_mul(p, &acc, &base, poly);
                }
                base = poly_mod_mul(p, &base, &base, poly);
                ex >>= 1;
            }
            cur = acc;
        }
        cur
    };
    // x^{p^k} - x ≡ 0 mod f
    let mut top = xp(k as u32);
    top[1] = (top[1] + p - 1) % p;
    if top.iter().any(|&c| c != 0) {
        return false;
    }
    let mut k_rem = k;
    let mut r = 2;
    let mut prime_factors = Vec::new();
    while r * r <= k_rem {
        if k_rem % r == 0 {
            prime_factors.push(r);
            while k_rem % r == 0 {
                k_rem /= r;
            }
        }
        r += 1;
    }
    if k_rem > 1 {
        prime_factors.push(k_rem);
    }
    let mut full = poly.to_vec();
    full.push(1); // the implicit leading coefficient
    for r in prime_factors {
        let mut g = xp((k / r) as u32);
        g[1] = (g[1] + p - 1) % p;
        if !poly_gcd_is_one(p, &g, &full) {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `k`, ordering
/// candidates by the integer `Σ c_i p^i` of their non-leading coefficients.
fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let total = (p as u128).pow(k as u32);
    let mut idx: u128 = 0;
    while idx < total {
        let mut coeffs = vec![0u64; k];
        let mut v = idx;
        for c in coeffs.iter_mut() {
            *c = (v % p as u128) as u64;
            v /= p as u128;
        }
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
        idx += 1;
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

// ---------------------------------------------------------------------------
// Residue field elements
// ---------------------------------------------------------------------------

/// An element of `F_q`, encoded by its index in the fixed enumeration
/// (base-`p` digits of the index are the coefficients on `1, x, x², …`).
#[derive(Clone, Debug)]
pub struct ResidueElement {
    ctx: FieldContext,
    value: u64,
}

impl PartialEq for ResidueElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.value == other.value
    }
}
impl Eq for ResidueElement {}

impl ResidueElement {
    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    /// Enumeration index; doubles as the canonical serialized form.
    pub fn index(&self) -> u64 {
        self.value
    }

    /// Coefficients on `1, x, …, x^{k-1}`.
    pub fn coeffs(&self) -> Vec<u64> {
        let c = self.ctx.decode(self.value);
        c[..self.ctx.k() as usize].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        self.ctx.residue(self.ctx.r_add(self.value, other.value))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.ctx.residue(self.ctx.r_sub(self.value, other.value))
    }

    pub fn neg(&self) -> Self {
        self.ctx.residue(self.ctx.r_neg(self.value))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.ctx.residue(self.ctx.r_mul(self.value, other.value))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.ctx.residue(self.ctx.r_pow(self.value, e))
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.is_zero() {
            return Err(PadicError::InversionOfZero);
        }
        Ok(self.ctx.residue(self.ctx.r_inv(self.value)))
    }

    /// Exact unit lift to the valued field (zero lifts to zero).
    pub fn lift(&self) -> PadicNumber {
        if self.is_zero() {
            return PadicNumber::zero(self.ctx.clone());
        }
        let coeffs = self.coeffs().into_iter().map(BigInt::from).collect();
        PadicNumber {
            ctx: self.ctx.clone(),
            repr: Repr::NonZero {
                val: 0,
                unit: coeffs,
                prec: Precision::Exact,
            },
        }
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.k() == 1 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "[{}]", self.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        }
    }
}

/// Quadratic character of `F_q^×`: `+1` for squares, `-1` for non-squares,
/// computed as `u^{(q-1)/2}`.
pub fn legendre(u: &ResidueElement) -> Result<i32, PadicError> {
    if u.is_zero() {
        return Err(PadicError::ZeroInput);
    }
    let r = u.pow((u.ctx.q() - 1) / 2);
    Ok(if r.value == 1 { 1 } else { -1 })
}

// ---------------------------------------------------------------------------
// p-adic numbers
// ---------------------------------------------------------------------------

/// How much of a unit part is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    /// The stored integer polynomial is the exact value of the unit.
    Exact,
    /// The unit is known modulo `p^n` only.
    Digits(u32),
}

#[derive(Clone, Debug)]
enum Repr {
    Zero,
    NonZero {
        val: i64,
        /// Unit part as a polynomial of degree `< k` over the integers,
        /// reduced by the defining polynomial; canonical in `[0, p^n)`
        /// coefficientwise when truncated.
        unit: Vec<BigInt>,
        prec: Precision,
    },
}

/// Element of `F`: either zero or `ϖ^val · unit`.
#[derive(Clone, Debug)]
pub struct PadicNumber {
    ctx: FieldContext,
    repr: Repr,
}

fn reduce_by_defining_poly(coeffs: &mut Vec<BigInt>, poly: &[u64], k: usize) {
    if k == 1 {
        coeffs.truncate(1);
        return;
    }
    let mut d = coeffs.len();
    while d > k {
        d -= 1;
        let c = std::mem::replace(&mut coeffs[d], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        for (j, &fj) in poly.iter().enumerate() {
            let sub = &c * BigInt::from(fj);
            coeffs[d - k + j] -= sub;
        }
    }
    coeffs.truncate(k);
}

/// Largest `t` with `p^t` dividing every coefficient, together with the
/// quotient. Assumes not all coefficients are zero.
fn content_valuation(coeffs: &[BigInt], p: u64) -> (i64, Vec<BigInt>) {
    let p = BigInt::from(p);
    let mut t: i64 = 0;
    let mut cur: Vec<BigInt> = coeffs.to_vec();
    'outer: loop {
        let mut next = Vec::with_capacity(cur.len());
        for c in &cur {
            if c.is_zero() {
                next.push(BigInt::zero());
                continue;
            }
            let (q, r) = c.div_rem(&p);
            if !r.is_zero() {
                break 'outer;
            }
            next.push(q);
        }
        cur = next;
        t += 1;
    }
    (t, cur)
}

impl PartialEq for PadicNumber {
    /// Equality to stored precision: exact values compare exactly, truncated
    /// values compare modulo the smaller of the two precisions.
    fn eq(&self, other: &Self) -> bool {
        if self.ctx != other.ctx {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Zero, Repr::Zero) => true,
            (Repr::Zero, _) | (_, Repr::Zero) => false,
            (
                Repr::NonZero { val: va, unit: ua, prec: pa },
                Repr::NonZero { val: vb, unit: ub, prec: pb },
            ) => {
                if va != vb {
                    return false;
                }
                match (pa, pb) {
                    (Precision::Exact, Precision::Exact) => ua == ub,
                    _ => {
                        let n = match (pa, pb) {
                            (Precision::Digits(a), Precision::Digits(b)) => *a.min(b),
                            (Precision::Digits(a), _) | (_, Precision::Digits(a)) => *a,
                            _ => unreachable!(),
                        };
                        let m = self.ctx.p_pow(n);
                        ua.iter()
                            .zip(ub.iter())
                            .all(|(a, b)| (a - b).mod_floor(&m).is_zero())
                    }
                }
            }
        }
    }
}

impl PadicNumber {
    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn zero(ctx: FieldContext) -> Self {
        PadicNumber { ctx, repr: Repr::Zero }
    }

    pub fn one(ctx: FieldContext) -> Self {
        Self::from_integer(ctx, 1)
    }

    /// The uniformizer `ϖ = p`.
    pub fn uniformizer(ctx: FieldContext) -> Self {
        PadicNumber {
            ctx,
            repr: Repr::NonZero {
                val: 1,
                unit: vec![BigInt::one()],
                prec: Precision::Exact,
            },
        }
    }

    pub fn from_integer(ctx: FieldContext, n: i64) -> Self {
        Self::from_bigint(ctx, BigInt::from(n))
    }

    pub fn from_bigint(ctx: FieldContext, n: BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(ctx);
        }
        let (val, unit) = content_valuation(&[n], ctx.p());
        PadicNumber {
            ctx,
            repr: Repr::NonZero {
                val,
                unit,
                prec: Precision::Exact,
            },
        }
    }

    /// `ϖ^val · unit` for an exact unit given by integer coefficients.
    /// The constant coefficient of `unit` reduced mod `p` must be a unit.
    pub fn from_unit(ctx: FieldContext, val: i64, unit: Vec<BigInt>) -> Result<Self, PadicError> {
        if unit.is_empty() || unit.len() > ctx.k() as usize {
            return Err(PadicError::BadData("unit coefficient count".into()));
        }
        let n = PadicNumber {
            ctx: ctx.clone(),
            repr: Repr::NonZero {
                val,
                unit,
                prec: Precision::Exact,
            },
        };
        if n.ac().is_zero() {
            return Err(PadicError::BadData("unit part is not a unit".into()));
        }
        Ok(n)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn precision(&self) -> Precision {
        match &self.repr {
            Repr::Zero => Precision::Exact,
            Repr::NonZero { prec, .. } => *prec,
        }
    }

    /// The valuation; `None` encodes `ord(0) = ∞`.
    pub fn ord(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::NonZero { val, .. } => Some(*val),
        }
    }

    /// Angular component: the residue of `ϖ^{-ord(x)}·x`, with `ac(0) = 0`.
    pub fn ac(&self) -> ResidueElement {
        match &self.repr {
            Repr::Zero => self.ctx.residue(0),
            Repr::NonZero { unit, .. } => {
                let p = BigInt::from(self.ctx.p());
                let mut c = [0u64; MAX_K];
                for (i, u) in unit.iter().enumerate() {
                    c[i] = u.mod_floor(&p).to_u64().expect("residue fits u64");
                }
                self.ctx.residue(self.ctx.encode(&c))
            }
        }
    }

    fn effective_digits(&self) -> u32 {
        match self.precision() {
            Precision::Exact => self.ctx.precision(),
            Precision::Digits(n) => n,
        }
    }

    /// Canonical base-`p` digits of the unit part, one coefficient vector
    /// per digit, up to the effective precision with trailing zero digits
    /// trimmed (at least one digit is kept).
    pub fn digits(&self) -> Vec<Vec<u64>> {
        let k = self.ctx.k() as usize;
        match &self.repr {
            Repr::Zero => vec![vec![0; k]],
            Repr::NonZero { unit, .. } => {
                let n = self.effective_digits();
                let p = BigInt::from(self.ctx.p());
                let m = self.ctx.p_pow(n);
                let mut cur: Vec<BigInt> = unit.iter().map(|c| c.mod_floor(&m)).collect();
                cur.resize(k, BigInt::zero());
                let mut out = Vec::with_capacity(n as usize);
                for _ in 0..n {
                    let mut digit = vec![0u64; k];
                    for (i, c) in cur.iter_mut().enumerate() {
                        let (q, r) = c.div_rem(&p);
                        digit[i] = r.to_u64().expect("digit fits u64");
                        *c = q;
                    }
                    out.push(digit);
                }
                while out.len() > 1 && out.last().map(|d| d.iter().all(|&c| c == 0)) == Some(true) {
                    out.pop();
                }
                out
            }
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::NonZero { val, unit, prec } => {
                let mut unit: Vec<BigInt> = unit.iter().map(|c| -c).collect();
                if let Precision::Digits(n) = prec {
                    let m = self.ctx.p_pow(*n);
                    for c in unit.iter_mut() {
                        *c = c.mod_floor(&m);
                    }
                }
                PadicNumber {
                    ctx: self.ctx.clone(),
                    repr: Repr::NonZero {
                        val: *val,
                        unit,
                        prec: *prec,
                    },
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PadicError> {
        if self.ctx != other.ctx {
            return Err(PadicError::ContextMismatch);
        }
        let (va, ua, pa, vb, ub, pb) = match (&self.repr, &other.repr) {
            (Repr::Zero, _) => return Ok(other.clone()),
            (_, Repr::Zero) => return Ok(self.clone()),
            (
                Repr::NonZero { val: va, unit: ua, prec: pa },
                Repr::NonZero { val: vb, unit: ub, prec: pb },
            ) => (*va, ua, *pa, *vb, ub, *pb),
        };
        let k = self.ctx.k() as usize;
        let v = va.min(vb);
        let shift_a = (va - v) as u32;
        let shift_b = (vb - v) as u32;
        let pa_big = self.ctx.p_pow(shift_a);
        let pb_big = self.ctx.p_pow(shift_b);
        let mut sum = vec![BigInt::zero(); k];
        for (i, c) in ua.iter().enumerate() {
            sum[i] += c * &pa_big;
        }
        for (i, c) in ub.iter().enumerate() {
            sum[i] += c * &pb_big;
        }
        // digits known above valuation v
        let known = |prec: Precision, shift: u32| match prec {
            Precision::Exact => None,
            Precision::Digits(n) => Some(n + shift),
        };
        let kn = match (known(pa, shift_a), known(pb, shift_b)) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        match kn {
            None => {
                // exact + exact
                if sum.iter().all(|c| c.is_zero()) {
                    return Ok(Self::zero(self.ctx.clone()));
                }
                let (t, unit) = content_valuation(&sum, self.ctx.p());
                Ok(PadicNumber {
                    ctx: self.ctx.clone(),
                    repr: Repr::NonZero {
                        val: v + t,
                        unit,
                        prec: Precision::Exact,
                    },
                })
            }
            Some(n) => {
                let m = self.ctx.p_pow(n);
                for c in sum.iter_mut() {
                    *c = c.mod_floor(&m);
                }
                if sum.iter().all(|c| c.is_zero()) {
                    return Err(PadicError::PrecisionLoss);
                }
                let (t, mut unit) = content_valuation(&sum, self.ctx.p());
                let rem = n - t as u32;
                let mrem = self.ctx.p_pow(rem);
                for c in unit.iter_mut() {
                    *c = c.mod_floor(&mrem);
                }
                Ok(PadicNumber {
                    ctx: self.ctx.clone(),
                    repr: Repr::NonZero {
                        val: v + t,
                        unit,
                        prec: Precision::Digits(rem),
                    },
                })
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PadicError> {
        if self.ctx != other.ctx {
            return Err(PadicError::ContextMismatch);
        }
        let (va, ua, pa, vb, ub, pb) = match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => return Ok(Self::zero(self.ctx.clone())),
            (
                Repr::NonZero { val: va, unit: ua, prec: pa },
                Repr::NonZero { val: vb, unit: ub, prec: pb },
            ) => (*va, ua, *pa, *vb, ub, *pb),
        };
        let k = self.ctx.k() as usize;
        let mut prod = vec![BigInt::zero(); ua.len() + ub.len()];
        for (i, a) in ua.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in ub.iter().enumerate() {
                let t = a * b;
                prod[i + j] += t;
            }
        }
        reduce_by_defining_poly(&mut prod, self.ctx.poly(), k);
        let prec = match (pa, pb) {
            (Precision::Exact, Precision::Exact) => Precision::Exact,
            (Precision::Digits(a), Precision::Exact) | (Precision::Exact, Precision::Digits(a)) => {
                Precision::Digits(a)
            }
            (Precision::Digits(a), Precision::Digits(b)) => Precision::Digits(a.min(b)),
        };
        if let Precision::Digits(n) = prec {
            let m = self.ctx.p_pow(n);
            for c in prod.iter_mut() {
                *c = c.mod_floor(&m);
            }
        }
        Ok(PadicNumber {
            ctx: self.ctx.clone(),
            repr: Repr::NonZero {
                val: va + vb,
                unit: prod,
                prec,
            },
        })
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        let (val, unit, prec) = match &self.repr {
            Repr::Zero => return Err(PadicError::InversionOfZero),
            Repr::NonZero { val, unit, prec } => (*val, unit, *prec),
        };
        let k = self.ctx.k() as usize;
        // ±1 inverts exactly
        if unit.len() == 1 || unit[1..].iter().all(|c| c.is_zero()) {
            let c0 = &unit[0];
            if c0.is_one() || (-c0).is_one() {
                return Ok(PadicNumber {
                    ctx: self.ctx.clone(),
                    repr: Repr::NonZero {
                        val: -val,
                        unit: vec![c0.clone()],
                        prec,
                    },
                });
            }
        }
        let n = match prec {
            Precision::Exact => self.ctx.precision(),
            Precision::Digits(n) => n,
        };
        // Invert u mod p via F_q arithmetic, then Hensel-lift:
        // z <- z(2 - uz) doubles the number of correct digits.
        let ac = self.ac();
        debug_assert!(!ac.is_zero(), "unit part must be a unit");
        let inv0 = ac.inv()?;
        let mut z: Vec<BigInt> = inv0.coeffs().into_iter().map(BigInt::from).collect();
        z.resize(k, BigInt::zero());
        let mut good: u32 = 1;
        while good < n {
            good = (good * 2).min(n);
            let m = self.ctx.p_pow(good);
            // t = u*z mod (f, p^good)
            let mut t = vec![BigInt::zero(); unit.len() + z.len()];
            for (i, a) in unit.iter().enumerate() {
                for (j, b) in z.iter().enumerate() {
                    t[i + j] += a * b;
                }
            }
            reduce_by_defining_poly(&mut t, self.ctx.poly(), k);
            // z = z*(2 - t)
            let mut two_minus_t: Vec<BigInt> = t.iter().map(|c| -c).collect();
            two_minus_t[0] += 2;
            let mut nz = vec![BigInt::zero(); z.len() + two_minus_t.len()];
            for (i, a) in z.iter().enumerate() {
                for (j, b) in two_minus_t.iter().enumerate() {
                    nz[i + j] += a * b;
                }
            }
            reduce_by_defining_poly(&mut nz, self.ctx.poly(), k);
            for c in nz.iter_mut() {
                *c = c.mod_floor(&m);
            }
            z = nz;
        }
        Ok(PadicNumber {
            ctx: self.ctx.clone(),
            repr: Repr::NonZero {
                val: -val,
                unit: z,
                prec: Precision::Digits(n),
            },
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, PadicError> {
        self.mul(&other.inv()?)
    }

    /// Multiply by `ϖ^e` (exact in the valuation).
    pub fn shift(&self, e: i64) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::NonZero { val, unit, prec } => PadicNumber {
                ctx: self.ctx.clone(),
                repr: Repr::NonZero {
                    val: val + e,
                    unit: unit.clone(),
                    prec: *prec,
                },
            },
        }
    }

    /// Serializable snapshot `{val, digits}`.
    pub fn to_data(&self) -> PadicData {
        PadicData {
            val: self.ord(),
            digits: self.digits(),
        }
    }

    /// Rebuild a number from `{val, digits}` in the given context. The
    /// result is truncated at the number of supplied digits.
    pub fn from_data(ctx: &FieldContext, data: &PadicData) -> Result<Self, PadicError> {
        match data.val {
            None => Ok(Self::zero(ctx.clone())),
            Some(v) => {
                let k = ctx.k() as usize;
                let n = data.digits.len() as u32;
                if n == 0 || n > ctx.precision() {
                    return Err(PadicError::BadData("digit count out of range".into()));
                }
                let mut unit = vec![BigInt::zero(); k];
                let mut scale = BigInt::one();
                let p = BigInt::from(ctx.p());
                for digit in &data.digits {
                    if digit.len() != k || digit.iter().any(|&c| c >= ctx.p()) {
                        return Err(PadicError::BadData("digit shape".into()));
                    }
                    for (i, &c) in digit.iter().enumerate() {
                        unit[i] += &scale * BigInt::from(c);
                    }
                    scale *= &p;
                }
                let out = PadicNumber {
                    ctx: ctx.clone(),
                    repr: Repr::NonZero {
                        val: v,
                        unit,
                        prec: Precision::Digits(n),
                    },
                };
                if out.ac().is_zero() {
                    return Err(PadicError::BadData("leading digit must be nonzero".into()));
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for PadicNumber {
    /// `p^v * (d0 + d1*p + ...)`, digits trimmed of trailing zeros.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ord() {
            None => write!(f, "0"),
            Some(v) => {
                let p = self.ctx.p();
                let digit_str = |d: &Vec<u64>| -> String {
                    if self.ctx.k() == 1 {
                        d[0].to_string()
                    } else {
                        format!("[{}]", d.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
                    }
                };
                let parts: Vec<String> = self
                    .digits()
                    .iter()
                    .enumerate()
                    .map(|(i, d)| match i {
                        0 => digit_str(d),
                        1 => format!("{}*{}", digit_str(d), p),
                        _ => format!("{}*{}^{}", digit_str(d), p, i),
                    })
                    .collect();
                write!(f, "{}^{} * ({})", p, v, parts.join(" + "))
            }
        }
    }
}

/// Plain serializable form of a [`PadicNumber`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicData {
    /// `None` encodes infinite valuation, i.e. zero.
    pub val: Option<i64>,
    pub digits: Vec<Vec<u64>>,
}

impl Serialize for PadicData {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = ser.serialize_struct("PadicData", 2)?;
        s.serialize_field("val", &self.val)?;
        if self.digits.iter().all(|d| d.len() == 1) {
            let flat: Vec<u64> = self.digits.iter().map(|d| d[0]).collect();
            s.serialize_field("digits", &flat)?;
        } else {
            s.serialize_field("digits", &self.digits)?;
        }
        s.end()
    }
}

impl<'de> Deserialize<'de> for PadicData {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            val: Option<i64>,
            digits: serde_json::Value,
        }
        let raw = Raw::deserialize(de)?;
        let digits: Vec<Vec<u64>> = match &raw.digits {
            serde_json::Value::Array(items) => {
                let mut out = Vec::with_capacity(items.len());
                for item in items {
                    match item {
                        serde_json::Value::Number(n) => {
                            let d = n.as_u64().ok_or_else(|| D::Error::custom("bad digit"))?;
                            out.push(vec![d]);
                        }
                        serde_json::Value::Array(inner) => {
                            let mut row = Vec::with_capacity(inner.len());
                            for c in inner {
                                let d = c
                                    .as_u64()
                                    .ok_or_else(|| D::Error::custom("bad digit coefficient"))?;
                                row.push(d);
                            }
                            out.push(row);
                        }
                        _ => return Err(D::Error::custom("digits must be numbers or arrays")),
                    }
                }
                out
            }
            _ => return Err(D::Error::custom("digits must be an array")),
        };
        Ok(PadicData { val: raw.val, digits })
    }
}

impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.to_data().serialize(ser)
    }
}

// ---------------------------------------------------------------------------
// Power coset representatives
// ---------------------------------------------------------------------------

/// Distinct representatives of `F_q^× / (F_q^×)^m`: exactly
/// `gcd(m, q-1)` elements, each the smallest member of its coset in the
/// fixed enumeration of `F_q`.
pub fn residue_power_coset_reps(m: u64, ctx: &FieldContext) -> Vec<ResidueElement> {
    assert!(m >= 1, "m must be positive");
    let q = ctx.q();
    // image of u -> u^m on F_q^x
    let mut is_power = vec![false; q as usize];
    for u in 1..q {
        is_power[ctx.r_pow(u, m) as usize] = true;
    }
    let powers: Vec<u64> = (1..q).filter(|&v| is_power[v as usize]).collect();
    let mut covered = vec![false; q as usize];
    let mut reps = Vec::new();
    for u in 1..q {
        if covered[u as usize] {
            continue;
        }
        reps.push(ctx.residue(u));
        for &s in &powers {
            covered[ctx.r_mul(u, s) as usize] = true;
        }
    }
    debug_assert_eq!(reps.len() as u64, gcd_u64(m, q - 1));
    reps
}

/// Representatives of `F^× / (F^×)^m`: the `m·gcd(m, q-1)` elements
/// `ϖ^j·u_i` with `0 ≤ j < m` and `u_i` the lifted residue representatives.
pub fn field_power_coset_reps(m: u64, ctx: &FieldContext) -> Vec<PadicNumber> {
    assert!(m >= 1, "m must be positive");
    let units = residue_power_coset_reps(m, ctx);
    let mut out = Vec::with_capacity(m as usize * units.len());
    for j in 0..m {
        for u in &units {
            out.push(u.lift().shift(j as i64));
        }
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let mut a = a;
    let mut b = b;
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(p: u64) -> FieldContext {
        FieldContext::new(p, 1).unwrap()
    }

    #[test]
    fn context_validation() {
        assert!(matches!(FieldContext::new(2, 1), Err(PadicError::InvalidContext(_))));
        assert!(matches!(FieldContext::new(9, 1), Err(PadicError::InvalidContext(_))));
        assert!(matches!(FieldContext::new(0, 1), Err(PadicError::InvalidContext(_))));
        assert!(FieldContext::new(3, 2).is_ok());
        assert!(matches!(
            FieldContext::with_precision(5, 1, 0),
            Err(PadicError::InvalidContext(_))
        ));
    }

    #[test]
    fn smallest_irreducible_for_f9_is_x2_plus_1() {
        let ctx = FieldContext::new(3, 2).unwrap();
        assert_eq!(ctx.poly(), &[1, 0]); // x^2 + 1
        assert_eq!(ctx.q(), 9);
    }

    #[test]
    fn with_poly_rejects_reducible() {
        // x^2 - 1 = (x-1)(x+1) over F_5
        assert!(matches!(
            FieldContext::with_poly(5, 2, 8, vec![4, 0]),
            Err(PadicError::InvalidContext(_))
        ));
        // x^2 + 2 is irreducible over F_5 (squares are 1, 4)
        assert!(FieldContext::with_poly(5, 2, 8, vec![2, 0]).is_ok());
    }

    #[test]
    fn ord_examples() {
        let ctx = qp(7);
        assert_eq!(PadicNumber::uniformizer(ctx.clone()).ord(), Some(1));
        assert_eq!(PadicNumber::one(ctx.clone()).ord(), Some(0));
        assert_eq!(PadicNumber::zero(ctx).ord(), None);
    }

    #[test]
    fn ac_examples() {
        let ctx = qp(5);
        assert!(PadicNumber::zero(ctx.clone()).ac().is_zero());
        assert_eq!(PadicNumber::uniformizer(ctx.clone()).ac().index(), 1);
        // p + p^2 has unit part 1 + p, which reduces to 1
        let x = PadicNumber::from_integer(ctx.clone(), 5 + 25);
        assert_eq!(x.ord(), Some(1));
        assert_eq!(x.ac().index(), 1);
    }

    #[test]
    fn arithmetic_examples() {
        let ctx = qp(5);
        let one = PadicNumber::one(ctx.clone());
        let sum = one.add(&one.neg()).unwrap();
        assert!(sum.is_zero());

        let pi = PadicNumber::uniformizer(ctx.clone());
        let sq = pi.mul(&pi).unwrap();
        assert_eq!(sq.ord(), Some(2));
        assert_eq!(sq.ac().index(), 1);

        // (1 + p)(1 - p) = 1 - p^2
        let a = PadicNumber::from_integer(ctx.clone(), 6);
        let b = PadicNumber::from_integer(ctx.clone(), -4);
        let prod = a.mul(&b).unwrap();
        let expected = PadicNumber::from_integer(ctx, 1 - 25);
        assert_eq!(prod, expected);
    }

    #[test]
    fn precision_loss_on_total_cancellation() {
        let ctx = FieldContext::with_precision(5, 1, 4).unwrap();
        let a = PadicNumber::from_integer(ctx.clone(), 7).inv().unwrap();
        // a is truncated; a - a cancels every stored digit
        assert_eq!(a.sub(&a), Err(PadicError::PrecisionLoss));
        // but exact values cancel to genuine zero
        let b = PadicNumber::from_integer(ctx, 7);
        assert!(b.sub(&b).unwrap().is_zero());
    }

    #[test]
    fn truncated_addition_tracks_remaining_digits() {
        let ctx = FieldContext::with_precision(5, 1, 6).unwrap();
        // 1/7 is truncated to 6 digits; adding a multiple of p shifts nothing
        let x = PadicNumber::from_integer(ctx.clone(), 7).inv().unwrap();
        assert_eq!(x.precision(), Precision::Digits(6));
        let y = x.mul(&PadicNumber::from_integer(ctx.clone(), 7)).unwrap();
        assert_eq!(y, PadicNumber::one(ctx.clone()));
        // cancellation of the leading digit costs precision:
        // x has leading digit 3 (1/7 = 3 + ... in Z_5); subtract 3
        let three = PadicNumber::from_integer(ctx.clone(), 3);
        let diff = x.sub(&three).unwrap();
        assert!(diff.ord().unwrap() >= 1);
        match diff.precision() {
            Precision::Digits(n) => assert!(n < 6),
            Precision::Exact => panic!("difference cannot be exact"),
        }
    }

    #[test]
    fn inversion() {
        let ctx = qp(7);
        for n in [1i64, -1, 2, 6, 12, 7 * 3, -49 * 5] {
            let x = PadicNumber::from_integer(ctx.clone(), n);
            let prod = x.mul(&x.inv().unwrap()).unwrap();
            assert_eq!(prod, PadicNumber::one(ctx.clone()), "n = {n}");
        }
        assert_eq!(
            PadicNumber::zero(ctx).inv(),
            Err(PadicError::InversionOfZero)
        );
    }

    #[test]
    fn inversion_in_extension() {
        let ctx = FieldContext::new(3, 2).unwrap();
        // x + 2 is a unit in the unramified extension
        let x = PadicNumber::from_unit(ctx.clone(), 0, vec![BigInt::from(2), BigInt::from(1)]).unwrap();
        let prod = x.mul(&x.inv().unwrap()).unwrap();
        assert_eq!(prod, PadicNumber::one(ctx));
    }

    #[test]
    fn residue_reps_m3_q7() {
        let ctx = qp(7);
        let reps = residue_power_coset_reps(3, &ctx);
        // cubes in F_7^x are {1, 6}; cosets {1,6}, {2,5}, {3,4}
        assert_eq!(reps.iter().map(|r| r.index()).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn residue_reps_m3_q5() {
        let ctx = qp(5);
        let reps = residue_power_coset_reps(3, &ctx);
        assert_eq!(reps.iter().map(|r| r.index()).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn residue_reps_m1() {
        for p in [3, 5, 7, 11] {
            let reps = residue_power_coset_reps(1, &qp(p));
            assert_eq!(reps.len(), 1);
            assert_eq!(reps[0].index(), 1);
        }
    }

    #[test]
    fn field_reps_counts() {
        let c7 = qp(7);
        assert_eq!(field_power_coset_reps(3, &c7).len(), 9);
        let c5 = qp(5);
        let reps = field_power_coset_reps(3, &c5);
        assert_eq!(reps.len(), 3);
        let vals: Vec<i64> = reps.iter().map(|r| r.ord().unwrap()).collect();
        assert_eq!(vals, vec![0, 1, 2]);
        // m = 2: {1, eps, pi, eps*pi} for any odd q
        for p in [3, 5, 7, 11, 13] {
            let ctx = qp(p);
            let reps = field_power_coset_reps(2, &ctx);
            assert_eq!(reps.len(), 4);
            assert_eq!(reps[1].ac(), ctx.epsilon());
        }
    }

    #[test]
    fn field_reps_pairwise_inequivalent() {
        // distinct reps differ in ord mod m, or have ac-ratio that is not
        // an m-th power
        for p in [5u64, 7] {
            let ctx = qp(p);
            for m in 1..=4u64 {
                let reps = field_power_coset_reps(m, &ctx);
                let mth_powers: Vec<u64> = (1..ctx.q()).map(|u| ctx.r_pow(u, m)).collect();
                for (i, a) in reps.iter().enumerate() {
                    for b in reps.iter().skip(i + 1) {
                        let (va, vb) = (a.ord().unwrap(), b.ord().unwrap());
                        if (va - vb).rem_euclid(m as i64) != 0 {
                            continue;
                        }
                        let ratio = a.ac().mul(&b.ac().inv().unwrap());
                        assert!(
                            !mth_powers.contains(&ratio.index()),
                            "reps {i} and later collide for p={p}, m={m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn legendre_examples() {
        let c7 = qp(7);
        assert_eq!(legendre(&c7.residue(1)).unwrap(), 1);
        assert_eq!(legendre(&c7.residue(3)).unwrap(), -1);
        let c5 = qp(5);
        assert_eq!(legendre(&c5.residue(4)).unwrap(), 1);
        assert_eq!(legendre(&c5.residue(0)), Err(PadicError::ZeroInput));
    }

    #[test]
    fn epsilon_is_smallest_nonresidue() {
        assert_eq!(qp(7).epsilon().index(), 3); // squares mod 7: 1,2,4
        assert_eq!(qp(5).epsilon().index(), 2);
        assert_eq!(qp(3).epsilon().index(), 2);
        let f9 = FieldContext::new(3, 2).unwrap();
        assert_eq!(legendre(&f9.epsilon()).unwrap(), -1);
    }

    #[test]
    fn display_and_data_round_trip() {
        let ctx = FieldContext::with_precision(7, 1, 8).unwrap();
        let x = PadicNumber::from_integer(ctx.clone(), 7 * (3 + 2 * 7));
        assert_eq!(x.to_string(), "7^1 * (3 + 2*7)");
        let data = x.to_data();
        let json = serde_json::to_string(&data).unwrap();
        let back: PadicData = serde_json::from_str(&json).unwrap();
        assert_eq!(back, data);
        let y = PadicNumber::from_data(&ctx, &back).unwrap();
        assert_eq!(x, y);

        let zero = PadicNumber::zero(ctx.clone());
        let z = PadicNumber::from_data(&ctx, &zero.to_data()).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn residue_field_extension_arithmetic() {
        let ctx = FieldContext::new(3, 2).unwrap(); // F_9 = F_3[x]/(x^2+1)
        let x = ctx.residue(3); // the element "x"
        let sq = x.mul(&x);
        assert_eq!(sq.index(), 2); // x^2 = -1 = 2
        // multiplicative order of a generator divides q - 1 = 8
        for v in 1..9 {
            let e = ctx.residue(v);
            assert_eq!(e.pow(8).index(), 1);
        }
    }

    #[test]
    fn power_coset_reps_in_extension() {
        let f9 = FieldContext::new(3, 2).unwrap();
        // q - 1 = 8: gcd(2, 8) = 2 square classes
        assert_eq!(residue_power_coset_reps(2, &f9).len(), 2);
        // gcd(4, 8) = 4
        assert_eq!(residue_power_coset_reps(4, &f9).len(), 4);
    }
}
