//! 2×2 matrices over prime fields and the projective groups PGL₂(p), PSL₂(p).
//!
//! Matrices act on row vectors from the right, `[u, v] ↦ [u, v]·M`, so the
//! permutation of a product `M·N` is "M then N". The projective line is
//! indexed `0, 1, …, p−1, ∞` with `∞` last.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Largest prime accepted for projective-line permutation models.
pub const MAX_PRIME: u64 = 97;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if p > 2 && p <= MAX_PRIME && is_prime(p) {
        Ok(())
    } else {
        Err(Error::BadPrime(p))
    }
}

pub fn residue(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime; zero has none.
pub fn mod_inv(v: u64, p: u64) -> Option<u64> {
    let v = v % p;
    (v != 0).then(|| mod_pow(v, p - 2, p))
}

/// Euler's criterion. Zero counts as a square.
pub fn is_square(v: u64, p: u64) -> bool {
    let v = v % p;
    v == 0 || mod_pow(v, (p - 1) / 2, p) == 1
}

pub fn sqrt_mod(v: u64, p: u64) -> Option<u64> {
    let v = v % p;
    (0..p).find(|r| r * r % p == v)
}

/// Multiplicative order of a nonzero residue.
pub fn mult_order(v: u64, p: u64) -> Option<u64> {
    let v = v % p;
    if v == 0 {
        return None;
    }
    let mut acc = v;
    let mut k = 1;
    while acc != 1 {
        acc = acc * v % p;
        k += 1;
    }
    Some(k)
}

/// Smallest residue of the given multiplicative order.
pub fn element_of_order(order: u64, p: u64) -> Option<u64> {
    (1..p).find(|&v| mult_order(v, p) == Some(order))
}

pub fn primitive_root(p: u64) -> Option<u64> {
    element_of_order(p - 1, p)
}

/// Symmetric representative in `(−p/2, p/2]`.
pub fn signed(v: u64, p: u64) -> i64 {
    let v = (v % p) as i64;
    if v > p as i64 / 2 {
        v - p as i64
    } else {
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    p: u64,
    e: [u64; 4],
}

impl Mat2 {
    /// Entries in reading order `a, b, c, d`; singular matrices are rejected.
    pub fn new(p: u64, entries: [i64; 4]) -> Result<Mat2> {
        check_prime(p)?;
        let m = Mat2 {
            p,
            e: entries.map(|v| residue(v, p)),
        };
        if m.det() == 0 {
            return Err(Error::Singular);
        }
        Ok(m)
    }

    fn raw(p: u64, e: [u64; 4]) -> Mat2 {
        Mat2 { p, e }
    }

    pub fn identity(p: u64) -> Mat2 {
        Mat2::raw(p, [1, 0, 0, 1])
    }

    pub fn diag(p: u64, d1: i64, d2: i64) -> Result<Mat2> {
        Mat2::new(p, [d1, 0, 0, d2])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> [u64; 4] {
        self.e
    }

    pub fn signed_entries(&self) -> [i64; 4] {
        self.e.map(|v| signed(v, self.p))
    }

    pub fn det(&self) -> u64 {
        let [a, b, c, d] = self.e;
        let p = self.p;
        (a * d % p + p - b * c % p) % p
    }

    pub fn trace(&self) -> u64 {
        (self.e[0] + self.e[3]) % self.p
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let p = self.p;
        let [a, b, c, d] = self.e;
        let [e, f, g, h] = other.e;
        Mat2::raw(
            p,
            [
                (a * e + b * g) % p,
                (a * f + b * h) % p,
                (c * e + d * g) % p,
                (c * f + d * h) % p,
            ],
        )
    }

    pub fn scale(&self, k: u64) -> Mat2 {
        Mat2::raw(self.p, self.e.map(|v| v * (k % self.p) % self.p))
    }

    pub fn inverse(&self) -> Mat2 {
        let p = self.p;
        let inv = mod_inv(self.det(), p).expect("nonsingular");
        let [a, b, c, d] = self.e;
        Mat2::raw(p, [d, (p - b) % p, (p - c) % p, a]).scale(inv)
    }

    pub fn pow(&self, mut k: u64) -> Mat2 {
        let mut acc = Mat2::identity(self.p);
        let mut base = *self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_scalar(&self) -> bool {
        self.e[1] == 0 && self.e[2] == 0 && self.e[0] == self.e[3]
    }

    /// Eigenvalues in F_p, when the characteristic polynomial splits.
    pub fn spectrum(&self) -> Spectrum {
        let p = self.p;
        let t = self.trace();
        let disc = (t * t % p + p - 4 * self.det() % p) % p;
        match sqrt_mod(disc, p) {
            None => Spectrum::Irrational,
            Some(s) => {
                let half = mod_inv(2, p).expect("odd prime");
                let l1 = (t + s) % p * half % p;
                let l2 = (t + p - s) % p * half % p;
                Spectrum::Split(l1.min(l2), l1.max(l2))
            }
        }
    }

    fn act(&self, point: ProjPoint) -> ProjPoint {
        let p = self.p;
        let [a, b, c, d] = self.e;
        let (u, v) = match point {
            ProjPoint::Finite(t) => ((t * a + c) % p, (t * b + d) % p),
            ProjPoint::Infinity => (a, b),
        };
        if v == 0 {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(u * mod_inv(v, p).expect("nonzero") % p)
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.signed_entries();
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.p)
    }
}

impl FromStr for Mat2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mat2> {
        let bad = || Error::Parse {
            what: "matrix",
            input: s.to_string(),
        };
        let (body, modulus) = s.split_once("mod").ok_or_else(bad)?;
        let p: u64 = modulus.trim().parse().map_err(|_| bad())?;
        let nums: Vec<i64> = body
            .split(|ch: char| !(ch.is_ascii_digit() || ch == '-'))
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let entries: [i64; 4] = nums.try_into().map_err(|_| bad())?;
        Mat2::new(p, entries)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spectrum {
    Split(u64, u64),
    Irrational,
}

impl Spectrum {
    /// `λ₁/λ₂` for the stored order of eigenvalues.
    pub fn ratio(&self, p: u64) -> Option<u64> {
        match *self {
            Spectrum::Split(l1, l2) => mod_inv(l2, p).map(|i| l1 * i % p),
            Spectrum::Irrational => None,
        }
    }

    /// Whether the ratio equals `r` up to inversion.
    pub fn ratio_is(&self, r: u64, p: u64) -> bool {
        match self.ratio(p) {
            Some(q) => q == r % p || Some(q) == mod_inv(r, p),
            None => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(u64),
    Infinity,
}

impl ProjPoint {
    pub fn index(&self, p: u64) -> usize {
        match *self {
            ProjPoint::Finite(t) => t as usize,
            ProjPoint::Infinity => p as usize,
        }
    }

    pub fn from_index(i: usize, p: u64) -> ProjPoint {
        if i as u64 == p {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(i as u64)
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(t) => write!(f, "{t}"),
            ProjPoint::Infinity => write!(f, "∞"),
        }
    }
}

/// A matrix modulo scalars, stored with its first nonzero entry equal to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProjElement(Mat2);

impl ProjElement {
    pub fn from_mat(m: &Mat2) -> ProjElement {
        let lead = *m.e.iter().find(|&&v| v != 0).expect("nonsingular");
        ProjElement(m.scale(mod_inv(lead, m.p).expect("nonzero")))
    }

    pub fn identity(p: u64) -> ProjElement {
        ProjElement(Mat2::identity(p))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn prime(&self) -> u64 {
        self.0.p
    }

    pub fn mul(&self, other: &ProjElement) -> ProjElement {
        ProjElement::from_mat(&self.0.mul(&other.0))
    }

    pub fn inverse(&self) -> ProjElement {
        ProjElement::from_mat(&self.0.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_scalar()
    }

    /// Order in PGL₂(p), by iterated multiplication.
    pub fn order(&self) -> u64 {
        let mut acc = self.0;
        let mut k = 1;
        while !acc.is_scalar() {
            acc = acc.mul(&self.0);
            k += 1;
        }
        k
    }

    /// Membership in PSL₂(p): the determinant is a square.
    pub fn in_psl(&self) -> bool {
        is_square(self.0.det(), self.0.p)
    }

    pub fn apply(&self, point: ProjPoint) -> ProjPoint {
        self.0.act(point)
    }

    /// Permutation of the projective line, on `p + 1` points.
    pub fn to_perm(&self) -> Permutation {
        let p = self.0.p;
        let images = (0..=p as usize)
            .map(|i| self.apply(ProjPoint::from_index(i, p)).index(p) as u32)
            .collect();
        Permutation::from_images(images).expect("projective maps are bijective")
    }

    pub fn fixed_points(&self) -> Vec<ProjPoint> {
        let p = self.0.p;
        (0..=p as usize)
            .map(|i| ProjPoint::from_index(i, p))
            .filter(|&pt| self.apply(pt) == pt)
            .collect()
    }
}

impl fmt::Display for ProjElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn proj_order(e: &ProjElement) -> u64 {
    e.order()
}

pub fn in_psl(e: &ProjElement) -> bool {
    e.in_psl()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearKind {
    Pgl,
    Psl,
}

/// PGL₂(p) or PSL₂(p) as a permutation group on the projective line.
#[derive(Clone, Debug)]
pub struct MatGroupHandle {
    p: u64,
    kind: LinearKind,
    group: PermGroup,
}

impl MatGroupHandle {
    pub fn pgl2(p: u64) -> Result<MatGroupHandle> {
        check_prime(p)?;
        let g = primitive_root(p).expect("prime field");
        let gens = [
            Mat2::diag(p, g as i64, 1)?,
            Mat2::new(p, [1, 1, 0, 1])?,
            Mat2::new(p, [0, 1, 1, 0])?,
        ];
        MatGroupHandle::from_mats(p, LinearKind::Pgl, &gens)
    }

    pub fn psl2(p: u64) -> Result<MatGroupHandle> {
        check_prime(p)?;
        let gens = [Mat2::new(p, [1, 1, 0, 1])?, Mat2::new(p, [1, 0, 1, 1])?];
        MatGroupHandle::from_mats(p, LinearKind::Psl, &gens)
    }

    fn from_mats(p: u64, kind: LinearKind, gens: &[Mat2]) -> Result<MatGroupHandle> {
        let perms: Vec<Permutation> = gens
            .iter()
            .map(|m| ProjElement::from_mat(m).to_perm())
            .collect();
        let group = PermGroup::from_generators(&perms)?;
        Ok(MatGroupHandle { p, kind, group })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> LinearKind {
        self.kind
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn perm_of(&self, e: &ProjElement) -> Permutation {
        e.to_perm()
    }

    pub fn contains(&self, e: &ProjElement) -> bool {
        e.prime() == self.p && (self.kind == LinearKind::Pgl || e.in_psl())
    }

    /// Expected order from the standard formula.
    pub fn formula_order(&self) -> BigUint {
        let p = BigUint::from(self.p);
        let full = &p * (&p - 1u32) * (&p + 1u32);
        match self.kind {
            LinearKind::Pgl => full,
            LinearKind::Psl => full / 2u32,
        }
    }
}

pub fn pgl2_as_perm_group(p: u64) -> Result<MatGroupHandle> {
    MatGroupHandle::pgl2(p)
}

pub fn psl2_as_perm_group(p: u64) -> Result<MatGroupHandle> {
    MatGroupHandle::psl2(p)
}

/// GL₂(p) acting on the nonzero row vectors of F_p², listed lexicographically.
pub fn gl2_on_vectors(p: u64) -> Result<PermGroup> {
    check_prime(p)?;
    let vectors: Vec<(u64, u64)> = (0..p)
        .flat_map(|u| (0..p).map(move |v| (u, v)))
        .filter(|&(u, v)| u != 0 || v != 0)
        .collect();
    let index = |u: u64, v: u64| vectors.iter().position(|&w| w == (u, v)).expect("vector");
    let g = primitive_root(p).expect("prime field");
    let mats = [
        Mat2::new(p, [1, 1, 0, 1])?,
        Mat2::new(p, [1, 0, 1, 1])?,
        Mat2::diag(p, g as i64, 1)?,
    ];
    let perms: Vec<Permutation> = mats
        .iter()
        .map(|m| {
            let [a, b, c, d] = m.entries();
            let images = vectors
                .iter()
                .map(|&(u, v)| index((u * a + v * c) % p, (u * b + v * d) % p) as u32)
                .collect();
            Permutation::from_images(images).expect("invertible")
        })
        .collect();
    PermGroup::from_generators(&perms)
}

/// A triple `x·y·z = 1` of projective elements with the matrices it came from.
#[derive(Clone, Debug)]
pub struct ProjTriple {
    pub x: ProjElement,
    pub y: ProjElement,
    pub z: ProjElement,
    pub mats: [Mat2; 3],
    pub params: LinearParams,
}

impl ProjTriple {
    pub fn elements(&self) -> [ProjElement; 3] {
        [self.x, self.y, self.z]
    }

    pub fn orders(&self) -> [u64; 3] {
        [self.x.order(), self.y.order(), self.z.order()]
    }

    pub fn perms(&self) -> [Permutation; 3] {
        [self.x.to_perm(), self.y.to_perm(), self.z.to_perm()]
    }
}

/// Parameters `d, a, b, c` of the trace-zero matrix `X = [[a,b],[c,−a]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearParams {
    pub p: u64,
    pub d: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

fn trace_zero(p: u64, a: u64, b: u64, c: u64) -> Result<Mat2> {
    Mat2::new(p, [a as i64, b as i64, c as i64, -(a as i64)])
}

fn precondition(ok: bool, msg: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(msg.into()))
    }
}

/// Involution `X`, `Y = diag(d, 1)` and `Z = (XY)⁻¹` in PGL₂(p).
#[derive(Clone, Debug)]
pub struct Example7Triple {
    pub triple: ProjTriple,
    pub z_spectrum: Spectrum,
    /// `Z`'s eigenvalue ratio equals `d^{±1}`.
    pub swap: bool,
}

pub fn build_example7_triple(n: u64, p: u64, d: u64, a: i64, b: i64, c: i64) -> Result<Example7Triple> {
    check_prime(p)?;
    precondition(n >= 2, "n must be at least 2")?;
    precondition(p % (4 * n) == (2 * n + 1) % (4 * n), format!("p ≢ 2n+1 mod 4n for n={n}, p={p}"))?;
    precondition(mult_order(d, p) == Some(2 * n), format!("d={d} does not have order 2n={}", 2 * n))?;
    let (a, b, c) = (residue(a, p), residue(b, p), residue(c, p));
    precondition((a * a + b * c + 1) % p == 0, "a²+bc+1 ≢ 0")?;
    precondition(b * c % p != 0, "bc ≡ 0")?;
    precondition((a * a + 1) % p != 0, "a² ≡ −1 forces d of order dividing 4")?;
    let xm = trace_zero(p, a, b, c)?;
    let ym = Mat2::diag(p, d as i64, 1)?;
    let zm = xm.mul(&ym).inverse();
    let triple = ProjTriple {
        x: ProjElement::from_mat(&xm),
        y: ProjElement::from_mat(&ym),
        z: ProjElement::from_mat(&zm),
        mats: [xm, ym, zm],
        params: LinearParams { p, d, a, b, c },
    };
    let orders = triple.orders();
    if orders != [2, 2 * n, 2 * n] {
        return Err(Error::InvalidTriple(format!("orders {orders:?}, expected (2,{0},{0})", 2 * n)));
    }
    if !triple.x.in_psl() || triple.y.in_psl() {
        return Err(Error::InvalidTriple("x must lie in PSL₂(p) and y outside it".into()));
    }
    let z_spectrum = zm.spectrum();
    let swap = z_spectrum.ratio_is(d, p);
    Ok(Example7Triple {
        triple,
        z_spectrum,
        swap,
    })
}

/// Smallest `b ≥ 1` with `c = target/b`.
fn split_product(target: u64, p: u64) -> Option<(u64, u64)> {
    if target.is_multiple_of(p) {
        return None;
    }
    let b = 1;
    Some((b, target % p * mod_inv(b, p)? % p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example7Variant {
    Swap,
    NoSwap,
}

/// Deterministic parameter choice: least `d` of order 2n, then for the
/// swap variant `a = (d+1)/(d−1)`, and for the other variant the least
/// `a ≥ 1` whose eigenvalue ratio avoids `d^{±1}` and whose triple
/// generates PGL₂(p); `b` is the least admissible value.
pub fn example7_default_triple(n: u64, p: u64, variant: Example7Variant) -> Result<Example7Triple> {
    check_prime(p)?;
    let d = element_of_order(2 * n, p)
        .ok_or_else(|| Error::Precondition(format!("no element of order {} mod {p}", 2 * n)))?;
    let swap_a = (d + 1) % p * mod_inv((d + p - 1) % p, p).ok_or(Error::Precondition("d = 1".into()))? % p;
    let candidates: Vec<u64> = match variant {
        Example7Variant::Swap => vec![swap_a],
        Example7Variant::NoSwap => (1..p).filter(|&a| a != swap_a).collect(),
    };
    let pgl = MatGroupHandle::pgl2(p)?;
    for a in candidates {
        if (a * a + 1) % p == 0 {
            continue;
        }
        let Some((b, c)) = split_product(p - (a * a + 1) % p, p) else {
            continue;
        };
        let Ok(t) = build_example7_triple(n, p, d, a as i64, b as i64, c as i64) else {
            continue;
        };
        let wanted_swap = variant == Example7Variant::Swap;
        if t.swap != wanted_swap {
            continue;
        }
        let gens = t.triple.perms();
        let g = PermGroup::from_generators(&gens)?;
        if g.order() == pgl.group().order() {
            return Ok(t);
        }
    }
    Err(Error::Construction(format!(
        "no admissible parameters for n={n}, p={p}, {variant:?}"
    )))
}

/// Triple of orders (2, 4n, 2n) in PSL₂(p) with `Z = diag(d, 1/d)`, returned
/// as `(x, z, y)` with `y = (zx)⁻¹`.
#[derive(Clone, Debug)]
pub struct Example11Triple {
    pub x: ProjElement,
    pub z: ProjElement,
    pub y: ProjElement,
    pub mats: [Mat2; 3],
    pub params: LinearParams,
}

impl Example11Triple {
    /// Roles assigned by order: `(x, y, z)` of type (2, 2n, 4n), `x·y·z = 1`.
    pub fn as_triple(&self) -> ProjTriple {
        ProjTriple {
            x: self.x,
            y: self.y,
            z: self.z,
            mats: [self.mats[0], self.mats[2], self.mats[1]],
            params: self.params,
        }
    }
}

pub fn build_example11_triple(n: u64, p: u64, d: u64) -> Result<Example11Triple> {
    check_prime(p)?;
    precondition(n >= 2, "n must be at least 2")?;
    precondition(p % (8 * n) == 1, format!("p ≢ 1 mod 8n for n={n}, p={p}"))?;
    precondition(mult_order(d, p) == Some(8 * n), format!("d={d} does not have order 8n={}", 8 * n))?;
    let d3 = mod_pow(d, 3, p);
    let denom = mod_inv((d + p - d3) % p, p).ok_or(Error::Precondition("d = d³".into()))?;
    let a = (mod_pow(d, 4, p) + 1) % p * denom % p;
    let (b, c) = split_product(p - (a * a + 1) % p, p)
        .ok_or_else(|| Error::Precondition("a² ≡ −1 leaves bc = 0".into()))?;
    let xm = trace_zero(p, a, b, c)?;
    let dinv = mod_inv(d, p).expect("nonzero");
    let zm = Mat2::diag(p, d as i64, dinv as i64)?;
    let ym = zm.mul(&xm).inverse();
    let out = Example11Triple {
        x: ProjElement::from_mat(&xm),
        z: ProjElement::from_mat(&zm),
        y: ProjElement::from_mat(&ym),
        mats: [xm, zm, ym],
        params: LinearParams { p, d, a, b, c },
    };
    let orders = [out.x.order(), out.z.order(), out.y.order()];
    if orders != [2, 4 * n, 2 * n] {
        return Err(Error::InvalidTriple(format!("orders {orders:?}, expected (2,{},{})", 4 * n, 2 * n)));
    }
    if ![out.x, out.y, out.z].iter().all(ProjElement::in_psl) {
        return Err(Error::InvalidTriple("triple must lie in PSL₂(p)".into()));
    }
    let g = PermGroup::from_generators(&[out.x.to_perm(), out.z.to_perm()])?;
    let psl = MatGroupHandle::psl2(p)?;
    if g.order() != psl.group().order() {
        return Err(Error::Construction("x and z do not generate PSL₂(p)".into()));
    }
    Ok(out)
}

/// `X` outside PSL, `Y = diag(d, 1/d)`, `Z = (XY)⁻¹` of orders (2, 2n, 4n).
pub fn build_example13_triple(n: u64, p: u64, d: u64, a: i64, b: i64, c: i64) -> Result<ProjTriple> {
    check_prime(p)?;
    precondition(n >= 2, "n must be at least 2")?;
    precondition(p % (8 * n) == (4 * n + 1) % (8 * n), format!("p ≢ 4n+1 mod 8n for n={n}, p={p}"))?;
    precondition(mult_order(d, p) == Some(4 * n), format!("d={d} does not have order 4n={}", 4 * n))?;
    let (a, b, c) = (residue(a, p), residue(b, p), residue(c, p));
    precondition(b * c % p != 0, "bc ≡ 0")?;
    let ainv = mod_inv(a, p).ok_or(Error::Precondition("a ≡ 0".into()))?;
    let dinv = mod_inv(d, p).expect("nonzero");
    let lhs = (ainv * ainv % p * (b * c % p) + d + dinv) % p;
    precondition(lhs == 1, "a⁻²bc + d + d⁻¹ ≢ 1")?;
    precondition(!is_square((a * a + b * c) % p, p), "a²+bc is a square")?;
    let xm = trace_zero(p, a, b, c)?;
    let ym = Mat2::diag(p, d as i64, dinv as i64)?;
    let zm = xm.mul(&ym).inverse();
    let triple = ProjTriple {
        x: ProjElement::from_mat(&xm),
        y: ProjElement::from_mat(&ym),
        z: ProjElement::from_mat(&zm),
        mats: [xm, ym, zm],
        params: LinearParams { p, d, a, b, c },
    };
    let orders = triple.orders();
    if orders != [2, 2 * n, 4 * n] {
        return Err(Error::InvalidTriple(format!("orders {orders:?}, expected (2,{},{})", 2 * n, 4 * n)));
    }
    if triple.x.in_psl() || !triple.y.in_psl() {
        return Err(Error::InvalidTriple("x must lie outside PSL₂(p) and y inside it".into()));
    }
    let g = PermGroup::from_generators(&[triple.y.to_perm(), triple.z.to_perm()])?;
    let pgl = MatGroupHandle::pgl2(p)?;
    if g.order() != pgl.group().order() {
        return Err(Error::Construction("y and z do not generate PGL₂(p)".into()));
    }
    Ok(triple)
}

/// Least `d` of order 4n, least `a ≥ 1` with `bc = a²(1 − d − d⁻¹) ≠ 0`, `b = 1`.
pub fn example13_default_triple(n: u64, p: u64) -> Result<ProjTriple> {
    check_prime(p)?;
    let d = element_of_order(4 * n, p)
        .ok_or_else(|| Error::Precondition(format!("no element of order {} mod {p}", 4 * n)))?;
    let dinv = mod_inv(d, p).expect("nonzero");
    let factor = (1 + 2 * p - d - dinv) % p;
    let mut last = None;
    for a in 1..p {
        let Some((b, c)) = split_product(a * a % p * factor % p, p) else {
            continue;
        };
        match build_example13_triple(n, p, d, a as i64, b as i64, c as i64) {
            Ok(t) => return Ok(t),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Construction(format!("no admissible parameters for n={n}, p={p}"))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermGroup;

    fn m(p: u64, e: [i64; 4]) -> Mat2 {
        Mat2::new(p, e).unwrap()
    }

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(mult_order(3, 17), Some(16));
        assert_eq!(primitive_root(17), Some(3));
        assert!(!is_square(3, 17));
        assert!(is_square(2, 17));
        assert_eq!(mod_inv(3, 17), Some(6));
        assert_eq!(signed(16, 17), -1);
    }

    #[test]
    fn projective_orders() {
        assert_eq!(ProjElement::identity(17).order(), 1);
        let y = ProjElement::from_mat(&Mat2::diag(17, 3, 1).unwrap());
        assert_eq!(proj_order(&y), 16);
        assert!(!in_psl(&y));
        let x = ProjElement::from_mat(&m(17, [2, 3, 4, -2]));
        assert_eq!(proj_order(&x), 2);
        assert!(in_psl(&x));
        assert!(in_psl(&ProjElement::identity(17)));
    }

    #[test]
    fn scalar_multiples_coincide() {
        let a = m(13, [2, 5, 7, 1]);
        assert_eq!(ProjElement::from_mat(&a), ProjElement::from_mat(&a.scale(6)));
        assert_ne!(ProjElement::from_mat(&a), ProjElement::from_mat(&m(13, [2, 5, 7, 2])));
    }

    #[test]
    fn matrix_text_round_trip() {
        let z = m(17, [5, -1, -4, 2]);
        assert_eq!(z.to_string(), "[[5,-1],[-4,2]] mod 17");
        assert_eq!(z.to_string().parse::<Mat2>().unwrap(), z);
        assert!(matches!("[[1,1],[1,1]] mod 5".parse::<Mat2>(), Err(Error::Singular)));
        assert!("[[1,2],[3]] mod 5".parse::<Mat2>().is_err());
    }

    #[test]
    fn perm_images_are_homomorphic() {
        let a = ProjElement::from_mat(&m(11, [2, 5, 7, 3]));
        let b = ProjElement::from_mat(&m(11, [0, 1, 1, 3]));
        assert_eq!(a.mul(&b).to_perm(), a.to_perm().then(&b.to_perm()));
        assert_eq!(a.inverse().to_perm(), a.to_perm().inverse());
        assert_eq!(a.to_perm().order(), a.order());
    }

    #[test]
    fn group_orders() {
        for p in [3u64, 5, 7, 11, 13, 17] {
            let pgl = pgl2_as_perm_group(p).unwrap();
            assert_eq!(pgl.group().order(), &pgl.formula_order());
            assert_eq!(pgl.group().degree(), p as usize + 1);
            let psl = psl2_as_perm_group(p).unwrap();
            assert_eq!(psl.group().order(), &psl.formula_order());
        }
        assert_eq!(pgl2_as_perm_group(3).unwrap().group().order(), &BigUint::from(24u32));
        assert_eq!(pgl2_as_perm_group(7).unwrap().group().order(), &BigUint::from(336u32));
        assert_eq!(pgl2_as_perm_group(17).unwrap().group().order(), &BigUint::from(4896u32));
        assert!(matches!(pgl2_as_perm_group(101), Err(Error::BadPrime(101))));
        assert!(matches!(pgl2_as_perm_group(9), Err(Error::BadPrime(9))));
    }

    #[test]
    fn gl2_3_on_nonzero_vectors() {
        let g = gl2_on_vectors(3).unwrap();
        assert_eq!(g.degree(), 8);
        assert_eq!(g.order(), &BigUint::from(48u32));
    }

    #[test]
    fn example7_published_matrices() {
        let swap = build_example7_triple(8, 17, 3, 2, 3, 4).unwrap();
        assert_eq!(swap.triple.mats[2], m(17, [5, -1, -4, 2]));
        assert_eq!(swap.z_spectrum, Spectrum::Split(1, 6));
        assert!(swap.swap);
        assert_eq!(swap.triple.orders(), [2, 16, 16]);

        let noswap = build_example7_triple(8, 17, 3, -1, 2, -1).unwrap();
        assert_eq!(noswap.triple.mats[2], m(17, [6, 5, 1, -1]));
        assert_eq!(noswap.z_spectrum, Spectrum::Split(2, 3));
        assert!(!noswap.swap);
        assert_eq!(noswap.z_spectrum.ratio(17), Some(residue(-5, 17)));
        assert!(noswap.z_spectrum.ratio_is(residue(-5, 17), 17));
    }

    #[test]
    fn example7_rejects_bad_parameters() {
        // a² = −1 with a = 4 mod 17
        assert!(matches!(build_example7_triple(8, 17, 3, 4, 1, 0), Err(Error::Precondition(_))));
        assert!(matches!(build_example7_triple(8, 19, 3, 2, 3, 4), Err(Error::Precondition(_))));
        assert!(matches!(build_example7_triple(8, 17, 2, 2, 3, 4), Err(Error::Precondition(_))));
        assert!(matches!(build_example7_triple(8, 17, 3, 2, 3, 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn example7_defaults_generate() {
        let pgl = pgl2_as_perm_group(17).unwrap();
        for variant in [Example7Variant::Swap, Example7Variant::NoSwap] {
            let t = example7_default_triple(8, 17, variant).unwrap();
            assert_eq!(t.swap, variant == Example7Variant::Swap);
            let g = PermGroup::from_generators(&t.triple.perms()).unwrap();
            assert!(g.same_group(pgl.group()));
        }
    }

    #[test]
    fn example11_triples() {
        let t = build_example11_triple(2, 17, 3).unwrap();
        assert_eq!([t.x.order(), t.z.order(), t.y.order()], [2, 8, 4]);
        assert!(t.z.mul(&t.x).mul(&t.y).is_identity());
        let g = PermGroup::from_generators(&[t.x.to_perm(), t.z.to_perm()]).unwrap();
        assert_eq!(g.order(), &BigUint::from(2448u32));
        let d = element_of_order(16, 97).unwrap();
        let t = build_example11_triple(2, 97, d).unwrap();
        assert_eq!([t.x.order(), t.z.order(), t.y.order()], [2, 8, 4]);
        assert!(matches!(build_example11_triple(2, 17, 9), Err(Error::Precondition(_))));
    }

    #[test]
    fn example13_triples() {
        let t = example13_default_triple(3, 13).unwrap();
        assert_eq!(t.orders(), [2, 6, 12]);
        assert!(t.x.mul(&t.y).mul(&t.z).is_identity());
        let g = PermGroup::from_generators(&t.perms()).unwrap();
        assert_eq!(g.order(), &BigUint::from(2184u32));
        let t = example13_default_triple(3, 37).unwrap();
        assert_eq!(t.orders(), [2, 6, 12]);
        let LinearParams { d, a, .. } = t.params;
        assert!(matches!(
            build_example13_triple(3, 37, d, a as i64, 0, 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn psl_membership_is_a_homomorphism() {
        let p = 13;
        let mats: Vec<Mat2> = (1..6)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .filter_map(|(a, b)| Mat2::new(p, [a, b, 3, 2 * a + 1]).ok())
            .collect();
        for s in &mats {
            for t in &mats {
                let (e, f) = (ProjElement::from_mat(s), ProjElement::from_mat(t));
                assert_eq!(e.mul(&f).in_psl(), e.in_psl() == f.in_psl());
            }
        }
    }
}
