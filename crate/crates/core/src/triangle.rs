//! Triangle-group signatures, Riemann–Hurwitz arithmetic, Singerman's list of
//! inclusions, and the index-two constructions that turn one generating
//! triple into a pair of regular dessins on a common surface.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{find_swapping_conjugator, fingerprint, Fingerprint, PermGroup, ENUMERATION_BOUND};
use crate::hypermap::{materializable, regular_hypermap_bounded, Role};
use crate::perm::Permutation;
use crate::report::{bigint_as_number, biguint_as_number};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleType {
    pub l: u64,
    pub m: u64,
    pub n: u64,
}

impl TriangleType {
    /// Periods must be positive; period 1 is admitted for spherical quotients.
    pub fn new(l: u64, m: u64, n: u64) -> Result<TriangleType> {
        if l == 0 || m == 0 || n == 0 {
            return Err(Error::InvalidTriple(format!("period 0 in ({l},{m},{n})")));
        }
        Ok(TriangleType { l, m, n })
    }

    pub const fn of(l: u64, m: u64, n: u64) -> TriangleType {
        TriangleType { l, m, n }
    }

    pub fn periods(&self) -> [u64; 3] {
        [self.l, self.m, self.n]
    }

    pub fn sorted(&self) -> [u64; 3] {
        let mut p = self.periods();
        p.sort_unstable();
        p
    }

    /// `1/l + 1/m + 1/n < 1`.
    pub fn is_hyperbolic(&self) -> bool {
        let (l, m, n) = (self.l as u128, self.m as u128, self.n as u128);
        m * n + l * n + l * m < l * m * n
    }

    /// `(l, m, n) ↦ (n, l, m)`, matching the triple rotation `(x, y, z) ↦ (z, x, y)`.
    pub fn rotate(&self) -> TriangleType {
        TriangleType::of(self.n, self.l, self.m)
    }

    pub fn permuted(&self, role: Role) -> TriangleType {
        let [l, m, n] = role.permute_type(self.periods());
        TriangleType::of(l, m, n)
    }

    pub fn same_multiset(&self, other: &TriangleType) -> bool {
        self.sorted() == other.sorted()
    }
}

impl fmt::Display for TriangleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.l, self.m, self.n)
    }
}

impl FromStr for TriangleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<TriangleType> {
        let bad = || Error::Parse {
            what: "triangle type",
            input: s.to_string(),
        };
        let parts: Vec<u64> = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match parts[..] {
            [l, m, n] => TriangleType::new(l, m, n),
            _ => Err(bad()),
        }
    }
}

impl Serialize for TriangleType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.periods().serialize(s)
    }
}

/// Riemann–Hurwitz genus `1 + (N/2)(1 − 1/l − 1/m − 1/n)` over any signed
/// integer type; `None` unless it is a non-negative integer.
pub fn genus_in<T>(t: &TriangleType, order: T) -> Option<T>
where
    T: Clone + Integer + Signed + FromPrimitive,
{
    let [l, m, n] = t.periods().map(|v| T::from_u64(v));
    let (l, m, n) = (l?, m?, n?);
    let lmn = l.clone() * m.clone() * n.clone();
    let defect = lmn.clone() - m.clone() * n.clone() - l.clone() * n - l * m;
    let two = T::one() + T::one();
    let g = Ratio::new(order * defect, two * lmn) + Ratio::one();
    (g.is_integer() && !g.numer().is_negative()).then(|| g.to_integer())
}

pub fn rh_genus(t: &TriangleType, order: &BigUint) -> Result<BigInt> {
    genus_in(t, BigInt::from(order.clone())).ok_or_else(|| Error::NonIntegralGenus {
        ty: t.to_string(),
        order: order.to_string(),
    })
}

/// Genus of an unbranched covering of the given index.
pub fn cover_genus(base_genus: &BigInt, index: &BigInt) -> Result<BigInt> {
    if base_genus < &BigInt::from(2) || index < &BigInt::one() {
        return Err(Error::Precondition("cover_genus needs genus ≥ 2 and index ≥ 1".into()));
    }
    Ok(index * (base_genus - 1) + 1)
}

/// A row of Singerman's list, with the normaliser data that fixes how many
/// mutually isomorphic dessins share a surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclusionRecord {
    pub label: String,
    pub sub: TriangleType,
    #[serde(rename = "super")]
    pub sup: TriangleType,
    pub index: u64,
    pub normal: bool,
    pub quotient: Option<String>,
    pub normalizer: TriangleType,
    pub dessin_count: u64,
}

const T: fn(u64, u64, u64) -> TriangleType = TriangleType::of;

struct Row {
    arity: usize,
    build: fn(u64, u64) -> Option<InclusionRecord>,
}

fn normal_row(label: &str, sub: TriangleType, sup: TriangleType, index: u64, quotient: &str) -> InclusionRecord {
    InclusionRecord {
        label: label.into(),
        sub,
        sup,
        index,
        normal: true,
        quotient: Some(quotient.into()),
        normalizer: sup,
        dessin_count: 1,
    }
}

fn plain_row(label: &str, sub: TriangleType, sup: TriangleType, index: u64, normalizer: Option<TriangleType>, count: u64) -> InclusionRecord {
    InclusionRecord {
        label: label.into(),
        sub,
        sup,
        index,
        normal: false,
        quotient: None,
        normalizer: normalizer.unwrap_or(sub),
        dessin_count: count,
    }
}

const ROWS: &[Row] = &[
    Row {
        arity: 2,
        build: |s, t| {
            ((s >= 2 && t >= 1) && (s as i64 - 2) * (t as i64 - 1) > 2)
                .then(|| normal_row("a", T(s, s, t), T(2, s, 2 * t), 2, "C2"))
        },
    },
    Row {
        arity: 1,
        build: |t, _| (t > 3).then(|| normal_row("b", T(t, t, t), T(3, 3, t), 3, "C3")),
    },
    Row {
        arity: 1,
        build: |t, _| (t > 3).then(|| normal_row("c", T(t, t, t), T(2, 3, 2 * t), 6, "S3")),
    },
    Row {
        arity: 0,
        build: |_, _| Some(plain_row("A", T(7, 7, 7), T(2, 3, 7), 24, Some(T(3, 3, 7)), 8)),
    },
    Row {
        arity: 0,
        build: |_, _| Some(plain_row("B", T(2, 7, 7), T(2, 3, 7), 9, None, 9)),
    },
    Row {
        arity: 0,
        build: |_, _| Some(plain_row("C", T(3, 3, 7), T(2, 3, 7), 8, None, 8)),
    },
    Row {
        arity: 0,
        build: |_, _| Some(plain_row("D", T(4, 8, 8), T(2, 3, 8), 12, Some(T(2, 8, 8)), 6)),
    },
    Row {
        arity: 0,
        build: |_, _| Some(plain_row("E", T(3, 8, 8), T(2, 3, 8), 10, None, 10)),
    },
    Row {
        arity: 0,
        build: |_, _| Some(plain_row("F", T(9, 9, 9), T(2, 3, 9), 12, Some(T(3, 3, 9)), 4)),
    },
    Row {
        arity: 0,
        build: |_, _| Some(plain_row("G", T(4, 4, 5), T(2, 4, 5), 6, None, 6)),
    },
    Row {
        arity: 1,
        build: |n, _| (n >= 2).then(|| plain_row("H", T(n, 4 * n, 4 * n), T(2, 3, 4 * n), 6, Some(T(4 * n, 2, 2 * n)), 3)),
    },
    Row {
        arity: 1,
        build: |n, _| (n >= 3).then(|| plain_row("I", T(n, 2 * n, 2 * n), T(2, 4, 2 * n), 4, Some(T(2 * n, 2, 2 * n)), 2)),
    },
    Row {
        arity: 1,
        build: |n, _| (n >= 3).then(|| plain_row("J", T(3, n, 3 * n), T(2, 3, 3 * n), 4, None, 4)),
    },
    Row {
        arity: 1,
        build: |n, _| (n >= 4).then(|| plain_row("K", T(2, n, 2 * n), T(2, 3, 2 * n), 3, None, 3)),
    },
];

/// Every listed inclusion, with parameterised rows expanded at `param`
/// (for (a), `s = 2·param`, `t = param`, the shape used by the index-two
/// constructions).
pub fn catalog(param: Option<u64>) -> Vec<InclusionRecord> {
    ROWS.iter()
        .filter_map(|row| match (row.arity, param) {
            (0, _) => (row.build)(0, 0),
            (1, Some(k)) => (row.build)(k, 0),
            (2, Some(k)) => (row.build)(2 * k, k),
            _ => None,
        })
        .collect()
}

/// The catalogue row realising `sub < sup`, comparing types as multisets.
pub fn singerman_lookup(sub: &TriangleType, sup: &TriangleType) -> Option<InclusionRecord> {
    let mut candidates: Vec<u64> = Vec::new();
    for v in sub.periods().into_iter().chain(sup.periods()) {
        for k in [1, 2, 3, 4] {
            if v % k == 0 {
                candidates.push(v / k);
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    let matches = |r: &InclusionRecord| r.sub.same_multiset(sub) && r.sup.same_multiset(sup);
    for row in ROWS {
        let found = match row.arity {
            0 => (row.build)(0, 0).filter(matches),
            1 => candidates.iter().find_map(|&k| (row.build)(k, 0).filter(matches)),
            _ => candidates
                .iter()
                .flat_map(|&s| candidates.iter().map(move |&t| (s, t)))
                .find_map(|(s, t)| (row.build)(s, t).filter(matches)),
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Classifies two triangle types that can occur on the same surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum PairCase {
    /// Same type; conjugate in the normaliser.
    Case1,
    /// Same type `(n, 2n, 2n)`, index two in `Δ(2, 2n, 2n)`.
    Case2 { n: u64 },
    /// Types `(2n, 2n, 2n)` and `(n, 4n, 4n)`.
    Case3Or4 { n: u64 },
    None,
}

pub fn classify_pair(t1: &TriangleType, t2: &TriangleType) -> PairCase {
    if !t1.is_hyperbolic() || !t2.is_hyperbolic() {
        return PairCase::None;
    }
    let (a, b) = (t1.sorted(), t2.sorted());
    if a == b {
        let [n, m1, m2] = a;
        return if m1 == 2 * n && m2 == 2 * n {
            PairCase::Case2 { n }
        } else {
            PairCase::Case1
        };
    }
    let shape = |equal: [u64; 3], other: [u64; 3]| {
        let [e, e1, e2] = equal;
        let n = e / 2;
        (e == e1 && e == e2 && e % 2 == 0 && other == [n, 4 * n, 4 * n]).then_some(n)
    };
    match shape(a, b).or_else(|| shape(b, a)) {
        Some(n) => PairCase::Case3Or4 { n },
        None => PairCase::None,
    }
}

/// An ordered triple with `x·y·z = 1`, typed by the exact orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingTriple {
    pub x: Permutation,
    pub y: Permutation,
    pub z: Permutation,
    pub ty: TriangleType,
}

impl GeneratingTriple {
    pub fn new(x: Permutation, y: Permutation, z: Permutation) -> Result<GeneratingTriple> {
        if x.degree() != y.degree() || y.degree() != z.degree() {
            return Err(Error::DegreeMismatch(x.degree(), z.degree()));
        }
        if !x.then(&y).then(&z).is_identity() {
            return Err(Error::InvalidTriple("x·y·z ≠ 1".into()));
        }
        let ty = TriangleType::of(x.order(), y.order(), z.order());
        Ok(GeneratingTriple { x, y, z, ty })
    }

    /// Completes `(x, y)` with `z = (xy)⁻¹`.
    pub fn from_pair(x: Permutation, y: Permutation) -> Result<GeneratingTriple> {
        let z = x.then(&y).inverse();
        GeneratingTriple::new(x, y, z)
    }

    pub fn degree(&self) -> usize {
        self.x.degree()
    }

    pub fn elements(&self) -> [&Permutation; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn group(&self) -> Result<PermGroup> {
        PermGroup::from_generators(&[self.x.clone(), self.y.clone(), self.z.clone()])
    }

    /// Whether the triple lies in `g` and generates all of it.
    pub fn generates(&self, g: &PermGroup) -> Result<bool> {
        if !self.elements().iter().all(|e| g.contains(e)) {
            return Ok(false);
        }
        Ok(self.group()?.order() == g.order())
    }

    pub fn expect_type(&self, ty: &TriangleType) -> Result<()> {
        if &self.ty == ty {
            Ok(())
        } else {
            Err(Error::InvalidTriple(format!("type {} where {} was declared", self.ty, ty)))
        }
    }

    /// `(x, y, z) ↦ (z, x, y)`.
    pub fn rotate(&self) -> GeneratingTriple {
        GeneratingTriple {
            x: self.z.clone(),
            y: self.x.clone(),
            z: self.y.clone(),
            ty: self.ty.rotate(),
        }
    }

    pub fn associate(&self, role: Role) -> GeneratingTriple {
        let (x, y, z) = role.apply(&self.x, &self.y, &self.z, Permutation::inverse);
        GeneratingTriple {
            x,
            y,
            z,
            ty: self.ty.permuted(role),
        }
    }

    /// Image in `G × C₂`, the `C₂` factor acting on two extra points and
    /// swapping them for the flagged generators.
    pub fn lift(&self, flags: [bool; 3]) -> GeneratingTriple {
        let swap = Permutation::from_images(vec![1, 0]).expect("transposition");
        let fixed = Permutation::identity(2);
        let [x, y, z] = [&self.x, &self.y, &self.z]
            .into_iter()
            .zip(flags)
            .map(|(g, f)| g.direct_sum(if f { &swap } else { &fixed }))
            .collect::<Vec<_>>()
            .try_into()
            .expect("three");
        GeneratingTriple { x, y, z, ty: self.ty }
    }

    pub fn text(&self) -> TripleText {
        TripleText {
            x: self.x.to_string(),
            y: self.y.to_string(),
            z: self.z.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleText {
    pub x: String,
    pub y: String,
    pub z: String,
}

/// Position of the unique generator lying in `H`; the product relation
/// forces an even number outside.
pub fn parity_classify(triple: &GeneratingTriple, in_h: impl Fn(&Permutation) -> bool) -> Result<usize> {
    let inside: Vec<bool> = triple.elements().iter().map(|e| in_h(e)).collect();
    let outside = inside.iter().filter(|&&b| !b).count();
    if outside % 2 != 0 {
        return Err(Error::Parity(format!(
            "{outside} generators outside H contradicts x·y·z = 1"
        )));
    }
    match outside {
        2 => Ok(inside.iter().position(|&b| b).expect("one inside")),
        0 => Err(Error::Parity("all generators lie in H, so they cannot generate G".into())),
        _ => unreachable!("odd counts rejected above"),
    }
}

/// The subgroup generated by squares, which is the unique subgroup of index
/// two when one exists.
pub fn index_two_subgroup(g: &PermGroup) -> Result<PermGroup> {
    let gens = g.generators();
    let mut elems: Vec<Permutation> = gens.iter().map(|s| s.then(s)).collect();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            elems.push(crate::group::commutator(a, b));
        }
    }
    elems.retain(|e| !e.is_identity());
    let h = g.normal_closure(&elems)?;
    if h.order() * 2u32 != *g.order() {
        return Err(Error::Precondition(format!(
            "G/G² has order {}, so G lacks a unique subgroup of index 2",
            g.order() / h.order()
        )));
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    ContainsY,
    ContainsZ,
}

/// Canonical triple of the index-two subgroup of `⟨x, y, z⟩`, type `(2, M, N)`,
/// containing `y`, namely `(y, y^x, y·z²·y⁻¹)` of type `(M, M, N/2)`, or
/// containing `z`, namely `(z^x, z, z⁻¹·y²·z)` of type `(N, N, M/2)`.
pub fn index2_subtriple(triple: &GeneratingTriple, which: Which) -> Result<GeneratingTriple> {
    let TriangleType { l, m, n } = triple.ty;
    if l != 2 || m % 2 != 0 || n % 2 != 0 {
        return Err(Error::InvalidTriple(format!(
            "index-two subtriples need type (2, even, even), got {}",
            triple.ty
        )));
    }
    let (x, y, z) = (&triple.x, &triple.y, &triple.z);
    let (out, declared) = match which {
        Which::ContainsY => (
            GeneratingTriple::new(y.clone(), y.conjugate_by(x), z.then(z).conjugate_by(&y.inverse()))?,
            TriangleType::of(m, m, n / 2),
        ),
        Which::ContainsZ => (
            GeneratingTriple::new(z.conjugate_by(x), z.clone(), y.then(y).conjugate_by(z))?,
            TriangleType::of(n, n, m / 2),
        ),
    };
    out.expect_type(&declared)?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Cor52,
    Cor53,
    Cor61,
    Cor62,
    Case4,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Construction::Cor52 => "cor52",
            Construction::Cor53 => "cor53",
            Construction::Cor61 => "cor61",
            Construction::Cor62 => "cor62",
            Construction::Case4 => "case4",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Isomorphic,
    NotIsomorphic,
    NoInnerSwap,
}

/// How a group was specified, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupDescriptor {
    pub kind: String,
    pub params: BTreeMap<String, u64>,
    /// Trivial centre and only inner automorphisms.
    #[serde(skip)]
    pub complete: bool,
}

impl GroupDescriptor {
    pub fn new(kind: &str, params: &[(&str, u64)], complete: bool) -> GroupDescriptor {
        GroupDescriptor {
            kind: kind.into(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            complete,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub kind: String,
    pub params: BTreeMap<String, u64>,
    #[serde(serialize_with = "biguint_as_number")]
    pub order: BigUint,
}

/// One regular dessin of a pair, as a triple in its automorphism group.
#[derive(Clone, Debug, Serialize)]
pub struct DessinSpec {
    pub label: String,
    /// `"G"` when the automorphism group projects isomorphically onto the
    /// input group, `"H×C2"` when it is the index-two subgroup times `C₂`.
    pub aut: String,
    #[serde(rename = "type")]
    pub ty: TriangleType,
    #[serde(serialize_with = "biguint_as_number")]
    pub order: BigUint,
    #[serde(serialize_with = "bigint_as_number")]
    pub genus: BigInt,
    pub euler_genus: Option<u64>,
    pub fingerprint: Fingerprint,
    #[serde(skip)]
    pub triple: GeneratingTriple,
    #[serde(skip)]
    pub group: PermGroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub construction: Construction,
    pub group: GroupSummary,
    pub triple: TripleText,
    pub types: [TriangleType; 2],
    #[serde(serialize_with = "bigint_as_number")]
    pub genus: BigInt,
    pub parity_j: Option<usize>,
    pub verdict: Verdict,
    pub fingerprints: [Fingerprint; 2],
    pub swap_conjugator: Option<String>,
    pub dessins: [DessinSpec; 2],
}

#[derive(Clone, Copy, Debug)]
pub struct PairOptions {
    /// Largest automorphism-group order whose regular hypermap is built to
    /// cross-check the genus; `0` disables the check.
    pub materialize_bound: u64,
}

impl Default for PairOptions {
    fn default() -> PairOptions {
        PairOptions {
            materialize_bound: ENUMERATION_BOUND,
        }
    }
}

fn euler_check(group: &PermGroup, triple: &GeneratingTriple, rh: &BigInt, opts: &PairOptions) -> Result<Option<u64>> {
    if opts.materialize_bound == 0 || !materializable(group.order(), opts.materialize_bound) {
        return Ok(None);
    }
    let h = regular_hypermap_bounded(group, &triple.x, &triple.y, opts.materialize_bound)?;
    let g = h.genus()?;
    if BigInt::from(g) != *rh {
        return Err(Error::Hypermap(format!("Euler genus {g} differs from Riemann–Hurwitz genus {rh}")));
    }
    Ok(Some(g))
}

fn projection(group: &PermGroup, degree: usize) -> Result<PermGroup> {
    let gens: Vec<Permutation> = group
        .generators()
        .iter()
        .map(|g| g.restrict(degree).ok_or(Error::Construction("lift does not preserve G's points".into())))
        .collect::<Result<_>>()?;
    PermGroup::from_generators(&gens)
}

/// Builds the two dessins of Corollaries 5.2/5.3 (type `(2, 2n, 2n)`) or
/// their Case-3 analogues (type `(2, 2n, 4n)`) inside the model
/// `G* = ⟨(x,εx), (y,εy), (z,εz)⟩ ≤ G × C₂`.
pub fn build_pair(
    construction: Construction,
    desc: &GroupDescriptor,
    g: &PermGroup,
    triple: &GeneratingTriple,
    h: &PermGroup,
    opts: &PairOptions,
) -> Result<PairReport> {
    let TriangleType { l, m, n } = triple.ty;
    let shape_ok = l == 2
        && m % 2 == 0
        && match construction {
            Construction::Cor52 | Construction::Cor53 => n == m,
            Construction::Cor61 | Construction::Cor62 => n == 2 * m,
            Construction::Case4 => false,
        };
    if !shape_ok {
        return Err(Error::InvalidTriple(format!("type {} does not suit {construction}", triple.ty)));
    }
    if !triple.generates(g)? {
        return Err(Error::InvalidTriple("triple does not generate G".into()));
    }
    if h.order() * 2u32 != *g.order() || !h.is_subgroup_of(g) {
        return Err(Error::Precondition("H must have index 2 in G".into()));
    }
    let j = parity_classify(triple, |e| h.contains(e))?;
    let wants_zero = matches!(construction, Construction::Cor52 | Construction::Cor61);
    if wants_zero != (j == 0) {
        return Err(Error::Parity(format!("generator {j} lies in H, which does not suit {construction}")));
    }
    let flags = if j == 0 { [true, false, true] } else { [false, true, true] };
    let lifted = triple.lift(flags);
    let gstar = lifted.group()?;
    if *gstar.order() != g.order() * 2u32 {
        return Err(Error::Construction(format!(
            "|G*| = {} instead of 2|G| = {}",
            gstar.order(),
            g.order() * 2u32
        )));
    }
    let degree = g.degree();
    let mut central = vec![0u32; degree + 2];
    for (i, v) in central.iter_mut().enumerate().take(degree) {
        *v = i as u32;
    }
    central[degree] = degree as u32 + 1;
    central[degree + 1] = degree as u32;
    let central = Permutation::from_images(central)?;

    let mut specs = Vec::with_capacity(2);
    for (k, which) in [(1usize, Which::ContainsY), (2, Which::ContainsZ)] {
        let sub = index2_subtriple(&lifted, which)?.rotate();
        let group = sub.group()?;
        if group.order() != g.order() {
            return Err(Error::Construction(format!("image of Δ{k} has order {} instead of |G|", group.order())));
        }
        let proj = projection(&group, degree)?;
        let aut = if j == k {
            let central_ok = group.contains(&central)
                && group.generators().iter().all(|s| s.then(&central) == central.then(s));
            if !central_ok || proj.order() != h.order() {
                return Err(Error::Construction(format!("image of Δ{k} is not H × C₂")));
            }
            "H×C2"
        } else {
            if proj.order() != g.order() {
                return Err(Error::Construction(format!("image of Δ{k} does not project onto G")));
            }
            "G"
        };
        let genus = rh_genus(&sub.ty, g.order())?;
        let euler_genus = euler_check(&group, &sub, &genus, opts)?;
        specs.push(DessinSpec {
            label: format!("H{k}"),
            aut: aut.into(),
            ty: sub.ty,
            order: group.order().clone(),
            genus,
            euler_genus,
            fingerprint: fingerprint(&group)?,
            triple: sub,
            group,
        });
    }
    let [d1, d2]: [DessinSpec; 2] = specs.try_into().expect("two dessins");
    if d1.genus != d2.genus {
        return Err(Error::Construction(format!("genera differ: {} vs {}", d1.genus, d2.genus)));
    }
    let mut swap_conjugator = None;
    let verdict = match construction {
        Construction::Cor52 => match find_swapping_conjugator(g, &triple.y, &triple.z)? {
            Some(s) => {
                swap_conjugator = Some(s.to_string());
                Verdict::Isomorphic
            }
            None if desc.complete => Verdict::NotIsomorphic,
            None => Verdict::NoInnerSwap,
        },
        Construction::Cor53 => {
            if d1.fingerprint != d2.fingerprint {
                Verdict::NotIsomorphic
            } else {
                Verdict::NoInnerSwap
            }
        }
        _ => Verdict::NotIsomorphic,
    };
    Ok(PairReport {
        construction,
        group: GroupSummary {
            kind: desc.kind.clone(),
            params: desc.params.clone(),
            order: g.order().clone(),
        },
        triple: triple.text(),
        types: [d1.ty, d2.ty],
        genus: d1.genus.clone(),
        parity_j: Some(j),
        verdict,
        fingerprints: [d1.fingerprint.clone(), d2.fingerprint.clone()],
        swap_conjugator,
        dessins: [d1, d2],
    })
}

/// Case 4: `G = Δ*/K` for `Δ* = Δ(2, 3, 4n)` with `K` inside the kernel of
/// the map onto `S₄`. The dessin groups are the images of `Δ₁`, the normal
/// closure of `z²`, and of `Δ₂ = ⟨ncl(z⁴), z⟩`.
pub fn case4_pipeline(desc: &GroupDescriptor, g: &PermGroup, triple: &GeneratingTriple, opts: &PairOptions) -> Result<PairReport> {
    let TriangleType { l, m, n: n4 } = triple.ty;
    if l != 2 || m != 3 || n4 % 4 != 0 {
        return Err(Error::InvalidTriple(format!("case 4 needs type (2,3,4n), got {}", triple.ty)));
    }
    if !triple.generates(g)? {
        return Err(Error::InvalidTriple("triple does not generate G".into()));
    }
    let n = n4 / 4;
    let (x, y, z) = (&triple.x, &triple.y, &triple.z);
    // Canonical generators of Δ° = θ⁻¹(D₈), the stabiliser of a pair of opposite faces.
    let a = x.conjugate_by(&y.inverse());
    let b = a.then(x).then(y);
    let outer = GeneratingTriple::new(a, b, z.clone())?;
    outer.expect_type(&TriangleType::of(2, 2 * n, 4 * n))?;
    let t1 = index2_subtriple(&outer, Which::ContainsY)?;
    let t2 = index2_subtriple(&outer, Which::ContainsZ)?.rotate();

    let index = |sub: &PermGroup| -> BigUint { g.order() / sub.order() };
    let z2 = z.pow(2);
    let z4 = z.pow(4);
    let n1 = g.normal_closure(&[z2])?;
    let k0 = g.normal_closure(&[z4])?;
    let n2 = k0.with_generator(z)?;
    for (what, sub, want) in [("ncl(z²)", &n1, 6u32), ("ncl(z⁴)", &k0, 24), ("⟨ncl(z⁴), z⟩", &n2, 6)] {
        if index(sub) != BigUint::from(want) {
            return Err(Error::Construction(format!(
                "{what} has index {} instead of {want}; the kernel is not inside K₀",
                index(sub)
            )));
        }
    }
    let g1 = t1.group()?;
    let g2 = t2.group()?;
    if !g1.same_group(&n1) || !g2.same_group(&n2) {
        return Err(Error::Construction("subtriples do not generate the expected subgroups".into()));
    }
    let mut specs = Vec::with_capacity(2);
    for (k, sub, group) in [(1, t1, g1), (2, t2, g2)] {
        let genus = rh_genus(&sub.ty, group.order())?;
        let euler_genus = euler_check(&group, &sub, &genus, opts)?;
        specs.push(DessinSpec {
            label: format!("H{k}"),
            aut: format!("Δ{k}/K"),
            ty: sub.ty,
            order: group.order().clone(),
            genus,
            euler_genus,
            fingerprint: fingerprint(&group)?,
            triple: sub,
            group,
        });
    }
    let [d1, d2]: [DessinSpec; 2] = specs.try_into().expect("two dessins");
    if d1.genus != d2.genus {
        return Err(Error::Construction(format!("genera differ: {} vs {}", d1.genus, d2.genus)));
    }
    Ok(PairReport {
        construction: Construction::Case4,
        group: GroupSummary {
            kind: desc.kind.clone(),
            params: desc.params.clone(),
            order: g.order().clone(),
        },
        triple: triple.text(),
        types: [d1.ty, d2.ty],
        genus: d1.genus.clone(),
        parity_j: None,
        verdict: Verdict::NotIsomorphic,
        fingerprints: [d1.fingerprint.clone(), d2.fingerprint.clone()],
        swap_conjugator: None,
        dessins: [d1, d2],
    })
}

/// Genus of both dessins in Cases 3 and 4: `1 + (2n − 3)/(4n)·N`.
pub fn case3_genus(n: u64, order: &BigUint) -> Result<BigInt> {
    let g = Ratio::new(BigInt::from(2 * n as i64 - 3) * BigInt::from(order.clone()), BigInt::from(4 * n)) + Ratio::one();
    if g.is_integer() && !g.numer().is_negative() {
        Ok(g.to_integer())
    } else {
        Err(Error::NonIntegralGenus {
            ty: format!("({0},{0},{0})", 2 * n),
            order: order.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::factorial;
    use proptest::prelude::*;

    fn t(l: u64, m: u64, n: u64) -> TriangleType {
        TriangleType::of(l, m, n)
    }

    fn genus(ty: TriangleType, order: u64) -> BigInt {
        rh_genus(&ty, &BigUint::from(order)).unwrap()
    }

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn hyperbolicity() {
        assert!(t(2, 3, 7).is_hyperbolic());
        assert!(!t(2, 3, 6).is_hyperbolic());
        assert!(!t(1, 4, 4).is_hyperbolic());
    }

    #[test]
    fn published_genera() {
        assert_eq!(genus(t(3, 6, 6), 120), BigInt::from(21));
        assert_eq!(genus(t(2, 3, 7), 168), BigInt::from(3));
        assert_eq!(genus(t(8, 16, 16), 4896), BigInt::from(1837));
        assert_eq!(genus(t(3, 6, 6), 336), BigInt::from(57));
        assert_eq!(genus(t(3, 6, 6), 362880), BigInt::from(60481));
        assert_eq!(genus(t(2, 3, 8), 48), BigInt::from(2));
    }

    #[test]
    fn genus_errors_and_generic_scalars() {
        assert!(matches!(
            rh_genus(&t(2, 3, 7), &BigUint::from(100u32)),
            Err(Error::NonIntegralGenus { .. })
        ));
        assert_eq!(genus_in(&t(3, 6, 6), 120i64), Some(21));
        assert_eq!(genus_in(&t(3, 6, 6), 120i32), Some(21));
        let big = BigInt::from(factorial(25));
        assert!(genus_in(&t(12, 24, 24), big).is_some());
    }

    #[test]
    fn covering_genera() {
        let three = BigInt::from(3);
        assert_eq!(cover_genus(&three, &BigInt::from(1)).unwrap(), three);
        assert_eq!(cover_genus(&three, &BigInt::from(64)).unwrap(), BigInt::from(129));
        assert_eq!(cover_genus(&three, &BigInt::from(8)).unwrap(), BigInt::from(17));
        assert!(cover_genus(&BigInt::from(1), &BigInt::from(8)).is_err());
    }

    #[test]
    fn parse_and_render_types() {
        let ty: TriangleType = "8,16,16".parse().unwrap();
        assert_eq!(ty, t(8, 16, 16));
        assert_eq!(ty.to_string(), "(8,16,16)");
        assert_eq!("(2,3,7)".parse::<TriangleType>().unwrap(), t(2, 3, 7));
        assert!("2,3".parse::<TriangleType>().is_err());
        assert!("2,0,3".parse::<TriangleType>().is_err());
    }

    #[test]
    fn catalog_lookups() {
        let e = singerman_lookup(&t(3, 8, 8), &t(2, 3, 8)).unwrap();
        assert_eq!((e.label.as_str(), e.index, e.normal, e.dessin_count), ("E", 10, false, 10));
        let b = singerman_lookup(&t(7, 7, 7), &t(3, 3, 7)).unwrap();
        assert_eq!((b.label.as_str(), b.index, b.normal), ("b", 3, true));
        let a = singerman_lookup(&t(7, 7, 7), &t(2, 3, 7)).unwrap();
        assert_eq!((a.index, a.normalizer, a.dessin_count), (24, t(3, 3, 7), 8));
        let i = singerman_lookup(&t(3, 6, 6), &t(2, 4, 6)).unwrap();
        assert_eq!((i.label.as_str(), i.normalizer, i.dessin_count), ("I", t(6, 2, 6), 2));
        let h = singerman_lookup(&t(2, 8, 8), &t(2, 3, 8)).unwrap();
        assert_eq!((h.label.as_str(), h.dessin_count), ("H", 3));
        let d = singerman_lookup(&t(4, 8, 8), &t(2, 3, 8)).unwrap();
        assert_eq!((d.normalizer, d.dessin_count), (t(2, 8, 8), 6));
        let f = singerman_lookup(&t(9, 9, 9), &t(2, 3, 9)).unwrap();
        assert_eq!((f.normalizer, f.dessin_count), (t(3, 3, 9), 4));
        let case2 = singerman_lookup(&t(3, 6, 6), &t(2, 6, 6)).unwrap();
        assert_eq!((case2.label.as_str(), case2.index), ("a", 2));
        assert!(singerman_lookup(&t(2, 3, 7), &t(2, 3, 8)).is_none());
    }

    #[test]
    fn catalog_counts() {
        let counts: BTreeMap<String, u64> = catalog(Some(4)).into_iter().map(|r| (r.label, r.dessin_count)).collect();
        for (label, count) in [("a", 1), ("b", 1), ("c", 1), ("A", 8), ("B", 9), ("C", 8), ("D", 6), ("E", 10), ("F", 4), ("G", 6), ("H", 3), ("I", 2), ("J", 4), ("K", 3)] {
            assert_eq!(counts[label], count, "row {label}");
        }
        let small: Vec<String> = catalog(Some(3)).into_iter().map(|r| r.label).collect();
        assert!(!small.iter().any(|l| l == "b" || l == "c" || l == "K"));
        assert_eq!(catalog(Some(4)).len(), 14);
        assert_eq!(catalog(None).len(), 7);
        assert_eq!(catalog(Some(4)).iter().map(|r| r.dessin_count).max(), Some(10));
    }

    #[test]
    fn pair_classification() {
        assert_eq!(classify_pair(&t(3, 6, 6), &t(3, 6, 6)), PairCase::Case2 { n: 3 });
        assert_eq!(classify_pair(&t(4, 4, 4), &t(2, 8, 8)), PairCase::Case3Or4 { n: 2 });
        assert_eq!(classify_pair(&t(2, 8, 8), &t(4, 4, 4)), PairCase::Case3Or4 { n: 2 });
        assert_eq!(classify_pair(&t(2, 3, 7), &t(2, 3, 7)), PairCase::Case1);
        assert_eq!(classify_pair(&t(2, 3, 6), &t(2, 3, 6)), PairCase::None);
        assert_eq!(classify_pair(&t(2, 3, 7), &t(2, 3, 8)), PairCase::None);
    }

    #[test]
    fn parity_positions() {
        let even = |e: &Permutation| e.parity().is_even();
        let ex5 = GeneratingTriple::new(p("(12)(34)", 5), p("(13)(245)", 5), p("(14)(253)", 5)).unwrap();
        assert_eq!(parity_classify(&ex5, even).unwrap(), 0);
        let ex10 = GeneratingTriple::from_pair(
            p("(1,9)(2,7)(3,6)(4,5)", 9),
            p("(1,9,7)", 9),
        );
        assert!(ex10.is_ok());
        let all_even = GeneratingTriple::new(p("(123)", 3), p("(123)", 3), p("(123)", 3)).unwrap();
        assert!(matches!(parity_classify(&all_even, even), Err(Error::Parity(_))));
        // Product relation broken by a bogus predicate.
        assert!(matches!(parity_classify(&ex5, |e| e.is_identity()), Err(Error::Parity(_))));
    }

    #[test]
    fn subtriples_of_example5() {
        let ex5 = GeneratingTriple::new(p("(12)(34)", 5), p("(13)(245)", 5), p("(14)(253)", 5)).unwrap();
        let s = index2_subtriple(&ex5, Which::ContainsY).unwrap();
        assert_eq!(s.ty, t(6, 6, 3));
        assert!(s.x.then(&s.y).then(&s.z).is_identity());
        let s = index2_subtriple(&ex5, Which::ContainsZ).unwrap();
        assert_eq!(s.ty, t(6, 6, 3));
    }

    #[test]
    fn abelian_toy_subtriple() {
        // C₂ × C₄ on 2 + 4 points
        let x = p("(1,2)", 6);
        let y = p("(3,4,5,6)", 6);
        let triple = GeneratingTriple::from_pair(x, y.clone()).unwrap();
        assert_eq!(triple.ty, t(2, 4, 4));
        let s = index2_subtriple(&triple, Which::ContainsY).unwrap();
        let g = s.group().unwrap();
        assert_eq!(g.order(), &BigUint::from(4u32));
        assert!(g.contains(&y));
        assert!(!g.contains(&triple.x));
    }

    #[test]
    fn subtriple_rejects_odd_periods() {
        let triple = GeneratingTriple::new(p("(12)", 3), p("(123)", 3), p("(13)", 3)).unwrap();
        assert!(matches!(index2_subtriple(&triple, Which::ContainsY), Err(Error::InvalidTriple(_))));
    }

    #[test]
    fn index_two_subgroups() {
        let s5 = PermGroup::from_generators(&[p("(12)", 5), p("(12345)", 5)]).unwrap();
        let a5 = index_two_subgroup(&s5).unwrap();
        assert_eq!(a5.order(), &BigUint::from(60u32));
        let v4 = PermGroup::from_generators(&[p("(12)", 4), p("(34)", 4)]).unwrap();
        assert!(index_two_subgroup(&v4).is_err());
    }

    #[test]
    fn example5_pair() {
        let triple = GeneratingTriple::new(p("(12)(34)", 5), p("(13)(245)", 5), p("(14)(253)", 5)).unwrap();
        let g = triple.group().unwrap();
        let h = index_two_subgroup(&g).unwrap();
        let desc = GroupDescriptor::new("sym", &[("d", 5)], true);
        let r = build_pair(Construction::Cor52, &desc, &g, &triple, &h, &PairOptions::default()).unwrap();
        assert_eq!(r.genus, BigInt::from(21));
        assert_eq!(r.types, [t(3, 6, 6), t(3, 6, 6)]);
        assert_eq!(r.verdict, Verdict::Isomorphic);
        assert_eq!(r.parity_j, Some(0));
        for d in &r.dessins {
            assert_eq!(d.euler_genus, Some(21));
            assert_eq!(d.aut, "G");
        }
        assert!(matches!(
            build_pair(Construction::Cor53, &desc, &g, &triple, &h, &PairOptions::default()),
            Err(Error::Parity(_))
        ));
    }

    #[test]
    fn pair_report_serializes() {
        let triple = GeneratingTriple::new(p("(12)(34)", 5), p("(13)(245)", 5), p("(14)(253)", 5)).unwrap();
        let g = triple.group().unwrap();
        let h = index_two_subgroup(&g).unwrap();
        let desc = GroupDescriptor::new("sym", &[("d", 5)], true);
        let opts = PairOptions { materialize_bound: 0 };
        let r = build_pair(Construction::Cor52, &desc, &g, &triple, &h, &opts).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["construction"], "cor52");
        assert_eq!(v["genus"], 21);
        assert_eq!(v["group"]["order"], 120);
        assert_eq!(v["types"][0], serde_json::json!([3, 6, 6]));
        assert_eq!(v["verdict"], "isomorphic");
        assert_eq!(v["triple"]["x"], "(1,2)(3,4)");
    }

    #[test]
    fn case4_on_s4() {
        let s4 = PermGroup::from_generators(&[p("(12)", 4), p("(1234)", 4)]).unwrap();
        let elements = s4.elements(100).unwrap();
        let triple = elements
            .iter()
            .flat_map(|x| elements.iter().map(move |y| (x, y)))
            .filter(|(x, y)| x.order() == 2 && y.order() == 3)
            .filter_map(|(x, y)| GeneratingTriple::from_pair(x.clone(), y.clone()).ok())
            .find(|t| t.z.order() == 4 && t.generates(&s4).unwrap())
            .unwrap();
        let desc = GroupDescriptor::new("sym", &[("d", 4)], true);
        let r = case4_pipeline(&desc, &s4, &triple, &PairOptions::default()).unwrap();
        assert_eq!(r.types, [t(2, 2, 2), t(1, 4, 4)]);
        assert_eq!(r.genus, BigInt::from(0));
        assert_eq!(r.fingerprints[0].order_histogram.as_ref().unwrap()[&2], 3);
        assert_eq!(r.fingerprints[1].order_histogram.as_ref().unwrap()[&4], 2);
    }

    proptest! {
        #[test]
        fn case3_families_share_genus(n in 2u64..12, k in 1u64..50) {
            let order = BigUint::from(4 * n * k);
            let a = genus_in(&t(2 * n, 2 * n, 2 * n), BigInt::from(order.clone()));
            let b = genus_in(&t(n, 4 * n, 4 * n), BigInt::from(order.clone()));
            prop_assert_eq!(a.clone(), b);
            if let Some(g) = a {
                prop_assert_eq!(g, case3_genus(n, &order).unwrap());
            }
        }

        #[test]
        fn genus_is_invariant_under_type_permutation(l in 2u64..9, m in 2u64..9, n in 2u64..9, k in 1u64..20) {
            let order = BigInt::from(l * m * n * k);
            let base = genus_in(&t(l, m, n), order.clone());
            for role in Role::ALL {
                prop_assert_eq!(genus_in(&t(l, m, n).permuted(role), order.clone()), base.clone());
            }
        }
    }
}
